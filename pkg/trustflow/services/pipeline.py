"""
Pipeline – runs the analysis phases in order. Phases hand over only the
exchange and flow documents, so running them as separate commands yields
the same report as one end-to-end run.

components → points → slices → component graphs → app flows → ecosystem
→ critical flows → scores → report
"""

import logging
import time
from contextlib import contextmanager
from pathlib import Path
from typing import NamedTuple

from trustflow.models.app import AppBundle
from trustflow.models.catalog import ApiCatalog
from trustflow.models.flows import CriticalFlow
from trustflow.schemas.exchange import ExchangeDocument, FlowDocument
from trustflow.schemas.report import AnalysisReport
from trustflow.schemas.run import RunConfig
from trustflow.services.arch_scan import emit_exchange, scan_ecosystem, scans_from_exchange
from trustflow.services.catalog_service import default_catalog, load_catalog_file
from trustflow.services.flowgraph import (
    DEFAULT_MAX_APP_SETS,
    EcosystemGraph,
    build_ecosystem,
    critical_flows,
)
from trustflow.services.report_service import install_delta, to_dot, to_report, user_summary
from trustflow.services.risk_engine import permission_boundaries, score_flow
from trustflow.services.slicer import emit_flows, slice_ecosystem
from trustflow.utils.documents import dump_document, parse_document, write_document, write_text

logger = logging.getLogger(__name__)

EXCHANGE_FILE = "exchange.json"
FLOWS_FILE = "flows.json"
DOT_FILE = "flows.dot"
REPORT_FILE = "report.json"
SUMMARY_FILE = "summary.txt"


class PhaseTimer:
    """Wall-clock seconds per phase; empty unless enabled."""

    def __init__(self, enabled: bool = False):
        self.enabled = enabled
        self.timings: dict[str, float] = {}

    @contextmanager
    def phase(self, name: str):
        start = time.perf_counter()
        logger.info(f"Phase {name} started")
        yield
        elapsed = time.perf_counter() - start
        if self.enabled:
            self.timings[name] = round(elapsed, 4)
        logger.info(f"Phase {name} finished in {elapsed:.3f}s")

    def result(self) -> dict[str, float] | None:
        return dict(self.timings) if self.enabled else None


class AnalysisResult(NamedTuple):
    exchange: ExchangeDocument
    flow_doc: FlowDocument
    ecosystem: EcosystemGraph
    flows: list[CriticalFlow]
    report: AnalysisReport


def load_run_catalog(path: str | None) -> ApiCatalog:
    return load_catalog_file(path) if path else default_catalog()


def _canonical(doc, model):
    """The document as a later phase would read it back from disk."""
    return parse_document(dump_document(doc), model, name=model.__name__)


def scan_phase(bundles: list[AppBundle], catalog: ApiCatalog) -> ExchangeDocument:
    index, scans = scan_ecosystem(bundles, catalog)
    return _canonical(emit_exchange(index, scans, catalog), ExchangeDocument)


def slice_phase(bundles: list[AppBundle], exchange: ExchangeDocument, jobs: int = 0) -> FlowDocument:
    flows = slice_ecosystem(bundles, scans_from_exchange(exchange), jobs)
    return _canonical(emit_flows(flows), FlowDocument)


def report_phase(
    exchange: ExchangeDocument,
    flow_doc: FlowDocument,
    max_witness_length: int = 0,
    timer: PhaseTimer | None = None,
    max_app_sets: int = DEFAULT_MAX_APP_SETS,
) -> tuple[EcosystemGraph, list[CriticalFlow], AnalysisReport]:
    timer = timer or PhaseTimer()
    with timer.phase("graph"):
        ecosystem = build_ecosystem(exchange, flow_doc)
        flows = critical_flows(
            ecosystem.graph, max_length=max_witness_length, max_app_sets=max_app_sets
        )
    with timer.phase("risk"):
        scores = {f.id: score_flow(f) for f in flows}
        findings = {f.id: permission_boundaries(f, ecosystem.graph) for f in flows}
    report = to_report(
        flows,
        scores,
        findings,
        ecosystem,
        catalog_version=exchange.catalog_version,
        catalog_digest=exchange.catalog_digest,
        intra_flows=len(flow_doc.flows),
        timings=timer.result(),
    )
    return ecosystem, flows, report


def run_analysis(
    bundles: list[AppBundle],
    catalog: ApiCatalog,
    jobs: int = 0,
    max_witness_length: int = 0,
    max_app_sets: int = DEFAULT_MAX_APP_SETS,
    record_timings: bool = False,
) -> AnalysisResult:
    timer = PhaseTimer(record_timings)
    with timer.phase("scan"):
        exchange = scan_phase(bundles, catalog)
    with timer.phase("slice"):
        flow_doc = slice_phase(bundles, exchange, jobs)
    ecosystem, flows, report = report_phase(
        exchange, flow_doc, max_witness_length, timer, max_app_sets
    )
    return AnalysisResult(exchange, flow_doc, ecosystem, flows, report)


def run_with_installation(
    bundles: list[AppBundle],
    installing: AppBundle,
    catalog: ApiCatalog,
    **options,
) -> AnalysisResult:
    """Analysis of the ecosystem after installing one more app, marking the flows it adds."""
    before = run_analysis(bundles, catalog, **options)
    after = run_analysis(bundles + [installing], catalog, **options)
    new_flows = install_delta(before.report, after.report)
    logger.info(f"Installing {installing.app_id} adds {len(new_flows)} critical flow(s)")
    report = after.report.model_copy(update={"new_flows": new_flows})
    return after._replace(report=report)


def write_artifacts(result: AnalysisResult, config: RunConfig) -> list[Path]:
    out = Path(config.out)
    written = []
    if "exchange" in config.emit:
        written.append(write_document(out / EXCHANGE_FILE, result.exchange))
    if "flows" in config.emit:
        written.append(write_document(out / FLOWS_FILE, result.flow_doc))
    if "dot" in config.emit:
        written.append(write_text(out / DOT_FILE, to_dot(result.ecosystem.graph, config.level)))
    if "report" in config.emit:
        written.append(write_document(out / REPORT_FILE, result.report))
    if "summary" in config.emit:
        written.append(write_text(out / SUMMARY_FILE, user_summary(result.report)))
    return written
