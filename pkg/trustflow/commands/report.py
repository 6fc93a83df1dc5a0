"""
report – critical flows, risk scores and permission findings from the
exchange and flow documents.
"""

import logging
from pathlib import Path

from trustflow.commands.common import (
    EXIT_FLOWS_FOUND,
    EXIT_OK,
    add_output_flags,
    output_config,
)
from trustflow.commands.graph import add_document_flags, read_documents
from trustflow.config import get_settings
from trustflow.services.pipeline import (
    DOT_FILE,
    REPORT_FILE,
    SUMMARY_FILE,
    PhaseTimer,
    report_phase,
)
from trustflow.services.report_service import to_dot, user_summary
from trustflow.utils.documents import write_document, write_text

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("report", help="score critical flows and write the report")
    add_document_flags(parser)
    parser.add_argument("--max-witness-length", type=int, help="cap on critical-flow witness length (0 = none)")
    parser.add_argument("--max-app-sets", type=int, help="distinct app sets kept per node in the flow search (0 = none)")
    add_output_flags(parser)
    parser.set_defaults(handler=run)


def run(args) -> int:
    config = output_config(args)
    settings = get_settings()
    max_length = args.max_witness_length
    if max_length is None:
        max_length = settings.MAX_WITNESS_LENGTH
    max_app_sets = args.max_app_sets
    if max_app_sets is None:
        max_app_sets = settings.MAX_APP_SETS

    exchange, flow_doc = read_documents(args, config.out)
    ecosystem, _, report = report_phase(
        exchange, flow_doc, max_length, PhaseTimer(settings.RECORD_TIMINGS), max_app_sets
    )

    out = Path(config.out)
    if "dot" in config.emit:
        write_text(out / DOT_FILE, to_dot(ecosystem.graph, config.level))
    if "report" in config.emit:
        write_document(out / REPORT_FILE, report)
    if "summary" in config.emit:
        write_text(out / SUMMARY_FILE, user_summary(report))
    return EXIT_FLOWS_FOUND if report.critical_flows else EXIT_OK
