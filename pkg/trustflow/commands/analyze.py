"""
analyze – the whole pipeline, end to end.
"""

import logging

from trustflow.commands.common import (
    EXIT_FLOWS_FOUND,
    EXIT_INPUT_ERROR,
    EXIT_OK,
    add_analysis_flags,
    add_output_flags,
    check_ecosystem,
    run_config,
)
from trustflow.services.bundle_loader import load_bundle, load_bundles
from trustflow.services.pipeline import (
    load_run_catalog,
    run_analysis,
    run_with_installation,
    write_artifacts,
)

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("analyze", help="scan, slice, compose and report")
    parser.add_argument("bundles", nargs="+", help="bundle documents, one per app")
    parser.add_argument("--installing", help="bundle being installed; its new flows are marked")
    add_analysis_flags(parser)
    add_output_flags(parser)
    parser.set_defaults(handler=run)


def run(args) -> int:
    config = run_config(args)
    catalog = load_run_catalog(config.catalog)
    bundles = load_bundles(config.bundles)
    installing = load_bundle(config.installing) if config.installing else None

    if not check_ecosystem(bundles + ([installing] if installing else [])):
        return EXIT_INPUT_ERROR

    options = dict(
        jobs=config.jobs,
        max_witness_length=config.max_witness_length,
        max_app_sets=config.max_app_sets,
        record_timings=config.record_timings,
    )
    if installing:
        result = run_with_installation(bundles, installing, catalog, **options)
    else:
        result = run_analysis(bundles, catalog, **options)

    write_artifacts(result, config)
    count = len(result.report.critical_flows)
    logger.info(f"Analysis complete: {count} critical flow(s)")
    return EXIT_FLOWS_FOUND if count else EXIT_OK
