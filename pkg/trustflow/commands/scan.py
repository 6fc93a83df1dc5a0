"""
scan – architectural scan only; writes the exchange document.
"""

from pathlib import Path

from trustflow.commands.common import EXIT_INPUT_ERROR, EXIT_OK, check_ecosystem, run_config
from trustflow.services.bundle_loader import load_bundles
from trustflow.services.pipeline import EXCHANGE_FILE, load_run_catalog, scan_phase
from trustflow.utils.documents import write_document


def register(subparsers) -> None:
    parser = subparsers.add_parser("scan", help="find components and IPC points")
    parser.add_argument("bundles", nargs="+")
    parser.add_argument("--catalog", help="catalog document (default: shipped tables)")
    parser.add_argument("--out", help="output directory")
    parser.set_defaults(handler=run)


def run(args) -> int:
    config = run_config(args)
    bundles = load_bundles(config.bundles)
    if not check_ecosystem(bundles):
        return EXIT_INPUT_ERROR
    exchange = scan_phase(bundles, load_run_catalog(config.catalog))
    write_document(Path(config.out) / EXCHANGE_FILE, exchange)
    return EXIT_OK
