"""
slice – intra-component flows from the bundles and an exchange document.
"""

from pathlib import Path

from trustflow.commands.common import EXIT_OK, run_config
from trustflow.schemas.exchange import ExchangeDocument
from trustflow.services.bundle_loader import load_bundles
from trustflow.services.pipeline import EXCHANGE_FILE, FLOWS_FILE, slice_phase
from trustflow.utils.documents import read_document, write_document


def register(subparsers) -> None:
    parser = subparsers.add_parser("slice", help="slice every component listed in an exchange document")
    parser.add_argument("bundles", nargs="+")
    parser.add_argument("--exchange", help=f"exchange document (default: <out>/{EXCHANGE_FILE})")
    parser.add_argument("--jobs", type=int, help="slicing workers (0 = one per core)")
    parser.add_argument("--out", help="output directory")
    parser.set_defaults(handler=run)


def run(args) -> int:
    config = run_config(args)
    exchange = read_document(args.exchange or Path(config.out) / EXCHANGE_FILE, ExchangeDocument)
    flow_doc = slice_phase(load_bundles(config.bundles), exchange, config.jobs)
    write_document(Path(config.out) / FLOWS_FILE, flow_doc)
    return EXIT_OK
