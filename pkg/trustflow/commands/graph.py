"""
graph – DOT export of the composed ecosystem graph.
"""

from pathlib import Path

from trustflow.commands.common import EXIT_OK, add_output_flags, output_config
from trustflow.schemas.exchange import ExchangeDocument, FlowDocument
from trustflow.services.flowgraph import build_ecosystem
from trustflow.services.pipeline import DOT_FILE, EXCHANGE_FILE, FLOWS_FILE
from trustflow.services.report_service import to_dot
from trustflow.utils.documents import read_document, write_text


def add_document_flags(parser) -> None:
    parser.add_argument("--exchange", help=f"exchange document (default: <out>/{EXCHANGE_FILE})")
    parser.add_argument("--flows", help=f"flow document (default: <out>/{FLOWS_FILE})")


def read_documents(args, out: str) -> tuple[ExchangeDocument, FlowDocument]:
    exchange = read_document(args.exchange or Path(out) / EXCHANGE_FILE, ExchangeDocument)
    flow_doc = read_document(args.flows or Path(out) / FLOWS_FILE, FlowDocument)
    return exchange, flow_doc


def register(subparsers) -> None:
    parser = subparsers.add_parser("graph", help="compose the ecosystem graph and export DOT")
    add_document_flags(parser)
    add_output_flags(parser)
    parser.set_defaults(handler=run)


def run(args) -> int:
    config = output_config(args)
    exchange, flow_doc = read_documents(args, config.out)
    ecosystem = build_ecosystem(exchange, flow_doc)
    write_text(Path(config.out) / DOT_FILE, to_dot(ecosystem.graph, config.level))
    return EXIT_OK
