"""
Command-line entry point.
Configures logging, registers the subcommands and maps failures to exit codes.
"""

import argparse
import logging
import sys

from trustflow import __version__
from trustflow.commands import analyze, graph, report, scan, scenario, slicing, validate
from trustflow.commands.common import EXIT_INPUT_ERROR, EXIT_INTERNAL_ERROR
from trustflow.config import get_settings
from trustflow.errors import InputError

logger = logging.getLogger(__name__)

COMMANDS = [analyze, scan, slicing, graph, report, validate, scenario]


def setup_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format="%(asctime)s | %(levelname)-8s | %(name)s | %(message)s",
        stream=sys.stderr,
        force=True,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trustflow",
        description="Transitive information-flow analysis across app ecosystems",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # --help and --version exit 0; usage errors are input errors
        return e.code if e.code == 0 else EXIT_INPUT_ERROR
    setup_logging(args.log_level or get_settings().LOG_LEVEL)

    try:
        return args.handler(args)
    except InputError as e:
        logger.error(str(e))
        return EXIT_INPUT_ERROR
    except Exception:
        logger.exception(f"Internal error while running '{args.command}'")
        return EXIT_INTERNAL_ERROR


if __name__ == "__main__":
    sys.exit(main())
