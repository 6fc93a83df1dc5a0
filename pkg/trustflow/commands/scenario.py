"""
gen-scenario – write the bundle documents of a named attack scenario.
"""

from trustflow.commands.common import EXIT_OK
from trustflow.services.scenarios import SCENARIOS, write_scenario


def register(subparsers) -> None:
    parser = subparsers.add_parser("gen-scenario", help="write scenario fixture bundles")
    parser.add_argument("kind", help=f"one of {', '.join(SCENARIOS)}")
    parser.add_argument("out_dir", help="directory receiving one <app_id>.json per app")
    parser.set_defaults(handler=run)


def run(args) -> int:
    write_scenario(args.kind, args.out_dir)
    return EXIT_OK
