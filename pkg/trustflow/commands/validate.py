"""
validate – report ecosystem invariant violations.
"""

from trustflow.commands.common import EXIT_INPUT_ERROR, EXIT_OK
from trustflow.services.bundle_loader import load_bundles, validate_ecosystem


def register(subparsers) -> None:
    parser = subparsers.add_parser("validate", help="check bundles against the ecosystem invariants")
    parser.add_argument("bundles", nargs="+")
    parser.set_defaults(handler=run)


def run(args) -> int:
    violations = validate_ecosystem(load_bundles(args.bundles))
    for v in violations:
        location = "/".join(part for part in (v.app_id, v.component, v.method) if part)
        index = f"#{v.index}" if v.index >= 0 else ""
        print(f"{v.code}\t{location}{index}\t{v.message}")
    return EXIT_INPUT_ERROR if violations else EXIT_OK
