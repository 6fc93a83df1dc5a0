"""
Shared command plumbing – exit codes, common flags, settings merge.
"""

import logging

from pydantic import ValidationError

from trustflow.config import get_settings
from trustflow.errors import ConfigError
from trustflow.models.app import AppBundle
from trustflow.schemas.run import EMIT_FLAGS, LEVELS, OutputConfig, RunConfig
from trustflow.services.bundle_loader import validate_ecosystem

logger = logging.getLogger(__name__)

# ─── Exit codes ───
EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_INTERNAL_ERROR = 2
EXIT_FLOWS_FOUND = 3


def add_output_flags(parser) -> None:
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--emit", help=f"comma-separated artifacts ({','.join(EMIT_FLAGS)})")
    parser.add_argument("--level", choices=LEVELS, help="DOT abstraction level")


def add_analysis_flags(parser) -> None:
    parser.add_argument("--catalog", help="catalog document (default: shipped tables)")
    parser.add_argument("--jobs", type=int, help="slicing workers (0 = one per core)")
    parser.add_argument("--max-witness-length", type=int, help="cap on critical-flow witness length (0 = none)")
    parser.add_argument("--max-app-sets", type=int, help="distinct app sets kept per node in the flow search (0 = none)")


def _pick(args, name: str, default):
    value = getattr(args, name, None)
    return default if value is None else value


def _build(model, **fields):
    try:
        return model(**fields)
    except ValidationError as e:
        first = e.errors()[0]
        field = ".".join(str(part) for part in first["loc"])
        raise ConfigError("invalid_option", f"{field}: {first['msg']}") from e


def output_config(args) -> OutputConfig:
    settings = get_settings()
    return _build(
        OutputConfig,
        out=_pick(args, "out", settings.OUTPUT_DIR),
        emit=_pick(args, "emit", settings.EMIT),
        level=_pick(args, "level", settings.LEVEL),
    )


def run_config(args) -> RunConfig:
    """Command-line flags over TRUSTFLOW_* settings."""
    settings = get_settings()
    return _build(
        RunConfig,
        bundles=list(getattr(args, "bundles", None) or []),
        out=_pick(args, "out", settings.OUTPUT_DIR),
        emit=_pick(args, "emit", settings.EMIT),
        level=_pick(args, "level", settings.LEVEL),
        catalog=_pick(args, "catalog", settings.CATALOG_PATH),
        jobs=_pick(args, "jobs", settings.JOBS),
        max_witness_length=_pick(args, "max_witness_length", settings.MAX_WITNESS_LENGTH),
        max_app_sets=_pick(args, "max_app_sets", settings.MAX_APP_SETS),
        record_timings=settings.RECORD_TIMINGS,
        installing=getattr(args, "installing", None),
    )


def check_ecosystem(bundles: list[AppBundle]) -> bool:
    """Log every violation; True when the ecosystem is analyzable."""
    violations = validate_ecosystem(bundles)
    for v in violations:
        location = "/".join(part for part in (v.app_id, v.component, v.method) if part)
        index = f"#{v.index}" if v.index >= 0 else ""
        logger.error(f"{v.code}: {location}{index}: {v.message}")
    return not violations
