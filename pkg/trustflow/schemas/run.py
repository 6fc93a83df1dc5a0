"""
Run configuration – settings merged with command-line flags.
"""

import os
from pathlib import Path

from pydantic import BaseModel, field_validator

EMIT_FLAGS = ("exchange", "flows", "dot", "report", "summary")
LEVELS = ("point", "component", "application")


class OutputConfig(BaseModel):
    """Where artifacts go and which ones are written."""

    out: str = "trustflow-out"
    emit: list[str] = list(EMIT_FLAGS)
    level: str = "component"

    @field_validator("emit", mode="before")
    @classmethod
    def split_emit(cls, value):
        if isinstance(value, str):
            value = [part.strip() for part in value.split(",") if part.strip()]
        unknown = sorted(set(value) - set(EMIT_FLAGS))
        if unknown:
            raise ValueError(f"unknown emit flag(s): {', '.join(unknown)}")
        return [flag for flag in EMIT_FLAGS if flag in value]

    @field_validator("level")
    @classmethod
    def known_level(cls, value: str) -> str:
        if value not in LEVELS:
            raise ValueError(f"level must be one of {', '.join(LEVELS)}")
        return value

    @field_validator("out")
    @classmethod
    def writable_output(cls, value: str) -> str:
        existing = Path(value).resolve()
        while not existing.exists():
            existing = existing.parent
        if not existing.is_dir() or not os.access(existing, os.W_OK):
            raise ValueError(f"output directory {value} is not writable")
        return value


class RunConfig(OutputConfig):
    bundles: list[str]
    catalog: str | None = None  # None → shipped tables
    jobs: int = 0  # 0 → one worker per core
    max_witness_length: int = 0
    max_app_sets: int = 16
    record_timings: bool = False
    installing: str | None = None  # bundle whose installation delta is reported

    @field_validator("bundles")
    @classmethod
    def at_least_one_bundle(cls, value: list[str]) -> list[str]:
        if not value:
            raise ValueError("at least one bundle is required")
        return value

    @field_validator("jobs", "max_witness_length", "max_app_sets")
    @classmethod
    def not_negative(cls, value: int) -> int:
        if value < 0:
            raise ValueError("must be >= 0")
        return value
