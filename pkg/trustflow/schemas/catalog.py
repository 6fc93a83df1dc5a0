"""
Catalog document schema.
"""

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field


class ApiEntryDocument(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    name: str
    class_: Literal["source", "sink", "ipc_out", "ipc_in"] = Field(alias="class")
    level: str | None = None
    resolution: Literal["explicit", "implicit_action", "broadcast"] | None = None
    label: str | None = None
    provider: Literal["read", "write"] | None = None


class CatalogDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    version: str | None = None
    apis: list[ApiEntryDocument] = []
    lifecycle: dict[str, list[str]] = {}
