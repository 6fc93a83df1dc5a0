"""
Exchange document – hand-off from the architectural scan to the slicer and
the flow-graph phase. Flow document – hand-off from the slicer back.
"""

from pydantic import BaseModel, ConfigDict, Field

DOCUMENT = ConfigDict(extra="forbid", populate_by_name=True)


class PointRecord(BaseModel):
    model_config = DOCUMENT

    id: str
    role: str
    origin: str
    method: str
    index: int | None = None
    api: str | None = None
    variables: list[str] = Field(default=[], alias="vars")
    target: str | None = None
    resolution: str | None = None
    level: str | None = None
    label: str | None = None
    provider: str | None = None
    covers: list[int] | None = None


class ComponentRecord(BaseModel):
    model_config = DOCUMENT

    app: str
    name: str
    kind: str
    exported: bool = False
    required_permission: str | None = None
    intent_filters: list[str] = []
    points: list[PointRecord] = []


class AppRecord(BaseModel):
    model_config = DOCUMENT

    app_id: str
    label: str | None = None
    granted_permissions: list[str] = []
    shared_user_id: str | None = None


class ExchangeDocument(BaseModel):
    model_config = DOCUMENT

    catalog_version: str | None = None
    catalog_digest: str | None = None
    apps: list[AppRecord] = []
    components: list[ComponentRecord] = []


class FlowRecord(BaseModel):
    model_config = DOCUMENT

    component: str
    source: str = Field(alias="from")
    target: str = Field(alias="to")
    witness: list[str] = []


class FlowDocument(BaseModel):
    model_config = DOCUMENT

    flows: list[FlowRecord] = []
