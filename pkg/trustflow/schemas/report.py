"""
Report document – self-contained: every view (summary, re-rendered report)
is a pure function of it.
"""

from pydantic import BaseModel, ConfigDict, Field

from trustflow.schemas.exchange import DOCUMENT


class DigestRecord(BaseModel):
    model_config = DOCUMENT

    apps: list[str] = []
    labels: dict[str, str] = {}
    catalog_version: str | None = None
    catalog_digest: str | None = None


class EndpointRecord(BaseModel):
    model_config = DOCUMENT

    node: str
    app: str
    api: str
    label: str
    level: str


class RiskRecord(BaseModel):
    model_config = DOCUMENT

    impact: int
    probability: int
    risk: int
    label: str


class FindingRecord(BaseModel):
    model_config = DOCUMENT

    edge: list[str]
    verdict: str
    detail: str


class CriticalFlowRecord(BaseModel):
    model_config = DOCUMENT

    id: str
    source: EndpointRecord
    sink: EndpointRecord
    apps: list[str]
    risk: RiskRecord
    permissions: list[FindingRecord] = []
    witness: list[str] = []
    joins: list[list[str]] = []  # app sub-chains joining mid-path


class AppFlowRecord(BaseModel):
    model_config = DOCUMENT

    app: str
    entry: str
    exit: str


class ResolutionErrorRecord(BaseModel):
    model_config = DOCUMENT

    exit: str
    mechanism: str
    error: str


class StatsRecord(BaseModel):
    model_config = DOCUMENT

    apps: int = 0
    components: int = 0
    points: int = 0
    intra_flows: int = 0
    ipc_edges: int = 0
    inter_app_edges: int = 0
    critical_flows: int = 0
    timings: dict[str, float] | None = None


class AnalysisReport(BaseModel):
    model_config = DOCUMENT

    digest: DigestRecord = Field(default_factory=DigestRecord)
    risk_model: dict = {}
    critical_flows: list[CriticalFlowRecord] = []
    application_flows: list[AppFlowRecord] = []
    resolution_errors: list[ResolutionErrorRecord] = []
    stats: StatsRecord = Field(default_factory=StatsRecord)
    new_flows: list[str] | None = None
