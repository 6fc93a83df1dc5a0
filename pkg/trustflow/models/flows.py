"""
Flow-layer types – dependence nodes, intra-component flows, IPC resolutions,
critical flows, risk scores and permission findings.
"""

from enum import Enum
from typing import NamedTuple

from pydantic import BaseModel, ConfigDict

from trustflow.models.catalog import Resolution

PARAM = 0
STATEMENT = 1


class DepNode(NamedTuple):
    """Dependence-graph node; sorts params before statements, then by position."""

    method: str
    kind: int
    position: int

    def __str__(self) -> str:
        if self.kind == PARAM:
            return f"{self.method}@p{self.position}"
        return f"{self.method}#{self.position}"


class IntraFlow(BaseModel):
    model_config = ConfigDict(frozen=True)

    component: str  # app/component
    source: str  # entry point id
    target: str  # exit point id
    witness: tuple[str, ...]


class ResolvedTarget(BaseModel):
    model_config = ConfigDict(frozen=True)

    entry_id: str
    app_id: str
    component: str
    permission_blocked: bool = False
    export_blocked: bool = False


class IpcResolution(BaseModel):
    model_config = ConfigDict(frozen=True)

    exit_id: str
    app_id: str
    mechanism: str
    resolution: Resolution | None = None
    targets: tuple[ResolvedTarget, ...] = ()
    error: str | None = None


class AppFlow(BaseModel):
    model_config = ConfigDict(frozen=True)

    app_id: str
    entry: str
    exit: str


class FlowEndpoint(BaseModel):
    """A source or sink terminal of a critical flow."""

    model_config = ConfigDict(frozen=True)

    node: str
    app_id: str
    api: str
    label: str
    level: str


class CriticalFlow(BaseModel):
    model_config = ConfigDict(frozen=True)

    source: FlowEndpoint
    sink: FlowEndpoint
    path: tuple[str, ...]  # node ids, terminal to terminal
    apps_on_path: tuple[str, ...]  # witness order; a re-entered app appears again

    @property
    def app_set(self) -> tuple[str, ...]:
        return tuple(sorted(set(self.apps_on_path)))

    @property
    def id(self) -> str:
        return f"{self.source.node}->{self.sink.node}@{'+'.join(self.app_set)}"

    @property
    def edges(self) -> list[tuple[str, str]]:
        return list(zip(self.path, self.path[1:]))

    @property
    def is_transitive(self) -> bool:
        return len(self.apps_on_path) > 1

    def sort_key(self) -> tuple:
        return (self.source.api, self.sink.api, self.apps_on_path, self.source.node, self.sink.node)


class RiskLabel(str, Enum):
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"


class RiskScore(BaseModel):
    model_config = ConfigDict(frozen=True)

    impact: int
    probability: int
    risk: int
    label: RiskLabel


class Verdict(str, Enum):
    GUARDED = "Guarded"
    UNGUARDED = "Unguarded"
    SHARED_UID = "SharedUid"
    BLOCKED = "Blocked"


class PermissionFinding(BaseModel):
    model_config = ConfigDict(frozen=True)

    flow_id: str
    edge: tuple[str, str]
    verdict: Verdict
    detail: str
