"""
Classification tables – IPC mechanisms, data sources with criticality, data
sinks with attack complexity, and lifecycle entry methods per component kind.
"""

from enum import Enum

from pydantic import BaseModel, ConfigDict

from trustflow.models.app import ComponentKind


class Criticality(str, Enum):
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"

    @property
    def rank(self) -> int:
        return _CRITICALITY_RANK[self]


class AttackComplexity(str, Enum):
    MEDIUM = "medium"
    HIGH = "high"
    VERY_HIGH = "very_high"

    @property
    def rank(self) -> int:
        return _COMPLEXITY_RANK[self]


_CRITICALITY_RANK = {Criticality.LOW: 0, Criticality.MEDIUM: 1, Criticality.HIGH: 2}
_COMPLEXITY_RANK = {AttackComplexity.MEDIUM: 0, AttackComplexity.HIGH: 1, AttackComplexity.VERY_HIGH: 2}


class Resolution(str, Enum):
    EXPLICIT = "explicit"
    IMPLICIT_ACTION = "implicit_action"
    BROADCAST = "broadcast"


class ApiKind(str, Enum):
    SOURCE = "source"
    SINK = "sink"
    IPC_OUT = "ipc_out"
    IPC_IN = "ipc_in"
    NEUTRAL = "neutral"


class ProviderRole(str, Enum):
    READ = "read"
    WRITE = "write"


class ApiClass(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: ApiKind
    criticality: Criticality | None = None  # Source only
    attack_complexity: AttackComplexity | None = None  # Sink only
    resolution: Resolution | None = None  # IpcOut only
    label: str | None = None
    provider: ProviderRole | None = None

    @property
    def level(self) -> str | None:
        if self.criticality is not None:
            return self.criticality.value
        if self.attack_complexity is not None:
            return self.attack_complexity.value
        return None


NEUTRAL = ApiClass(kind=ApiKind.NEUTRAL)


class ApiCatalog(BaseModel):
    model_config = ConfigDict(frozen=True)

    version: str = "custom"
    digest: str = ""
    entries: dict[str, ApiClass]
    lifecycle_entries: dict[ComponentKind, frozenset[str]]

    def classify(self, name: str | None) -> ApiClass:
        if not name:
            return NEUTRAL
        return self.entries.get(name, NEUTRAL)

    def lifecycle_methods(self, kind: ComponentKind) -> frozenset[str]:
        return self.lifecycle_entries.get(kind, frozenset())
