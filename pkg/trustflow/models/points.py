"""
Architectural-layer types – component index and IPC entry/exit points.
"""

from enum import Enum

from pydantic import BaseModel, ConfigDict

from trustflow.models.app import ComponentKind
from trustflow.models.catalog import ProviderRole, Resolution


class PointRole(str, Enum):
    ENTRY = "entry"
    EXIT = "exit"


class PointOrigin(str, Enum):
    LIFECYCLE = "lifecycle"
    IPC_IN_API = "ipc_in_api"
    SOURCE_API = "source_api"
    IPC_OUT_API = "ipc_out_api"
    SINK_API = "sink_api"


class IpcPoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: str
    app_id: str
    component: str
    role: PointRole
    origin: PointOrigin
    method: str
    statement_index: int | None = None
    api_name: str | None = None
    variables: tuple[str, ...] = ()
    target: str | None = None
    resolution: Resolution | None = None
    level: str | None = None
    label: str | None = None
    provider: ProviderRole | None = None
    covers: tuple[int, ...] = ()  # IPC-in statements folded into a lifecycle entry

    @property
    def component_key(self) -> str:
        return f"{self.app_id}/{self.component}"

    def sort_key(self) -> tuple:
        index = -1 if self.statement_index is None else self.statement_index
        return (self.method, index, self.role.value)


def point_id(app_id: str, component: str, method: str, index: int | None, role: PointRole) -> str:
    """Stable point identifier: app/component/method#index:role."""
    location = method if index is None else f"{method}#{index}"
    return f"{app_id}/{component}/{location}:{role.value}"


class AppRef(BaseModel):
    model_config = ConfigDict(frozen=True)

    app_id: str
    label: str | None = None
    granted_permissions: tuple[str, ...] = ()
    shared_user_id: str | None = None

    @property
    def display_name(self) -> str:
        return self.label or self.app_id

    def shares_uid_with(self, other: "AppRef") -> bool:
        if self.app_id == other.app_id:
            return True
        return self.shared_user_id is not None and self.shared_user_id == other.shared_user_id


class ComponentRef(BaseModel):
    model_config = ConfigDict(frozen=True)

    app_id: str
    name: str
    kind: ComponentKind
    exported: bool = False
    required_permission: str | None = None
    intent_filters: tuple[str, ...] = ()

    @property
    def key(self) -> str:
        return f"{self.app_id}/{self.name}"


class ComponentIndex(BaseModel):
    """All (app, component) pairs of an ecosystem, sorted by (app id, name)."""

    model_config = ConfigDict(frozen=True)

    apps: tuple[AppRef, ...] = ()
    components: tuple[ComponentRef, ...] = ()

    def app(self, app_id: str) -> AppRef | None:
        for a in self.apps:
            if a.app_id == app_id:
                return a
        return None

    def get(self, key: str) -> ComponentRef | None:
        for c in self.components:
            if c.key == key:
                return c
        return None

    def for_app(self, app_id: str) -> list[ComponentRef]:
        return [c for c in self.components if c.app_id == app_id]


class ScanResult(BaseModel):
    """Points found in one component, each list ordered by (method, index)."""

    model_config = ConfigDict(frozen=True)

    component: ComponentRef
    entries: tuple[IpcPoint, ...] = ()
    exits: tuple[IpcPoint, ...] = ()

    @property
    def points(self) -> tuple[IpcPoint, ...]:
        return tuple(sorted(self.entries + self.exits, key=IpcPoint.sort_key))
