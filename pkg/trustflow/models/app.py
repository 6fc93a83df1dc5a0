"""
Ecosystem data model – apps, components, methods and IR statements.
All objects are frozen after parsing and safe to share across workers.
"""

from enum import Enum

from pydantic import BaseModel, ConfigDict


class ComponentKind(str, Enum):
    ACTIVITY = "Activity"
    SERVICE = "Service"
    CONTENT_PROVIDER = "ContentProvider"
    BROADCAST_RECEIVER = "BroadcastReceiver"


class StatementKind(str, Enum):
    CONST = "const"
    ASSIGN = "assign"
    CALL = "call"
    API = "api"


class Statement(BaseModel):
    """
    One three-address statement.
    `uses` holds the assign operands, or the argument variables of a call/api.
    """

    model_config = ConfigDict(frozen=True)

    kind: StatementKind
    index: int
    defines: str | None = None
    uses: tuple[str, ...] = ()
    callee: str | None = None  # Call only
    api_name: str | None = None  # Api only
    target: str | None = None  # Api only, literal component / action / URI


class Method(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    params: tuple[str, ...] = ()
    body: tuple[Statement, ...] = ()

    def definitions(self) -> list[Statement]:
        """Statements whose value a Call of this method may receive."""
        return [stmt for stmt in self.body if stmt.defines is not None]


class Component(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    kind: ComponentKind
    exported: bool = False
    required_permission: str | None = None
    intent_filters: tuple[str, ...] = ()
    methods: tuple[Method, ...] = ()

    def method(self, name: str) -> Method | None:
        for m in self.methods:
            if m.name == name:
                return m
        return None


class AppBundle(BaseModel):
    model_config = ConfigDict(frozen=True)

    app_id: str
    label: str | None = None
    granted_permissions: frozenset[str] = frozenset()
    shared_user_id: str | None = None
    components: tuple[Component, ...] = ()

    @property
    def display_name(self) -> str:
        return self.label or self.app_id

    def component(self, name: str) -> Component | None:
        for c in self.components:
            if c.name == name:
                return c
        return None


class Violation(BaseModel):
    """One invariant violation found by ecosystem validation."""

    model_config = ConfigDict(frozen=True)

    code: str
    app_id: str
    component: str = ""
    method: str = ""
    index: int = -1
    message: str

    def sort_key(self) -> tuple:
        return (self.code, self.app_id, self.component, self.method, self.index, self.message)
