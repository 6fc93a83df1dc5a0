"""
Bundle document schema (strict – unknown keys are rejected).
"""

from typing import Literal, Union

from pydantic import BaseModel, ConfigDict, Field

STRICT = ConfigDict(extra="forbid", populate_by_name=True)


class ConstBody(BaseModel):
    model_config = STRICT

    def_: str = Field(alias="def")


class AssignBody(BaseModel):
    model_config = STRICT

    def_: str = Field(alias="def")
    uses: list[str] = []


class CallBody(BaseModel):
    model_config = STRICT

    def_: str | None = Field(default=None, alias="def")
    callee: str
    args: list[str] = []


class ApiBody(BaseModel):
    model_config = STRICT

    def_: str | None = Field(default=None, alias="def")
    name: str
    args: list[str] = []
    target: str | None = None


class ConstStatement(BaseModel):
    model_config = STRICT

    const: ConstBody


class AssignStatement(BaseModel):
    model_config = STRICT

    assign: AssignBody


class CallStatement(BaseModel):
    model_config = STRICT

    call: CallBody


class ApiStatement(BaseModel):
    model_config = STRICT

    api: ApiBody


StatementDocument = Union[ConstStatement, AssignStatement, CallStatement, ApiStatement]


class MethodDocument(BaseModel):
    model_config = STRICT

    name: str
    params: list[str] = []
    body: list[StatementDocument] = []


class ComponentDocument(BaseModel):
    model_config = STRICT

    name: str
    kind: Literal["Activity", "Service", "ContentProvider", "BroadcastReceiver"]
    exported: bool = False
    required_permission: str | None = None
    intent_filters: list[str] = []
    methods: list[MethodDocument] = []


class BundleDocument(BaseModel):
    model_config = STRICT

    app_id: str
    label: str | None = None
    granted_permissions: list[str] = []
    shared_user_id: str | None = None
    components: list[ComponentDocument] = []
