"""
Bundle loader – parses bundle documents into the immutable ecosystem model,
serializes them back, and validates whole ecosystems.
"""

import json
import logging
import re
from pathlib import Path

from pydantic import ValidationError

from trustflow.errors import BundleError
from trustflow.models.app import (
    AppBundle,
    Component,
    ComponentKind,
    Method,
    Statement,
    StatementKind,
    Violation,
)
from trustflow.schemas.bundle import (
    ApiBody,
    ApiStatement,
    AssignBody,
    AssignStatement,
    BundleDocument,
    CallBody,
    CallStatement,
    ComponentDocument,
    ConstBody,
    ConstStatement,
    MethodDocument,
)

logger = logging.getLogger(__name__)

IDENTIFIER = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


# ─── Document → model ───

def _statement_from_document(index: int, doc) -> Statement:
    if isinstance(doc, ConstStatement):
        return Statement(kind=StatementKind.CONST, index=index, defines=doc.const.def_)
    if isinstance(doc, AssignStatement):
        return Statement(
            kind=StatementKind.ASSIGN, index=index,
            defines=doc.assign.def_, uses=tuple(doc.assign.uses),
        )
    if isinstance(doc, CallStatement):
        return Statement(
            kind=StatementKind.CALL, index=index,
            defines=doc.call.def_, uses=tuple(doc.call.args), callee=doc.call.callee,
        )
    return Statement(
        kind=StatementKind.API, index=index,
        defines=doc.api.def_, uses=tuple(doc.api.args),
        api_name=doc.api.name, target=doc.api.target,
    )


def _component_from_document(doc: ComponentDocument) -> Component:
    methods = tuple(
        Method(
            name=m.name,
            params=tuple(m.params),
            body=tuple(_statement_from_document(i, s) for i, s in enumerate(m.body)),
        )
        for m in doc.methods
    )
    return Component(
        name=doc.name,
        kind=ComponentKind(doc.kind),
        exported=doc.exported,
        required_permission=doc.required_permission,
        intent_filters=tuple(doc.intent_filters),
        methods=methods,
    )


def bundle_from_document(doc: BundleDocument) -> AppBundle:
    return AppBundle(
        app_id=doc.app_id,
        label=doc.label,
        granted_permissions=frozenset(doc.granted_permissions),
        shared_user_id=doc.shared_user_id,
        components=tuple(_component_from_document(c) for c in doc.components),
    )


def _check_references(bundle: AppBundle) -> None:
    """Cross-reference errors that make a bundle unusable."""
    seen_components: set[str] = set()
    for component in bundle.components:
        if component.name in seen_components:
            raise BundleError(
                "duplicate_component",
                f"{bundle.app_id}: component '{component.name}' declared twice",
            )
        seen_components.add(component.name)

        seen_methods: set[str] = set()
        for method in component.methods:
            if method.name in seen_methods:
                raise BundleError(
                    "duplicate_method",
                    f"{bundle.app_id}/{component.name}: method '{method.name}' declared twice",
                )
            seen_methods.add(method.name)

        for method in component.methods:
            for stmt in method.body:
                if stmt.kind == StatementKind.CALL and stmt.callee not in seen_methods:
                    raise BundleError(
                        "unknown_callee",
                        f"{bundle.app_id}/{component.name}/{method.name}#{stmt.index}: "
                        f"unknown callee '{stmt.callee}'",
                    )


def parse_bundle(text: str) -> AppBundle:
    """
    Parse a bundle document.
    Raises BundleError with code syntax / schema / duplicate_component /
    duplicate_method / unknown_callee.
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise BundleError("syntax", e.msg, line=e.lineno, column=e.colno) from e

    try:
        doc = BundleDocument.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise BundleError("schema", f"{location}: {first['msg']}") from e

    bundle = bundle_from_document(doc)
    _check_references(bundle)
    logger.debug(f"Parsed bundle {bundle.app_id} with {len(bundle.components)} components")
    return bundle


def load_bundle(path: str | Path) -> AppBundle:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise BundleError("io", f"cannot read {path}: {e}") from e
    try:
        return parse_bundle(text)
    except BundleError as e:
        raise BundleError(e.code, f"{path}: {e.detail}") from e


def load_bundles(paths: list[str | Path]) -> list[AppBundle]:
    bundles = [load_bundle(p) for p in paths]
    logger.info(f"Loaded {len(bundles)} bundle(s)")
    return bundles


# ─── Model → document ───

def _statement_to_document(stmt: Statement):
    if stmt.kind == StatementKind.CONST:
        return ConstStatement(const=ConstBody(def_=stmt.defines))
    if stmt.kind == StatementKind.ASSIGN:
        return AssignStatement(assign=AssignBody(def_=stmt.defines, uses=list(stmt.uses)))
    if stmt.kind == StatementKind.CALL:
        return CallStatement(call=CallBody(def_=stmt.defines, callee=stmt.callee, args=list(stmt.uses)))
    return ApiStatement(
        api=ApiBody(def_=stmt.defines, name=stmt.api_name, args=list(stmt.uses), target=stmt.target)
    )


def bundle_to_document(bundle: AppBundle) -> BundleDocument:
    return BundleDocument(
        app_id=bundle.app_id,
        label=bundle.label,
        granted_permissions=sorted(bundle.granted_permissions),
        shared_user_id=bundle.shared_user_id,
        components=[
            ComponentDocument(
                name=c.name,
                kind=c.kind.value,
                exported=c.exported,
                required_permission=c.required_permission,
                intent_filters=list(c.intent_filters),
                methods=[
                    MethodDocument(
                        name=m.name,
                        params=list(m.params),
                        body=[_statement_to_document(s) for s in m.body],
                    )
                    for m in c.methods
                ],
            )
            for c in bundle.components
        ],
    )


def serialize_bundle(bundle: AppBundle) -> str:
    doc = bundle_to_document(bundle)
    return doc.model_dump_json(by_alias=True, exclude_none=True, indent=2) + "\n"


# ─── Ecosystem validation ───

def _method_violations(app_id: str, component: Component, method: Method) -> list[Violation]:
    found: list[Violation] = []
    where = {"app_id": app_id, "component": component.name, "method": method.name}

    if len(set(method.params)) != len(method.params):
        found.append(Violation(code="duplicate_param", message="parameter names repeat", **where))

    defined = set(method.params)
    for stmt in method.body:
        if stmt.defines is not None and not IDENTIFIER.match(stmt.defines):
            found.append(Violation(
                code="bad_identifier", index=stmt.index,
                message=f"'{stmt.defines}' is not a plain identifier", **where,
            ))
        for var in stmt.uses:
            if var not in defined and var != stmt.defines:
                found.append(Violation(
                    code="undefined_variable", index=stmt.index,
                    message=f"'{var}' used before definition", **where,
                ))
        if stmt.kind == StatementKind.CALL and component.method(stmt.callee) is None:
            found.append(Violation(
                code="unknown_callee", index=stmt.index,
                message=f"unknown callee '{stmt.callee}'", **where,
            ))
        if stmt.defines is not None:
            defined.add(stmt.defines)
    return found


def validate_ecosystem(bundles: list[AppBundle]) -> list[Violation]:
    """
    Collect every invariant violation in the ecosystem.
    An empty list means the ecosystem is analyzable. The result is sorted,
    so permuting the input never changes it.
    """
    violations: list[Violation] = []

    app_counts: dict[str, int] = {}
    for bundle in bundles:
        app_counts[bundle.app_id] = app_counts.get(bundle.app_id, 0) + 1
    for app_id, count in app_counts.items():
        if count > 1:
            violations.append(Violation(
                code="duplicate_app", app_id=app_id,
                message=f"app id declared by {count} bundles",
            ))

    for bundle in bundles:
        names = [c.name for c in bundle.components]
        for name in sorted({n for n in names if names.count(n) > 1}):
            violations.append(Violation(
                code="duplicate_component", app_id=bundle.app_id, component=name,
                message="component name repeats",
            ))

        for component in bundle.components:
            if any(not action for action in component.intent_filters):
                violations.append(Violation(
                    code="empty_action", app_id=bundle.app_id, component=component.name,
                    message="intent filter with empty action",
                ))
            if component.intent_filters and not component.exported:
                violations.append(Violation(
                    code="filter_not_exported", app_id=bundle.app_id, component=component.name,
                    message="component declares intent filters but is not exported",
                ))
            method_names = [m.name for m in component.methods]
            for name in sorted({n for n in method_names if method_names.count(n) > 1}):
                violations.append(Violation(
                    code="duplicate_method", app_id=bundle.app_id, component=component.name,
                    method=name, message="method name repeats",
                ))
            for method in component.methods:
                violations.extend(_method_violations(bundle.app_id, component, method))

    violations.sort(key=Violation.sort_key)
    if violations:
        logger.warning(f"Ecosystem validation found {len(violations)} violation(s)")
    return violations
