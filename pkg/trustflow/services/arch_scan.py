"""
Architectural scan – identifies components and, per component, the IPC entry
and exit points plus source/sink call sites, then emits the exchange document
consumed by the slicer.

Matching is exact api-name lookup against the catalog.
"""

import logging

from trustflow.errors import DocumentError
from trustflow.models.app import AppBundle, Component, ComponentKind, StatementKind
from trustflow.models.catalog import ApiCatalog, ApiKind, ProviderRole, Resolution
from trustflow.models.points import (
    AppRef,
    ComponentIndex,
    ComponentRef,
    IpcPoint,
    PointOrigin,
    PointRole,
    ScanResult,
    point_id,
)
from trustflow.schemas.exchange import (
    AppRecord,
    ComponentRecord,
    ExchangeDocument,
    PointRecord,
)

logger = logging.getLogger(__name__)


def identify_components(bundles: list[AppBundle]) -> ComponentIndex:
    """Index every (app, component) pair, ordered by (app id, component name)."""
    apps = sorted(
        (
            AppRef(
                app_id=b.app_id,
                label=b.label,
                granted_permissions=tuple(sorted(b.granted_permissions)),
                shared_user_id=b.shared_user_id,
            )
            for b in bundles
        ),
        key=lambda a: a.app_id,
    )
    components = sorted(
        (
            ComponentRef(
                app_id=b.app_id,
                name=c.name,
                kind=c.kind,
                exported=c.exported,
                required_permission=c.required_permission,
                intent_filters=c.intent_filters,
            )
            for b in bundles
            for c in b.components
        ),
        key=lambda c: (c.app_id, c.name),
    )
    logger.info(f"Identified {len(components)} component(s) across {len(apps)} app(s)")
    return ComponentIndex(apps=tuple(apps), components=tuple(components))


def find_ipc_points(
    app_id: str, component: Component, catalog: ApiCatalog
) -> tuple[list[IpcPoint], list[IpcPoint]]:
    """
    One Entry per lifecycle method and per Source / IPC-in api statement, one
    Exit per Sink / IPC-out api statement. IPC-in statements without a literal
    target inside a lifecycle method fold into that method's entry.
    """
    lifecycle = catalog.lifecycle_methods(component.kind)
    entries: list[IpcPoint] = []
    exits: list[IpcPoint] = []

    def make(role, origin, method, index=None, **fields) -> IpcPoint:
        return IpcPoint(
            id=point_id(app_id, component.name, method, index, role),
            app_id=app_id,
            component=component.name,
            role=role,
            origin=origin,
            method=method,
            statement_index=index,
            **fields,
        )

    for method in component.methods:
        is_lifecycle = method.name in lifecycle
        folded: list[int] = []
        folded_defs: list[str] = []

        for stmt in method.body:
            if stmt.kind != StatementKind.API:
                continue
            api = catalog.classify(stmt.api_name)
            if api.kind == ApiKind.NEUTRAL:
                continue

            if api.kind == ApiKind.IPC_IN and is_lifecycle and stmt.target is None:
                folded.append(stmt.index)
                if stmt.defines:
                    folded_defs.append(stmt.defines)
                continue

            common = dict(
                api_name=stmt.api_name, target=stmt.target,
                label=api.label, provider=api.provider,
            )
            if api.kind == ApiKind.SOURCE:
                entries.append(make(
                    PointRole.ENTRY, PointOrigin.SOURCE_API, method.name, stmt.index,
                    variables=(stmt.defines,) if stmt.defines else (),
                    level=api.level, **common,
                ))
            elif api.kind == ApiKind.IPC_IN:
                entries.append(make(
                    PointRole.ENTRY, PointOrigin.IPC_IN_API, method.name, stmt.index,
                    variables=(stmt.defines,) if stmt.defines else (), **common,
                ))
            elif api.kind == ApiKind.SINK:
                exits.append(make(
                    PointRole.EXIT, PointOrigin.SINK_API, method.name, stmt.index,
                    variables=stmt.uses, level=api.level, **common,
                ))
            else:
                exits.append(make(
                    PointRole.EXIT, PointOrigin.IPC_OUT_API, method.name, stmt.index,
                    variables=stmt.uses, resolution=api.resolution, **common,
                ))

        if is_lifecycle:
            entries.append(make(
                PointRole.ENTRY, PointOrigin.LIFECYCLE, method.name,
                variables=method.params + tuple(folded_defs),
                covers=tuple(folded),
            ))

    entries.sort(key=IpcPoint.sort_key)
    exits.sort(key=IpcPoint.sort_key)
    logger.debug(
        f"{app_id}/{component.name}: {len(entries)} entry point(s), {len(exits)} exit point(s)"
    )
    return entries, exits


def scan_ecosystem(
    bundles: list[AppBundle], catalog: ApiCatalog
) -> tuple[ComponentIndex, list[ScanResult]]:
    index = identify_components(bundles)
    by_app = {b.app_id: b for b in bundles}
    scans: list[ScanResult] = []
    for ref in index.components:
        component = by_app[ref.app_id].component(ref.name)
        entries, exits = find_ipc_points(ref.app_id, component, catalog)
        scans.append(ScanResult(component=ref, entries=tuple(entries), exits=tuple(exits)))
    total = sum(len(s.entries) + len(s.exits) for s in scans)
    logger.info(f"Architectural scan found {total} IPC point(s)")
    return index, scans


# ─── Exchange document ───

def _point_record(point: IpcPoint) -> PointRecord:
    return PointRecord(
        id=point.id,
        role=point.role.value,
        origin=point.origin.value,
        method=point.method,
        index=point.statement_index,
        api=point.api_name,
        variables=list(point.variables),
        target=point.target,
        resolution=point.resolution.value if point.resolution else None,
        level=point.level,
        label=point.label,
        provider=point.provider.value if point.provider else None,
        covers=list(point.covers) if point.covers else None,
    )


def emit_exchange(
    index: ComponentIndex, scans: list[ScanResult], catalog: ApiCatalog | None = None
) -> ExchangeDocument:
    """Serialize the scan; contains every point found and nothing else."""
    by_key = {s.component.key: s for s in scans}
    components = []
    for ref in index.components:
        scan = by_key.get(ref.key)
        points = scan.points if scan else ()
        components.append(ComponentRecord(
            app=ref.app_id,
            name=ref.name,
            kind=ref.kind.value,
            exported=ref.exported,
            required_permission=ref.required_permission,
            intent_filters=list(ref.intent_filters),
            points=[_point_record(p) for p in points],
        ))
    return ExchangeDocument(
        catalog_version=catalog.version if catalog else None,
        catalog_digest=catalog.digest if catalog else None,
        apps=[
            AppRecord(
                app_id=a.app_id,
                label=a.label,
                granted_permissions=list(a.granted_permissions),
                shared_user_id=a.shared_user_id,
            )
            for a in index.apps
        ],
        components=components,
    )


def index_from_exchange(doc: ExchangeDocument) -> ComponentIndex:
    try:
        return ComponentIndex(
            apps=tuple(
                AppRef(
                    app_id=a.app_id,
                    label=a.label,
                    granted_permissions=tuple(a.granted_permissions),
                    shared_user_id=a.shared_user_id,
                )
                for a in doc.apps
            ),
            components=tuple(
                ComponentRef(
                    app_id=c.app,
                    name=c.name,
                    kind=ComponentKind(c.kind),
                    exported=c.exported,
                    required_permission=c.required_permission,
                    intent_filters=tuple(c.intent_filters),
                )
                for c in doc.components
            ),
        )
    except ValueError as e:
        raise DocumentError("schema", f"exchange document: {e}") from e


def _point_from_record(app_id: str, component: str, record: PointRecord) -> IpcPoint:
    return IpcPoint(
        id=record.id,
        app_id=app_id,
        component=component,
        role=PointRole(record.role),
        origin=PointOrigin(record.origin),
        method=record.method,
        statement_index=record.index,
        api_name=record.api,
        variables=tuple(record.variables),
        target=record.target,
        resolution=Resolution(record.resolution) if record.resolution else None,
        level=record.level,
        label=record.label,
        provider=ProviderRole(record.provider) if record.provider else None,
        covers=tuple(record.covers or ()),
    )


def scans_from_exchange(doc: ExchangeDocument) -> list[ScanResult]:
    index = index_from_exchange(doc)
    scans = []
    try:
        for ref, record in zip(index.components, doc.components):
            points = [_point_from_record(ref.app_id, ref.name, p) for p in record.points]
            scans.append(ScanResult(
                component=ref,
                entries=tuple(p for p in points if p.role == PointRole.ENTRY),
                exits=tuple(p for p in points if p.role == PointRole.EXIT),
            ))
    except ValueError as e:
        raise DocumentError("schema", f"exchange document: {e}") from e
    return scans
