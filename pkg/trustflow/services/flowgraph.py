"""
Flow graph – lifts slicer results back to the architectural layer.

Steps:
1. Per app: point nodes, intra-component edges, source/sink terminal edges
2. Resolve every IPC exit (explicit, implicit action, broadcast) and couple
   content-provider writes to reads of the same literal URI
3. Application-level flows by reachability inside each app
4. Compose the ecosystem graph and search source → sink paths
"""

import logging
from collections import deque
from enum import Enum
from typing import NamedTuple

import networkx as nx

from trustflow.errors import FlowGraphError
from trustflow.models.app import ComponentKind
from trustflow.models.catalog import ProviderRole, Resolution
from trustflow.models.flows import (
    AppFlow,
    CriticalFlow,
    FlowEndpoint,
    IntraFlow,
    IpcResolution,
    ResolvedTarget,
)
from trustflow.models.points import (
    AppRef,
    ComponentIndex,
    ComponentRef,
    IpcPoint,
    PointOrigin,
    PointRole,
    ScanResult,
)
from trustflow.schemas.exchange import ExchangeDocument, FlowDocument
from trustflow.services.arch_scan import index_from_exchange, scans_from_exchange
from trustflow.services.slicer import flows_from_document

logger = logging.getLogger(__name__)

# distinct app sets kept per node during critical-flow search
DEFAULT_MAX_APP_SETS = 16

SOURCE_PREFIX = "source:"
SINK_PREFIX = "sink:"


class EdgeKind(str, Enum):
    INTRA = "intra"
    IPC = "ipc"
    SOURCE = "source"
    SINK = "sink"


class NodeKind(str, Enum):
    POINT = "point"
    SOURCE = "source"
    SINK = "sink"


class FlowGraph:
    """
    Hierarchical directed flow graph. Nodes are IPC point ids plus one source
    terminal per (app, api) and one sink terminal per (app, api); every node
    records its app and, for points, its component.
    """

    def __init__(self, index: ComponentIndex, graph: nx.DiGraph | None = None):
        self.index = index
        self.graph = graph if graph is not None else nx.DiGraph()

    # ── construction ──

    def add_point(self, point: IpcPoint) -> None:
        self.graph.add_node(
            point.id,
            kind=NodeKind.POINT.value,
            app=point.app_id,
            component=point.component,
            role=point.role.value,
            origin=point.origin.value,
            api=point.api_name,
            target=point.target,
            resolution=point.resolution.value if point.resolution else None,
        )

    def add_terminal(self, point: IpcPoint) -> str:
        if point.origin == PointOrigin.SOURCE_API:
            kind, node = NodeKind.SOURCE, f"{SOURCE_PREFIX}{point.app_id}/{point.api_name}"
        else:
            kind, node = NodeKind.SINK, f"{SINK_PREFIX}{point.app_id}/{point.api_name}"
        self.graph.add_node(
            node,
            kind=kind.value,
            app=point.app_id,
            component=None,
            api=point.api_name,
            label=point.label or point.api_name,
            level=point.level,
        )
        return node

    def add_edge(self, u: str, v: str, kind: EdgeKind, **attrs) -> None:
        self.graph.add_edge(u, v, kind=kind.value, **attrs)

    # ── queries ──

    def node(self, node: str) -> dict:
        return self.graph.nodes[node]

    def app_of(self, node: str) -> str:
        return self.graph.nodes[node]["app"]

    def nodes(self, kind: NodeKind | None = None) -> list[str]:
        return sorted(
            n for n, data in self.graph.nodes(data=True)
            if kind is None or data["kind"] == kind.value
        )

    def edges(self, kind: EdgeKind | None = None) -> list[tuple[str, str, dict]]:
        return sorted(
            (
                (u, v, data) for u, v, data in self.graph.edges(data=True)
                if kind is None or data["kind"] == kind.value
            ),
            key=lambda e: (e[0], e[1]),
        )

    def successors(self, node: str) -> list[str]:
        return sorted(self.graph.successors(node))

    def edge(self, u: str, v: str) -> dict:
        return self.graph.edges[u, v]

    def apps(self) -> list[str]:
        return sorted({data["app"] for _, data in self.graph.nodes(data=True)})

    def dump(self) -> str:
        """Stable textual dump: sorted nodes, then sorted typed edges."""
        lines = [f"node {n} [{self.node(n)['kind']}]" for n in self.nodes()]
        for u, v, data in self.edges():
            flags = [data["kind"]]
            if data.get("inter_app"):
                flags.append("inter_app")
            if data.get("permission_blocked"):
                flags.append("permission_blocked")
            if data.get("export_blocked"):
                flags.append("export_blocked")
            lines.append(f"edge {u} -> {v} [{','.join(flags)}]")
        return "\n".join(lines) + "\n"


# ─── Ecosystem lookup tables ───

class Ecosystem:
    """Component index plus every scanned point, keyed for IPC resolution."""

    def __init__(self, index: ComponentIndex, scans: list[ScanResult]):
        self.index = index
        self.scans = {s.component.key: s for s in scans}
        self.points: dict[str, IpcPoint] = {}
        self.callbacks: dict[str, list[IpcPoint]] = {}
        self.provider_reads: dict[str, list[IpcPoint]] = {}
        for scan in scans:
            for point in scan.entries + scan.exits:
                self.points[point.id] = point
            for entry in scan.entries:
                if entry.target is None:
                    continue
                if entry.origin == PointOrigin.IPC_IN_API:
                    self.callbacks.setdefault(entry.target, []).append(entry)
                if entry.provider == ProviderRole.READ:
                    self.provider_reads.setdefault(entry.target, []).append(entry)

    def lifecycle_entries(self, key: str) -> list[IpcPoint]:
        scan = self.scans.get(key)
        if scan is None:
            return []
        return [e for e in scan.entries if e.origin == PointOrigin.LIFECYCLE]

    def exits(self) -> list[IpcPoint]:
        return sorted(
            (p for p in self.points.values() if p.role == PointRole.EXIT),
            key=lambda p: p.id,
        )


def _target(caller: AppRef, target_app: AppRef, ref: ComponentRef, entry: IpcPoint) -> ResolvedTarget:
    same_uid = caller.shares_uid_with(target_app)
    permission_blocked = (
        ref.required_permission is not None
        and ref.required_permission not in caller.granted_permissions
        and not same_uid
    )
    export_blocked = (
        entry.origin == PointOrigin.LIFECYCLE and not ref.exported and not same_uid
    )
    return ResolvedTarget(
        entry_id=entry.id,
        app_id=ref.app_id,
        component=ref.name,
        permission_blocked=permission_blocked,
        export_blocked=export_blocked,
    )


def _landing(ecosystem: Ecosystem, caller: AppRef, entries: list[IpcPoint]) -> tuple[ResolvedTarget, ...]:
    targets = {}
    for entry in entries:
        ref = ecosystem.index.get(entry.component_key)
        target_app = ecosystem.index.app(entry.app_id)
        if ref is None or target_app is None:
            continue
        targets[entry.id] = _target(caller, target_app, ref, entry)
    return tuple(sorted(targets.values(), key=lambda t: (t.app_id, t.component, t.entry_id)))


def resolve_ipc(exit_point: IpcPoint, ecosystem: Ecosystem) -> IpcResolution:
    """
    Resolve an IPC-out exit to the entry points it may reach.
    Explicit → lifecycle entries of the named component; implicit action →
    every component whose filters contain the action; broadcast → matching
    broadcast receivers. Implicit and broadcast resolution also reach IPC-in
    entries registered for the same literal action. Blocked targets are kept
    and marked.
    """
    if exit_point.origin != PointOrigin.IPC_OUT_API:
        raise FlowGraphError("not_ipc_exit", f"{exit_point.id} is not an IPC exit")

    base = dict(
        exit_id=exit_point.id,
        app_id=exit_point.app_id,
        mechanism=exit_point.api_name or "",
        resolution=exit_point.resolution,
    )
    caller = ecosystem.index.app(exit_point.app_id)
    if caller is None:
        return IpcResolution(error=f"unknown caller app {exit_point.app_id}", **base)
    action = exit_point.target
    if not action:
        return IpcResolution(error="no literal intent target", **base)

    if exit_point.resolution == Resolution.EXPLICIT:
        ref = ecosystem.index.get(action)
        if ref is None:
            return IpcResolution(error=f"explicit target {action} does not exist", **base)
        return IpcResolution(
            targets=_landing(ecosystem, caller, ecosystem.lifecycle_entries(ref.key)), **base
        )

    if exit_point.resolution == Resolution.BROADCAST:
        refs = [
            c for c in ecosystem.index.components
            if c.kind == ComponentKind.BROADCAST_RECEIVER and action in c.intent_filters
        ]
    else:
        refs = [c for c in ecosystem.index.components if action in c.intent_filters]

    entries = [e for ref in refs for e in ecosystem.lifecycle_entries(ref.key)]
    entries.extend(ecosystem.callbacks.get(action, []))
    return IpcResolution(targets=_landing(ecosystem, caller, entries), **base)


def couple_provider(exit_point: IpcPoint, ecosystem: Ecosystem) -> IpcResolution | None:
    """A provider write to literal URI u reaches reads of exactly u."""
    if exit_point.provider != ProviderRole.WRITE or not exit_point.target:
        return None
    caller = ecosystem.index.app(exit_point.app_id)
    if caller is None:
        return None
    readers = ecosystem.provider_reads.get(exit_point.target, [])
    return IpcResolution(
        exit_id=exit_point.id,
        app_id=exit_point.app_id,
        mechanism=exit_point.api_name or "",
        targets=_landing(ecosystem, caller, readers),
    )


def resolve_all(ecosystem: Ecosystem) -> list[IpcResolution]:
    resolutions = []
    for exit_point in ecosystem.exits():
        if exit_point.origin == PointOrigin.IPC_OUT_API:
            resolution = resolve_ipc(exit_point, ecosystem)
        else:
            resolution = couple_provider(exit_point, ecosystem)
        if resolution is None:
            continue
        if resolution.error:
            logger.warning(f"IPC resolution for {exit_point.id}: {resolution.error}")
        resolutions.append(resolution)
    return resolutions


# ─── Graph construction ───

def _add_resolution_edges(graph: FlowGraph, resolution: IpcResolution, inter_app: bool) -> None:
    for target in resolution.targets:
        if (target.app_id != resolution.app_id) != inter_app:
            continue
        if resolution.exit_id not in graph.graph or target.entry_id not in graph.graph:
            raise FlowGraphError(
                "dangling_edge", f"IPC edge {resolution.exit_id} -> {target.entry_id} has no endpoint"
            )
        graph.add_edge(
            resolution.exit_id,
            target.entry_id,
            EdgeKind.IPC,
            mechanism=resolution.mechanism,
            resolution=resolution.resolution.value if resolution.resolution else "provider",
            inter_app=inter_app,
            permission_blocked=target.permission_blocked,
            export_blocked=target.export_blocked,
        )


def build_component_flow_graph(
    app_id: str,
    index: ComponentIndex,
    scans: list[ScanResult],
    flows: list[IntraFlow],
    resolutions: list[IpcResolution] = (),
) -> FlowGraph:
    """
    Component-level graph of one app: every point, one intra edge per slicer
    flow, terminal edges by point origin, and IPC edges that stay in the app.
    """
    graph = FlowGraph(index)
    for scan in scans:
        if scan.component.app_id != app_id:
            continue
        for point in scan.points:
            graph.add_point(point)
            if point.origin == PointOrigin.SOURCE_API:
                graph.add_edge(graph.add_terminal(point), point.id, EdgeKind.SOURCE)
            elif point.origin == PointOrigin.SINK_API:
                graph.add_edge(point.id, graph.add_terminal(point), EdgeKind.SINK)

    for flow in flows:
        if not flow.component.startswith(f"{app_id}/"):
            continue
        for point in (flow.source, flow.target):
            if point not in graph.graph:
                raise FlowGraphError("dangling_flow", f"flow cites unknown point {point}")
        graph.add_edge(flow.source, flow.target, EdgeKind.INTRA, witness=list(flow.witness))

    for resolution in resolutions:
        if resolution.app_id == app_id:
            _add_resolution_edges(graph, resolution, inter_app=False)
    return graph


def _leaves_app(graph: FlowGraph, node: str, app_id: str) -> bool:
    data = graph.node(node)
    if data["origin"] == PointOrigin.SINK_API.value:
        return True
    if data["origin"] != PointOrigin.IPC_OUT_API.value:
        return False
    explicit_internal = (
        data.get("resolution") == Resolution.EXPLICIT.value
        and (data.get("target") or "").startswith(f"{app_id}/")
    )
    return not explicit_internal


def _enters_app(graph: FlowGraph, node: str) -> bool:
    data = graph.node(node)
    if data["origin"] in (PointOrigin.SOURCE_API.value, PointOrigin.IPC_IN_API.value):
        return True
    if data["origin"] == PointOrigin.LIFECYCLE.value:
        ref = graph.index.get(f"{data['app']}/{data['component']}")
        return ref is not None and ref.exported
    return False


def application_flows(graph: FlowGraph, app_id: str) -> list[AppFlow]:
    """
    Entry → exit reachability inside one app, from entries connecting to the
    outside (sources, IPC-in, exported lifecycle) to exits leaving it (sinks,
    IPC that is not an explicit start of an own component).
    """
    def in_app(node: str) -> bool:
        data = graph.node(node)
        return data["kind"] == NodeKind.POINT.value and data["app"] == app_id

    entries = [
        n for n in graph.nodes(NodeKind.POINT)
        if in_app(n) and graph.node(n)["role"] == PointRole.ENTRY.value and _enters_app(graph, n)
    ]
    found: list[AppFlow] = []
    for entry in entries:
        seen = {entry}
        queue = deque([entry])
        while queue:
            node = queue.popleft()
            for succ in graph.successors(node):
                kind = graph.edge(node, succ)["kind"]
                if kind not in (EdgeKind.INTRA.value, EdgeKind.IPC.value):
                    continue
                if succ in seen or not in_app(succ):
                    continue
                seen.add(succ)
                queue.append(succ)
        for node in sorted(seen):
            if graph.node(node)["role"] == PointRole.EXIT.value and _leaves_app(graph, node, app_id):
                found.append(AppFlow(app_id=app_id, entry=entry, exit=node))
    return sorted(found, key=lambda f: (f.entry, f.exit))


def compose_ecosystem(
    graphs: list[FlowGraph], resolutions: list[IpcResolution], index: ComponentIndex | None = None
) -> FlowGraph:
    """Union of the per-app graphs plus inter-app IPC edges (blocked ones marked)."""
    if index is None:
        index = graphs[0].index if graphs else ComponentIndex()
    merged = nx.compose_all([g.graph for g in graphs]) if graphs else nx.DiGraph()
    ecosystem = FlowGraph(index, merged)
    for resolution in resolutions:
        _add_resolution_edges(ecosystem, resolution, inter_app=True)
    inter = sum(1 for _, _, d in ecosystem.edges(EdgeKind.IPC) if d["inter_app"])
    logger.info(f"Composed ecosystem graph: {merged.number_of_nodes()} nodes, {inter} inter-app edge(s)")
    return ecosystem


def _endpoint(graph: FlowGraph, node: str) -> FlowEndpoint:
    data = graph.node(node)
    return FlowEndpoint(
        node=node, app_id=data["app"], api=data["api"], label=data["label"], level=data["level"] or ""
    )


def _app_chain(graph: FlowGraph, path: list[str]) -> tuple[str, ...]:
    chain: list[str] = []
    for node in path:
        app = graph.app_of(node)
        if not chain or chain[-1] != app:
            chain.append(app)
    return tuple(chain)


def critical_flows(
    graph: FlowGraph, max_length: int = 0, max_app_sets: int = DEFAULT_MAX_APP_SETS
) -> list[CriticalFlow]:
    """
    Every (source terminal, sink terminal, app set) reachable in the graph,
    each with one BFS-shortest witness. The search state is (node, set of
    apps visited so far); a path may re-enter an app it has left, and the
    reported chain records the re-entry.

    max_length > 0 caps the witness length in edges. max_app_sets > 0 caps
    the distinct app sets kept per node, which bounds the search to
    nodes × max_app_sets states per source; sets beyond the cap are the ones
    reached last and are dropped with a warning.
    """
    flows: list[CriticalFlow] = []
    for source in graph.nodes(NodeKind.SOURCE):
        start = (source, frozenset({graph.app_of(source)}))
        parent: dict[tuple, tuple | None] = {start: None}
        depth = {start: 0}
        sets_at: dict[str, int] = {source: 1}
        capped = 0
        queue = deque([start])
        while queue:
            state = queue.popleft()
            node, apps = state
            if graph.node(node)["kind"] == NodeKind.SINK.value:
                path = []
                cursor = state
                while cursor is not None:
                    path.append(cursor[0])
                    cursor = parent[cursor]
                path.reverse()
                flows.append(CriticalFlow(
                    source=_endpoint(graph, source),
                    sink=_endpoint(graph, node),
                    path=tuple(path),
                    apps_on_path=_app_chain(graph, path),
                ))
                continue
            if max_length and depth[state] >= max_length:
                continue
            for succ in graph.successors(node):
                next_state = (succ, apps | {graph.app_of(succ)})
                if next_state in parent:
                    continue
                if max_app_sets and sets_at.get(succ, 0) >= max_app_sets:
                    capped += 1
                    continue
                sets_at[succ] = sets_at.get(succ, 0) + 1
                parent[next_state] = state
                depth[next_state] = depth[state] + 1
                queue.append(next_state)
        if capped:
            logger.warning(
                f"Critical-flow search from {source}: {capped} app set(s) beyond the cap of {max_app_sets} dropped"
            )

    flows.sort(key=CriticalFlow.sort_key)
    logger.info(f"Found {len(flows)} critical flow(s)")
    return flows


# ─── Whole ecosystem from the exchange and flow documents ───

class EcosystemGraph(NamedTuple):
    index: ComponentIndex
    scans: list[ScanResult]
    resolutions: list[IpcResolution]
    app_graphs: dict[str, FlowGraph]
    graph: FlowGraph
    app_flows: list[AppFlow]


def build_ecosystem(exchange: ExchangeDocument, flow_doc: FlowDocument) -> EcosystemGraph:
    """Everything after slicing, rebuilt from the exchange and flow documents alone."""
    index = index_from_exchange(exchange)
    scans = scans_from_exchange(exchange)
    flows = flows_from_document(flow_doc)
    known_apps = {a.app_id for a in index.apps}
    for flow in flows:
        if flow.component.split("/", 1)[0] not in known_apps:
            raise FlowGraphError("dangling_flow", f"flow cites unknown component {flow.component}")
    ecosystem = Ecosystem(index, scans)
    resolutions = resolve_all(ecosystem)
    app_graphs = {
        app.app_id: build_component_flow_graph(app.app_id, index, scans, flows, resolutions)
        for app in index.apps
    }
    app_flows = [f for app_id, g in app_graphs.items() for f in application_flows(g, app_id)]
    graph = compose_ecosystem(list(app_graphs.values()), resolutions, index)
    return EcosystemGraph(
        index=index,
        scans=scans,
        resolutions=resolutions,
        app_graphs=app_graphs,
        graph=graph,
        app_flows=sorted(app_flows, key=lambda f: (f.app_id, f.entry, f.exit)),
    )
