"""
Slicer – builds the per-component dependence graph and computes backward
slices from exit points to find intra-component flows to entry points.

Call binding is context-insensitive: a value returned to one caller may
flow to every caller. Bodies are straight-line, so a use resolves to the
most recent definition before it.
"""

import logging
import os
from collections import deque
from concurrent.futures import ProcessPoolExecutor

import networkx as nx

from trustflow.errors import SliceError
from trustflow.models.app import AppBundle, Component, Method, Statement, StatementKind
from trustflow.models.flows import PARAM, STATEMENT, DepNode, IntraFlow
from trustflow.models.points import IpcPoint, PointOrigin, ScanResult
from trustflow.schemas.exchange import FlowDocument, FlowRecord

logger = logging.getLogger(__name__)

DATA = "data"
PARAM_BINDING = "param"
RETURN_BINDING = "return"


class DependenceGraph:
    """Data-dependence graph of one component; edges point from a use to its def."""

    def __init__(self, component: Component, graph: nx.DiGraph):
        self.component = component
        self.graph = graph

    @staticmethod
    def statement_node(method: str, index: int) -> DepNode:
        return DepNode(method, STATEMENT, index)

    @staticmethod
    def param_node(method: str, slot: int) -> DepNode:
        return DepNode(method, PARAM, slot)

    def __contains__(self, node: DepNode) -> bool:
        return self.graph.has_node(node)

    def successors(self, node: DepNode) -> list[DepNode]:
        return sorted(self.graph.successors(node))

    @property
    def edge_count(self) -> int:
        return self.graph.number_of_edges()


def _reaching_definition(method: Method, stmt: Statement, var: str) -> DepNode | None:
    for earlier in reversed(method.body[: stmt.index]):
        if earlier.defines == var:
            return DependenceGraph.statement_node(method.name, earlier.index)
    if var in method.params:
        return DependenceGraph.param_node(method.name, method.params.index(var))
    if stmt.defines == var:
        return DependenceGraph.statement_node(method.name, stmt.index)
    return None


def build_dependence(component: Component) -> DependenceGraph:
    """
    One node per statement and per param slot. Data edges link every use to
    its reaching definition; each Call adds param-binding edges (callee param
    → argument definition) and return-binding edges (call → every defining
    statement of the callee).
    """
    graph = nx.DiGraph()
    for method in component.methods:
        for slot in range(len(method.params)):
            graph.add_node(DependenceGraph.param_node(method.name, slot))
        for stmt in method.body:
            graph.add_node(DependenceGraph.statement_node(method.name, stmt.index))

    for method in component.methods:
        for stmt in method.body:
            node = DependenceGraph.statement_node(method.name, stmt.index)
            arg_defs: list[DepNode | None] = []
            for var in stmt.uses:
                definition = _reaching_definition(method, stmt, var)
                arg_defs.append(definition)
                if definition is not None:
                    graph.add_edge(node, definition, kind=DATA)

            if stmt.kind != StatementKind.CALL:
                continue
            callee = component.method(stmt.callee)
            if callee is None:
                continue
            for slot, definition in enumerate(arg_defs[: len(callee.params)]):
                if definition is not None:
                    graph.add_edge(
                        DependenceGraph.param_node(callee.name, slot), definition, kind=PARAM_BINDING
                    )
            if stmt.defines is None:
                continue
            for returned in callee.definitions():
                graph.add_edge(
                    node, DependenceGraph.statement_node(callee.name, returned.index), kind=RETURN_BINDING
                )

    return DependenceGraph(component, graph)


def _walk(graph: DependenceGraph, root: DepNode) -> tuple[dict[DepNode, int], dict[DepNode, DepNode], int]:
    """
    Breadth-first walk along use→def edges. Returns discovery order, BFS
    parents and the number of edges examined (each edge at most once).
    """
    order = {root: 0}
    parent: dict[DepNode, DepNode] = {}
    examined = 0
    queue = deque([root])
    while queue:
        node = queue.popleft()
        for succ in graph.successors(node):
            examined += 1
            if succ in order:
                continue
            order[succ] = len(order)
            parent[succ] = node
            queue.append(succ)
    return order, parent, examined


def _exit_node(graph: DependenceGraph, exit_point: IpcPoint) -> DepNode:
    if exit_point.statement_index is None:
        raise SliceError("unknown_exit", f"{exit_point.id} has no statement")
    node = DependenceGraph.statement_node(exit_point.method, exit_point.statement_index)
    if exit_point.component != graph.component.name or node not in graph:
        raise SliceError("unknown_exit", f"{exit_point.id} is not in component {graph.component.name}")
    return node


def backward_slice(graph: DependenceGraph, exit_point: IpcPoint) -> frozenset[DepNode]:
    """All nodes backward-reachable from the exit statement, the exit included."""
    order, _, _ = _walk(graph, _exit_node(graph, exit_point))
    return frozenset(order)


def entry_anchors(component: Component, entry: IpcPoint) -> set[DepNode]:
    """Nodes that define the variables an entry point carries into the component."""
    if entry.origin == PointOrigin.LIFECYCLE:
        method = component.method(entry.method)
        if method is None:
            return set()
        anchors = {DependenceGraph.param_node(method.name, slot) for slot in range(len(method.params))}
        anchors.update(DependenceGraph.statement_node(method.name, i) for i in entry.covers)
        return anchors
    if entry.statement_index is None:
        return set()
    return {DependenceGraph.statement_node(entry.method, entry.statement_index)}


def _witness(parent: dict[DepNode, DepNode], anchor: DepNode) -> tuple[str, ...]:
    path = [anchor]
    while path[-1] in parent:
        path.append(parent[path[-1]])
    return tuple(str(n) for n in path)


def intra_component_flows(
    app_id: str,
    component: Component,
    entries: list[IpcPoint],
    exits: list[IpcPoint],
    graph: DependenceGraph | None = None,
) -> list[IntraFlow]:
    """
    One IntraFlow per (entry, exit) pair whose exit slice reaches a node
    defining an entry-carried variable, with the BFS-shortest witness.
    """
    graph = graph or build_dependence(component)
    component_key = f"{app_id}/{component.name}"
    anchors = {e.id: entry_anchors(component, e) for e in entries}
    flows: list[IntraFlow] = []

    for exit_point in exits:
        order, parent, _ = _walk(graph, _exit_node(graph, exit_point))
        for entry in entries:
            reached = [a for a in anchors[entry.id] if a in order]
            if not reached:
                continue
            first = min(reached, key=order.__getitem__)
            flows.append(IntraFlow(
                component=component_key,
                source=entry.id,
                target=exit_point.id,
                witness=_witness(parent, first),
            ))

    flows.sort(key=lambda f: (f.source, f.target))
    return flows


# ─── Ecosystem slicing (worker pool) ───

def _slice_job(job: tuple[str, Component, tuple[IpcPoint, ...], tuple[IpcPoint, ...]]) -> list[IntraFlow]:
    app_id, component, entries, exits = job
    return intra_component_flows(app_id, component, list(entries), list(exits))


def resolve_jobs(jobs: int) -> int:
    return jobs if jobs > 0 else (os.cpu_count() or 1)


def slice_ecosystem(bundles: list[AppBundle], scans: list[ScanResult], jobs: int = 1) -> list[IntraFlow]:
    """
    Slice every component with both entries and exits. Jobs run in a process
    pool when jobs > 1; the merged result is sorted, so it never depends on
    the degree of parallelism.
    """
    by_app = {b.app_id: b for b in bundles}
    work = []
    for scan in scans:
        if not scan.entries or not scan.exits:
            continue
        bundle = by_app.get(scan.component.app_id)
        component = bundle.component(scan.component.name) if bundle else None
        if component is None:
            raise SliceError("unknown_component", f"no bundle code for {scan.component.key}")
        work.append((scan.component.app_id, component, scan.entries, scan.exits))

    workers = min(resolve_jobs(jobs), max(len(work), 1))
    logger.info(f"Slicing {len(work)} component(s) with {workers} worker(s)")
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_slice_job, work))
    else:
        results = [_slice_job(job) for job in work]

    flows = sorted((f for batch in results for f in batch), key=lambda f: (f.source, f.target))
    logger.info(f"Slicer reported {len(flows)} intra-component flow(s)")
    return flows


def emit_flows(flows: list[IntraFlow]) -> FlowDocument:
    return FlowDocument(flows=[
        FlowRecord(component=f.component, source=f.source, target=f.target, witness=list(f.witness))
        for f in flows
    ])


def flows_from_document(doc: FlowDocument) -> list[IntraFlow]:
    return [
        IntraFlow(component=r.component, source=r.source, target=r.target, witness=tuple(r.witness))
        for r in doc.flows
    ]
