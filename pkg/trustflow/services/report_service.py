"""
Report service – developer, security-engineer and end-user views of an
analysis: DOT export at three abstraction levels, the JSON report document and
the plain-text transitive-flow summary.
"""

import logging
from enum import Enum

import networkx as nx
import pydot

from trustflow.models.flows import CriticalFlow, PermissionFinding, RiskScore
from trustflow.schemas.report import (
    AnalysisReport,
    AppFlowRecord,
    CriticalFlowRecord,
    DigestRecord,
    EndpointRecord,
    FindingRecord,
    ResolutionErrorRecord,
    RiskRecord,
    StatsRecord,
)
from trustflow.services.flowgraph import EcosystemGraph, EdgeKind, FlowGraph, NodeKind
from trustflow.services.risk_engine import risk_model

logger = logging.getLogger(__name__)

EMPTY_SUMMARY = "No transitive information flows detected."
ARROW = " → "


class Level(str, Enum):
    POINT = "point"
    COMPONENT = "component"
    APPLICATION = "application"


# ─── Collapse ───

def _collapsed_id(graph: FlowGraph, node: str, level: Level) -> str:
    data = graph.node(node)
    if data["kind"] != NodeKind.POINT.value or level == Level.POINT:
        return node
    if level == Level.COMPONENT:
        return f"{data['app']}/{data['component']}"
    return data["app"]


def _node_label(graph: FlowGraph, node: str, level: Level) -> str:
    data = graph.node(node)
    if data["kind"] != NodeKind.POINT.value:
        return f"{data['label']} ({data['api']})"
    if level == Level.POINT:
        return node.removeprefix(f"{data['app']}/{data['component']}/")
    if level == Level.COMPONENT:
        return data["component"]
    app = graph.index.app(data["app"])
    return app.display_name if app else data["app"]


def collapse_graph(graph: FlowGraph, level: Level | str) -> nx.DiGraph:
    """
    Same graph at a coarser level: points fold into their component or app,
    terminals stay. Parallel edges merge their kinds and flags; self-loops
    created by folding are dropped.
    """
    level = Level(level)
    collapsed = nx.DiGraph()
    for node in graph.nodes():
        data = graph.node(node)
        target = _collapsed_id(graph, node, level)
        if target in collapsed:
            continue
        is_point = data["kind"] == NodeKind.POINT.value
        collapsed.add_node(
            target,
            kind=data["kind"] if not is_point else level.value,
            app=data["app"],
            component=data["component"] if is_point and level != Level.APPLICATION else None,
            label=_node_label(graph, node, level),
        )

    for u, v, data in graph.edges():
        cu, cv = _collapsed_id(graph, u, level), _collapsed_id(graph, v, level)
        if cu == cv:
            continue
        if collapsed.has_edge(cu, cv):
            merged = collapsed.edges[cu, cv]
            merged["kinds"] = sorted(set(merged["kinds"]) | {data["kind"]})
            for flag in ("inter_app", "permission_blocked", "export_blocked"):
                merged[flag] = merged[flag] or bool(data.get(flag))
        else:
            collapsed.add_edge(
                cu, cv,
                kinds=[data["kind"]],
                inter_app=bool(data.get("inter_app")),
                permission_blocked=bool(data.get("permission_blocked")),
                export_blocked=bool(data.get("export_blocked")),
            )
    return collapsed


# ─── DOT ───

def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


_SHAPES = {
    NodeKind.SOURCE.value: "invhouse",
    NodeKind.SINK.value: "house",
    Level.POINT.value: "ellipse",
    Level.COMPONENT.value: "box",
    Level.APPLICATION.value: "box3d",
}


def to_dot(graph: FlowGraph, level: Level | str = Level.COMPONENT) -> str:
    """
    Graphviz text. Point level: one cluster per app with one subcluster per
    component; component level: app clusters of component nodes; application
    level: flat app nodes. Source/sink terminals sit in their app's cluster.
    Node ids are n0.. in sorted order; edge kinds and flags are attributes.
    """
    level = Level(level)
    collapsed = collapse_graph(graph, level)
    ids = {node: f"n{i}" for i, node in enumerate(sorted(collapsed.nodes))}
    dot = pydot.Dot("flows", graph_type="digraph", rankdir="LR")

    def make_node(node: str) -> pydot.Node:
        data = collapsed.nodes[node]
        return pydot.Node(
            ids[node],
            label=_quote(data["label"]),
            shape=_SHAPES[data["kind"]],
            kind=data["kind"],
        )

    if level == Level.APPLICATION:
        for node in sorted(collapsed.nodes):
            dot.add_node(make_node(node))
    else:
        for a, app_id in enumerate(graph.apps()):
            app = graph.index.app(app_id)
            cluster = pydot.Cluster(f"app{a}", label=_quote(app.display_name if app else app_id))
            members = sorted(n for n, d in collapsed.nodes(data=True) if d["app"] == app_id)
            if level == Level.POINT:
                components = sorted({collapsed.nodes[n]["component"] for n in members} - {None})
                for c, component in enumerate(components):
                    sub = pydot.Cluster(f"app{a}_c{c}", label=_quote(component))
                    for node in members:
                        if collapsed.nodes[node]["component"] == component:
                            sub.add_node(make_node(node))
                    cluster.add_subgraph(sub)
                members = [n for n in members if collapsed.nodes[n]["component"] is None]
            for node in members:
                cluster.add_node(make_node(node))
            dot.add_subgraph(cluster)

    for u, v in sorted(collapsed.edges):
        data = collapsed.edges[u, v]
        attrs = {"kind": _quote(",".join(data["kinds"]))}
        if data["inter_app"]:
            attrs["style"] = "dashed"
        if data["permission_blocked"] or data["export_blocked"]:
            attrs["color"] = "red"
            attrs["blocked"] = _quote(",".join(
                flag for flag in ("permission", "export") if data[f"{flag}_blocked"]
            ))
        dot.add_edge(pydot.Edge(ids[u], ids[v], **attrs))

    return dot.to_string().rstrip("\n") + "\n"


# ─── Report document ───

def _endpoint_record(endpoint) -> EndpointRecord:
    return EndpointRecord(
        node=endpoint.node, app=endpoint.app_id, api=endpoint.api,
        label=endpoint.label, level=endpoint.level,
    )


def _flow_record(flow: CriticalFlow, score: RiskScore, findings: list[PermissionFinding]) -> CriticalFlowRecord:
    apps = list(flow.apps_on_path)
    return CriticalFlowRecord(
        id=flow.id,
        source=_endpoint_record(flow.source),
        sink=_endpoint_record(flow.sink),
        apps=apps,
        risk=RiskRecord(
            impact=score.impact, probability=score.probability,
            risk=score.risk, label=score.label.value,
        ),
        permissions=[
            FindingRecord(edge=list(f.edge), verdict=f.verdict.value, detail=f.detail)
            for f in findings
        ],
        witness=list(flow.path),
        joins=[apps[k:] for k in range(1, len(apps))],
    )


def to_report(
    flows: list[CriticalFlow],
    scores: dict[str, RiskScore],
    findings: dict[str, list[PermissionFinding]],
    ecosystem: EcosystemGraph,
    catalog_version: str | None = None,
    catalog_digest: str | None = None,
    intra_flows: int = 0,
    timings: dict[str, float] | None = None,
) -> AnalysisReport:
    """Flows sorted by descending risk, then source and sink names, then app chain."""
    records = [_flow_record(f, scores[f.id], findings.get(f.id, [])) for f in flows]
    records.sort(key=lambda r: (-r.risk.risk, r.source.api, r.sink.api, r.apps, r.id))

    graph = ecosystem.graph
    ipc_edges = graph.edges(EdgeKind.IPC)
    stats = StatsRecord(
        apps=len(ecosystem.index.apps),
        components=len(ecosystem.index.components),
        points=sum(len(s.entries) + len(s.exits) for s in ecosystem.scans),
        intra_flows=intra_flows,
        ipc_edges=len(ipc_edges),
        inter_app_edges=sum(1 for _, _, d in ipc_edges if d["inter_app"]),
        critical_flows=len(records),
        timings=timings,
    )
    return AnalysisReport(
        digest=DigestRecord(
            apps=[a.app_id for a in ecosystem.index.apps],
            labels={a.app_id: a.display_name for a in ecosystem.index.apps},
            catalog_version=catalog_version,
            catalog_digest=catalog_digest,
        ),
        risk_model=risk_model(),
        critical_flows=records,
        application_flows=[
            AppFlowRecord(app=f.app_id, entry=f.entry, exit=f.exit) for f in ecosystem.app_flows
        ],
        resolution_errors=[
            ResolutionErrorRecord(exit=r.exit_id, mechanism=r.mechanism, error=r.error)
            for r in ecosystem.resolutions if r.error
        ],
        stats=stats,
    )


def install_delta(before: AnalysisReport, after: AnalysisReport) -> list[str]:
    """Ids of flows that only exist once the new app joins the ecosystem."""
    known = {f.id for f in before.critical_flows}
    return sorted(f.id for f in after.critical_flows if f.id not in known)


# ─── End-user summary ───

def user_summary(report: AnalysisReport) -> str:
    """
    One line per critical flow naming source, sink and app chain, followed by
    the sub-chains that reach the same sink from apps on the path.
    """
    if not report.critical_flows:
        return EMPTY_SUMMARY + "\n"

    labels = report.digest.labels
    new = set(report.new_flows or ())

    def chain(apps: list[str]) -> str:
        return ARROW.join(labels.get(a, a) for a in apps)

    lines = []
    for flow in report.critical_flows:
        marker = " [new]" if flow.id in new else ""
        lines.append(
            f"{flow.source.label} data can reach {flow.sink.label} via {chain(flow.apps)}{marker}"
        )
        for join in flow.joins:
            lines.append(f"  also joining mid-path: {chain(join)}")
    return "\n".join(lines) + "\n"
