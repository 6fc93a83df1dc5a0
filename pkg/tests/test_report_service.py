import json

import pydot
import pytest

from tests.builders import analyze, api, bundle_doc, component, const, load, method, scenario_bundles
from tests.test_risk_engine import _pair
from trustflow.schemas.report import AnalysisReport
from trustflow.services.flowgraph import compose_ecosystem
from trustflow.services.report_service import (
    EMPTY_SUMMARY,
    Level,
    collapse_graph,
    install_delta,
    to_dot,
    user_summary,
)
from trustflow.utils.documents import dump_document, parse_document

DEFAULTS = {"node", "edge", "graph"}


def parse_dot(text: str) -> pydot.Dot:
    graphs = pydot.graph_from_dot_data(text)
    assert graphs and len(graphs) == 1
    return graphs[0]


def all_nodes(graph) -> list:
    nodes = [n for n in graph.get_nodes() if n.get_name() not in DEFAULTS]
    for sub in graph.get_subgraphs():
        nodes += all_nodes(sub)
    return nodes


def clusters(graph) -> list:
    return [s for s in graph.get_subgraphs() if s.get_name().strip('"').startswith("cluster")]


# ─── to_dot ───

def test_case_study_point_level_structure(case_study):
    dot = parse_dot(to_dot(analyze(case_study).ecosystem.graph, Level.POINT))
    apps = clusters(dot)
    assert len(apps) == 2
    assert sum(len(clusters(app)) for app in apps) == 3


@pytest.mark.parametrize("level", list(Level))
def test_node_count_matches_collapsed_graph(case_study, level):
    graph = analyze(case_study).ecosystem.graph
    dot = parse_dot(to_dot(graph, level))
    assert len(all_nodes(dot)) == collapse_graph(graph, level).number_of_nodes()


def test_empty_graph_has_header_and_no_nodes():
    text = to_dot(compose_ecosystem([], []), Level.POINT)
    assert text.startswith("digraph flows {")
    assert all_nodes(parse_dot(text)) == []


def test_scenario_b_application_level():
    graph = analyze(scenario_bundles("b")).ecosystem.graph
    collapsed = collapse_graph(graph, Level.APPLICATION)
    kinds = sorted(d["kind"] for _, d in collapsed.nodes(data=True))
    assert kinds == ["application", "application", "sink", "source"]
    inter = [(u, v) for u, v, d in collapsed.edges(data=True) if d["inter_app"]]
    assert inter == [("contactsbackup", "syncer")]
    dot = parse_dot(to_dot(graph, Level.APPLICATION))
    assert len(all_nodes(dot)) == 4
    assert len(dot.get_edges()) == 3


def test_component_level_drops_self_loops(case_study):
    collapsed = collapse_graph(analyze(case_study).ecosystem.graph, Level.COMPONENT)
    assert all(u != v for u, v in collapsed.edges)
    assert collapsed.has_edge("pubtrans/MainActivity", "pubtrans/ResultWebView")


def test_blocked_edges_are_marked_in_dot():
    text = to_dot(_pair([]).ecosystem.graph, Level.COMPONENT)
    assert "color=red" in text
    assert 'blocked="permission"' in text


def test_dot_is_stable(case_study):
    first = to_dot(analyze(case_study).ecosystem.graph, Level.POINT)
    second = to_dot(analyze(list(reversed(case_study))).ecosystem.graph, Level.POINT)
    assert first == second


# ─── to_report ───

def test_case_study_report(case_study):
    report = analyze(case_study).report
    assert len(report.critical_flows) == 1
    flow = report.critical_flows[0]
    assert flow.risk.risk == 6 and flow.risk.label == "high"
    assert flow.apps == ["pubtranslocation", "pubtrans"]
    assert flow.joins == [["pubtrans"]]
    assert report.digest.apps == ["pubtrans", "pubtranslocation"]
    assert report.digest.catalog_version == "default-1"
    assert report.stats.components == 3
    assert report.stats.critical_flows == 1
    assert report.stats.timings is None


def test_no_flows_report_has_empty_list():
    benign = load(bundle_doc("notes", [component("Main", methods=[
        method("onCreate", ["s"], [const("t"), api("File.write", ["t"])]),
    ])]))
    report = analyze([benign]).report
    raw = json.loads(dump_document(report))
    assert raw["critical_flows"] == []


def test_combined_a_and_b():
    report = analyze(scenario_bundles("a") + scenario_bundles("b")).report
    assert sorted(len(f.apps) for f in report.critical_flows) == [1, 2]


def test_flows_sorted_by_descending_risk(case_study):
    report = analyze(case_study + scenario_bundles("a") + scenario_bundles("c")).report
    risks = [f.risk.risk for f in report.critical_flows]
    assert risks == sorted(risks, reverse=True)
    assert risks[0] == 9


def test_report_wire_shape(case_study):
    raw = json.loads(dump_document(analyze(case_study).report))
    assert set(raw) >= {"digest", "risk_model", "critical_flows", "stats"}
    flow = raw["critical_flows"][0]
    assert set(flow) >= {"source", "sink", "apps", "risk", "permissions", "witness"}
    assert set(flow["risk"]) == {"impact", "probability", "risk", "label"}


def test_report_is_self_contained(case_study):
    report = analyze(case_study).report
    again = parse_document(dump_document(report), AnalysisReport)
    assert again == report
    assert user_summary(again) == user_summary(report)


def test_timings_only_when_requested(case_study):
    report = analyze(case_study, record_timings=True).report
    assert set(report.stats.timings) >= {"scan", "slice", "graph", "risk"}


# ─── user_summary ───

def test_case_study_summary_line(case_study):
    lines = user_summary(analyze(case_study).report).splitlines()
    assert lines[0] == "Location data can reach the Internet (WebView) via PubTransLocation → PubTrans"
    assert lines[1].strip().endswith("PubTrans")


def test_empty_summary():
    assert user_summary(AnalysisReport()) == EMPTY_SUMMARY + "\n"


def test_scenario_b_summary_names_both_apps_in_order():
    first = user_summary(analyze(scenario_bundles("b")).report).splitlines()[0]
    assert first.endswith("via ContactsBackup → Syncer")


def test_summary_is_pure(case_study):
    report = analyze(case_study).report
    assert user_summary(report) == user_summary(report.model_copy(deep=True))


# ─── install_delta ───

def test_installing_the_helper_app_adds_the_flow(case_study):
    pubtrans = [b for b in case_study if b.app_id == "pubtrans"]
    before = analyze(pubtrans).report
    after = analyze(case_study).report
    assert before.critical_flows == []
    assert install_delta(before, after) == [after.critical_flows[0].id]
    assert install_delta(after, after) == []
