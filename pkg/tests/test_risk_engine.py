from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tests.builders import analyze, api, bundle_doc, component, load, method, scenario_bundles
from trustflow.models.flows import CriticalFlow, FlowEndpoint, RiskLabel, Verdict
from trustflow.services.risk_engine import (
    IMPACT,
    PROBABILITY,
    RiskScale,
    label_buckets,
    permission_boundaries,
    risk_model,
    score_flow,
    score_levels,
)


def flow_with(criticality: str, complexity: str) -> CriticalFlow:
    return CriticalFlow(
        source=FlowEndpoint(node="source:a/S", app_id="a", api="S", label="S", level=criticality),
        sink=FlowEndpoint(node="sink:a/K", app_id="a", api="K", label="K", level=complexity),
        path=("source:a/S", "sink:a/K"),
        apps_on_path=("a",),
    )


# ─── score_flow ───

@pytest.mark.parametrize("criticality, complexity, risk, label", [
    ("low", "very_high", 1, RiskLabel.LOW),
    ("low", "high", 2, RiskLabel.LOW),
    ("low", "medium", 3, RiskLabel.MEDIUM),
    ("medium", "very_high", 2, RiskLabel.LOW),
    ("medium", "high", 4, RiskLabel.MEDIUM),
    ("medium", "medium", 6, RiskLabel.HIGH),
    ("high", "very_high", 3, RiskLabel.MEDIUM),
    ("high", "high", 6, RiskLabel.HIGH),
    ("high", "medium", 9, RiskLabel.HIGH),
])
def test_all_nine_combinations(criticality, complexity, risk, label):
    score = score_flow(flow_with(criticality, complexity))
    assert score.risk == risk
    assert score.risk == score.impact * score.probability
    assert score.label == label


def test_location_to_webview_is_six():
    score = score_flow(flow_with("medium", "medium"))
    assert (score.impact, score.probability, score.risk, score.label) == (2, 3, 6, RiskLabel.HIGH)


def test_provider_to_map_view_is_three():
    score = score_flow(flow_with("high", "very_high"))
    assert (score.impact, score.probability, score.risk, score.label) == (3, 1, 3, RiskLabel.MEDIUM)


def test_high_source_medium_sink_is_strict_maximum():
    top = score_levels("high", "medium").risk
    others = [
        score_levels(c, p).risk
        for c, p in product(IMPACT, PROBABILITY)
        if (c, p) != ("high", "medium")
    ]
    assert all(top > other for other in others)


def test_risk_model_records_mapping():
    model = risk_model()
    assert model["impact"] == {"low": 1, "medium": 2, "high": 3}
    assert model["probability"] == {"very_high": 1, "high": 2, "medium": 3}
    assert model["labels"] == {"low": 2, "medium": 4, "high": 9}


def _rank(pairs, scale):
    return sorted(range(len(pairs)), key=lambda i: (-score_levels(*pairs[i], scale).risk, i))


SQUARED = RiskScale(
    impact={"low": 1, "medium": 4, "high": 9},
    probability={"very_high": 1, "high": 4, "medium": 9},
)


@settings(max_examples=300)
@given(st.lists(st.tuples(st.sampled_from(list(IMPACT)), st.sampled_from(list(PROBABILITY))), min_size=1, max_size=12))
def test_ranking_survives_monotone_relabeling(pairs):
    assert _rank(pairs, RiskScale()) == _rank(pairs, SQUARED)


@pytest.mark.parametrize("criticality, complexity", list(product(IMPACT, PROBABILITY)))
def test_labels_follow_the_levels_under_a_squared_scale(criticality, complexity):
    assert score_levels(criticality, complexity, SQUARED).label == score_levels(criticality, complexity).label


def test_squared_scale_buckets_keep_their_rank():
    assert label_buckets(SQUARED) == [(4, RiskLabel.LOW), (16, RiskLabel.MEDIUM), (81, RiskLabel.HIGH)]
    assert risk_model(SQUARED)["labels"] == {"low": 4, "medium": 16, "high": 81}


def test_low_source_into_medium_sink_stays_medium_on_a_wider_scale():
    score = score_levels("low", "medium", SQUARED)
    assert (score.risk, score.label) == (9, RiskLabel.MEDIUM)


# ─── permission_boundaries ───

def test_scenario_c_forwarder_is_unguarded():
    result = analyze(scenario_bundles("c"))
    findings = permission_boundaries(result.flows[0], result.ecosystem.graph)
    assert [f.verdict for f in findings] == [Verdict.UNGUARDED]
    assert findings[0].edge == (
        "wallpaperfun/WallpaperActivity/onCreate#1:exit",
        "quickshare/ShareReceiver/onReceive:entry",
    )


def _pair(caller_permissions=(), shared=(None, None)):
    caller = load(bundle_doc("caller", [component("Main", methods=[
        method("onCreate", ["s"], [
            api("SMS.receive", define="m"),
            api("startService", ["m"], target="callee/Svc"),
        ]),
    ])], permissions=caller_permissions, shared_user_id=shared[0]))
    callee = load(bundle_doc("callee", [component(
        "Svc", kind="Service", permission="USE_SVC",
        methods=[method("onStartCommand", ["i"], [api("WebView.loadUrl", ["i"])])],
    )], shared_user_id=shared[1]))
    return analyze([caller, callee])


def test_held_permission_is_guarded():
    result = _pair(["USE_SVC"])
    assert [f.verdict for f in permission_boundaries(result.flows[0], result.ecosystem.graph)] == [Verdict.GUARDED]


def test_missing_permission_is_blocked():
    result = _pair([])
    findings = permission_boundaries(result.flows[0], result.ecosystem.graph)
    assert [f.verdict for f in findings] == [Verdict.BLOCKED]
    assert "lacks USE_SVC" in findings[0].detail


def test_shared_user_id_wins():
    result = _pair([], shared=("team", "team"))
    assert [f.verdict for f in permission_boundaries(result.flows[0], result.ecosystem.graph)] == [Verdict.SHARED_UID]


def test_one_finding_per_inter_component_edge(case_study):
    result = analyze(case_study + scenario_bundles("b") + scenario_bundles("c"))
    for flow in result.flows:
        findings = permission_boundaries(flow, result.ecosystem.graph)
        ipc_edges = [
            (u, v) for u, v in flow.edges
            if result.ecosystem.graph.edge(u, v)["kind"] == "ipc"
        ]
        assert [f.edge for f in findings] == ipc_edges


def test_case_study_findings(case_study):
    result = analyze(case_study)
    verdicts = [f.verdict for f in permission_boundaries(result.flows[0], result.ecosystem.graph)]
    # helper app → MainActivity callback, then MainActivity → ResultWebView inside PubTrans
    assert verdicts == [Verdict.UNGUARDED, Verdict.SHARED_UID]
