"""
Risk Engine – scores critical flows and audits permission enforcement.

Scoring steps:
1. Impact from the source criticality (low → 1, medium → 2, high → 3)
2. Probability from the sink attack complexity, inverted
   (very_high → 1, high → 2, medium → 3)
3. Risk = Probability × Impact, bucketed into low / medium / high
"""

import logging

from pydantic import BaseModel, ConfigDict

from trustflow.models.flows import (
    CriticalFlow,
    PermissionFinding,
    RiskLabel,
    RiskScore,
    Verdict,
)
from trustflow.services.flowgraph import EdgeKind, FlowGraph

logger = logging.getLogger(__name__)


# ─── Ordinal scales ───
IMPACT = {
    "low": 1,
    "medium": 2,
    "high": 3,
}

# Harder attack → lower probability
PROBABILITY = {
    "very_high": 1,
    "high": 2,
    "medium": 3,
}

# ─── Label buckets (inclusive upper bounds on the default 1–9 product) ───
LABEL_BUCKETS = [
    (2, RiskLabel.LOW),
    (4, RiskLabel.MEDIUM),
    (9, RiskLabel.HIGH),
]


class RiskScale(BaseModel):
    """Impact and probability mappings; any strictly monotone relabeling keeps the ranking."""

    model_config = ConfigDict(frozen=True)

    impact: dict[str, int] = IMPACT
    probability: dict[str, int] = PROBABILITY

    def products(self) -> list[int]:
        return sorted({i * p for i in self.impact.values() for p in self.probability.values()})


DEFAULT_SCALE = RiskScale()


def label_buckets(scale: RiskScale = DEFAULT_SCALE) -> list[tuple[int, RiskLabel]]:
    """
    LABEL_BUCKETS carried over to another scale.

    Each bound keeps its rank among the distinct products, so a bound that
    covers the lowest third of the default products covers the lowest third
    of the scale's products too.
    """
    default = DEFAULT_SCALE.products()
    products = scale.products()
    buckets = []
    for bound, label in LABEL_BUCKETS:
        rank = default.index(bound) + 1
        at = -(-rank * len(products) // len(default))  # ceil
        buckets.append((products[at - 1], label))
    return buckets


def label_for(risk: int, scale: RiskScale = DEFAULT_SCALE) -> RiskLabel:
    buckets = LABEL_BUCKETS if scale == DEFAULT_SCALE else label_buckets(scale)
    for bound, label in buckets:
        if risk <= bound:
            return label
    return RiskLabel.HIGH


def score_levels(criticality: str, complexity: str, scale: RiskScale = DEFAULT_SCALE) -> RiskScore:
    impact = scale.impact[criticality]
    probability = scale.probability[complexity]
    risk = impact * probability
    return RiskScore(impact=impact, probability=probability, risk=risk, label=label_for(risk, scale))


def score_flow(flow: CriticalFlow, scale: RiskScale = DEFAULT_SCALE) -> RiskScore:
    return score_levels(flow.source.level, flow.sink.level, scale)


def risk_model(scale: RiskScale = DEFAULT_SCALE) -> dict:
    """The mapping and buckets, embedded in reports so consumers can re-bucket."""
    return {
        "formula": "risk = impact * probability",
        "impact": dict(scale.impact),
        "probability": dict(scale.probability),
        "labels": {label.value: bound for bound, label in label_buckets(scale)},
    }


# ─── Permission enforcement along flow paths ───

def permission_boundaries(flow: CriticalFlow, graph: FlowGraph) -> list[PermissionFinding]:
    """
    One finding per inter-component edge of the flow.

    - caller and target share a user id (same app included) → SharedUid
    - target requires a permission the caller holds → Guarded
    - target requires a permission the caller lacks → Blocked
    - target requires nothing → Unguarded
    """
    findings: list[PermissionFinding] = []
    for u, v in flow.edges:
        data = graph.edge(u, v)
        if data["kind"] != EdgeKind.IPC.value:
            continue

        caller = graph.index.app(graph.app_of(u))
        target_node = graph.node(v)
        target_app = graph.index.app(target_node["app"])
        ref = graph.index.get(f"{target_node['app']}/{target_node['component']}")
        required = ref.required_permission if ref else None

        if caller.shares_uid_with(target_app):
            verdict = Verdict.SHARED_UID
            detail = f"{caller.app_id} and {target_app.app_id} share a user id"
        elif required is None:
            verdict = Verdict.UNGUARDED
            detail = f"{ref.key} requires no permission"
        elif required in caller.granted_permissions:
            verdict = Verdict.GUARDED
            detail = f"{caller.app_id} holds {required} required by {ref.key}"
        else:
            verdict = Verdict.BLOCKED
            detail = f"{caller.app_id} lacks {required} required by {ref.key}"

        findings.append(PermissionFinding(flow_id=flow.id, edge=(u, v), verdict=verdict, detail=detail))

    unguarded = sum(1 for f in findings if f.verdict == Verdict.UNGUARDED)
    if unguarded:
        logger.debug(f"{flow.id}: {unguarded} unguarded IPC edge(s)")
    return findings
