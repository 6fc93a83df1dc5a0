from hypothesis import given, settings
from hypothesis import strategies as st

from tests.builders import api, assign, bundle_doc, component, load, method, scenario_bundles
from trustflow.models.app import StatementKind
from trustflow.models.catalog import ApiKind, Resolution
from trustflow.models.points import PointOrigin, PointRole
from trustflow.schemas.exchange import ExchangeDocument
from trustflow.services.arch_scan import (
    emit_exchange,
    find_ipc_points,
    identify_components,
    index_from_exchange,
    scan_ecosystem,
    scans_from_exchange,
)
from trustflow.services.catalog_service import classify_api, default_catalog
from trustflow.utils.documents import dump_document, parse_document


def test_case_study_has_three_components(case_study):
    index = identify_components(case_study)
    assert [c.key for c in index.components] == [
        "pubtrans/MainActivity",
        "pubtrans/ResultWebView",
        "pubtranslocation/LocationService",
    ]


def test_index_is_sorted_whatever_the_input_order(case_study):
    assert identify_components(case_study) == identify_components(list(reversed(case_study)))


def test_empty_ecosystem():
    index = identify_components([])
    assert index.apps == () and index.components == ()


def test_component_without_methods_is_listed(catalog):
    bundle = load(bundle_doc("app", [component("Empty", kind="ContentProvider", exported=False)]))
    index, scans = scan_ecosystem([bundle], catalog)
    assert [c.key for c in index.components] == ["app/Empty"]
    assert scans[0].entries == () and scans[0].exits == ()


def test_result_webview_has_one_entry_and_one_exit(case_study, catalog):
    pubtrans = next(b for b in case_study if b.app_id == "pubtrans")
    entries, exits = find_ipc_points("pubtrans", pubtrans.component("ResultWebView"), catalog)
    assert [(e.origin, e.method) for e in entries] == [(PointOrigin.LIFECYCLE, "onCreate")]
    assert [(e.origin, e.api_name) for e in exits] == [(PointOrigin.SINK_API, "WebView.loadUrl")]
    # getIntent folds into the lifecycle entry
    assert entries[0].covers == (0,)
    assert entries[0].variables == ("savedState", "extras")


def test_location_service_points(case_study, catalog):
    helper = next(b for b in case_study if b.app_id == "pubtranslocation")
    entries, exits = find_ipc_points("pubtranslocation", helper.component("LocationService"), catalog)
    assert [e.id for e in entries] == [
        "pubtranslocation/LocationService/onBind:entry",
        "pubtranslocation/LocationService/requestLocation#0:entry",
    ]
    assert entries[1].origin == PointOrigin.SOURCE_API
    assert entries[1].level == "medium"
    assert entries[1].label == "Location"
    assert len(exits) == 1
    assert exits[0].origin == PointOrigin.IPC_OUT_API
    assert exits[0].resolution == Resolution.IMPLICIT_ACTION
    assert exits[0].target == "LOCATION_RESULT"


def test_callback_receive_gets_its_own_entry(case_study, catalog):
    pubtrans = next(b for b in case_study if b.app_id == "pubtrans")
    entries, exits = find_ipc_points("pubtrans", pubtrans.component("MainActivity"), catalog)
    by_origin = {e.origin: e for e in entries}
    callback = by_origin[PointOrigin.IPC_IN_API]
    assert callback.method == "onLocationResult"
    assert callback.target == "LOCATION_RESULT"
    assert {x.api_name for x in exits} == {"bindService", "startActivity"}


def test_method_without_api_calls_yields_only_lifecycle_entry(catalog):
    bundle = load(bundle_doc("app", [component("Main", methods=[
        method("onCreate", ["s"], [assign("x", ["s"])]),
        method("helper", [], [assign("y", [])]),
    ])]))
    entries, exits = find_ipc_points("app", bundle.component("Main"), catalog)
    assert [e.role for e in entries] == [PointRole.ENTRY]
    assert exits == []


def test_neutral_apis_are_ignored(catalog):
    bundle = load(bundle_doc("app", [component("Main", methods=[
        method("work", [], [api("Math.sqrt", define="r"), api("frobnicate", ["r"])]),
    ])]))
    assert find_ipc_points("app", bundle.component("Main"), catalog) == ([], [])


def test_ipc_in_outside_lifecycle_is_its_own_entry(catalog):
    bundle = load(bundle_doc("app", [component("Main", methods=[
        method("later", [], [api("Intent.getExtras", define="e")]),
    ])]))
    entries, _ = find_ipc_points("app", bundle.component("Main"), catalog)
    assert [e.origin for e in entries] == [PointOrigin.IPC_IN_API]


def test_exchange_document_round_trip(case_study, catalog):
    index, scans = scan_ecosystem(case_study, catalog)
    doc = emit_exchange(index, scans, catalog)
    again = parse_document(dump_document(doc), ExchangeDocument)
    assert again == doc
    assert index_from_exchange(again) == index
    assert scans_from_exchange(again) == scans


def test_exchange_points_match_a_fresh_scan_of_each_component(case_study, catalog):
    index, scans = scan_ecosystem(case_study, catalog)
    doc = emit_exchange(index, scans, catalog)
    by_app = {b.app_id: b for b in case_study}
    assert len(doc.components) == 3
    for record in doc.components:
        entries, exits = find_ipc_points(record.app, by_app[record.app].component(record.name), catalog)
        assert sorted(p.id for p in record.points) == sorted(p.id for p in entries + exits)
    assert doc.catalog_version == "default-1"


def test_scenario_a_points(catalog):
    index, scans = scan_ecosystem(scenario_bundles("a"), catalog)
    scan = scans[0]
    assert [e.origin for e in scan.entries] == [PointOrigin.LIFECYCLE, PointOrigin.SOURCE_API]
    assert [x.origin for x in scan.exits] == [PointOrigin.SINK_API]


# ─── Completeness over generated components ───

CATALOG = default_catalog()
API_NAMES = [
    "SMS.receive", "LocationManager.getLastKnownLocation", "ContentProvider.read",
    "WebView.loadUrl", "SMS.send", "ContentProvider.write",
    "startService", "startActivityByAction", "sendBroadcast", "RemoteCallback.send",
    "getIntent", "Intent.getExtras", "RemoteCallback.receive",
    "Math.sqrt", "StringBuilder.append",
]
KINDS = ["Activity", "Service", "BroadcastReceiver", "ContentProvider"]
METHOD_NAMES = ["onCreate", "onNewIntent", "onStartCommand", "onBind", "onReceive", "query", "helper", "later"]


@st.composite
def scanned_components(draw):
    kind = draw(st.sampled_from(KINDS))
    methods = []
    for name in draw(st.lists(st.sampled_from(METHOD_NAMES), unique=True, max_size=4)):
        body = []
        for i, api_name in enumerate(draw(st.lists(st.sampled_from(API_NAMES), max_size=6))):
            target = draw(st.sampled_from([None, "SHARE", "app/C", "content://notes"]))
            body.append(api(api_name, define=f"v{i}", target=target))
        methods.append(method(name, ["p"], body))
    return load(bundle_doc("app", [component("C", kind=kind, methods=methods)])).component("C")


@settings(max_examples=300, deadline=None)
@given(scanned_components())
def test_every_classified_statement_is_accounted_for_once(comp):
    entries, exits = find_ipc_points("app", comp, CATALOG)
    seen: dict[tuple[str, int], int] = {}
    for point in entries + exits:
        if point.statement_index is not None:
            key = (point.method, point.statement_index)
            seen[key] = seen.get(key, 0) + 1
        for index in point.covers:
            key = (point.method, index)
            seen[key] = seen.get(key, 0) + 1

    expected = set()
    for m in comp.methods:
        for stmt in m.body:
            if stmt.kind == StatementKind.API and classify_api(CATALOG, stmt.api_name).kind != ApiKind.NEUTRAL:
                expected.add((m.name, stmt.index))

    assert set(seen) == expected
    assert all(count == 1 for count in seen.values())

    lifecycle = CATALOG.lifecycle_methods(comp.kind)
    assert sorted(e.method for e in entries if e.origin == PointOrigin.LIFECYCLE) == sorted(
        m.name for m in comp.methods if m.name in lifecycle
    )
