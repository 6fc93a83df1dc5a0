import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trustflow.errors import CatalogError
from trustflow.models.app import ComponentKind
from trustflow.models.catalog import ApiKind, AttackComplexity, Criticality, Resolution
from trustflow.services.catalog_service import classify_api, load_catalog


def catalog_text(apis, lifecycle=None, version=None) -> str:
    doc = {"apis": apis, "lifecycle": lifecycle or {"Activity": ["onCreate"]}}
    if version:
        doc["version"] = version
    return json.dumps(doc)


# ─── Shipped tables ───

def test_bind_service_is_ipc_out(catalog):
    api = classify_api(catalog, "bindService")
    assert api.kind == ApiKind.IPC_OUT
    assert api.resolution == Resolution.IMPLICIT_ACTION


def test_location_is_medium_source(catalog):
    api = classify_api(catalog, "LocationManager.getLastKnownLocation")
    assert api.kind == ApiKind.SOURCE
    assert api.criticality == Criticality.MEDIUM


@pytest.mark.parametrize("name", ["frobnicate", "", "webview.loadurl"])
def test_unknown_names_are_neutral(catalog, name):
    assert classify_api(catalog, name).kind == ApiKind.NEUTRAL


@pytest.mark.parametrize("name, complexity", [
    ("WebView.loadUrl", AttackComplexity.MEDIUM),
    ("SMS.send", AttackComplexity.MEDIUM),
    ("Bluetooth.send", AttackComplexity.HIGH),
    ("ContentProvider.write", AttackComplexity.HIGH),
    ("MapView.animateTo", AttackComplexity.VERY_HIGH),
    ("MapView", AttackComplexity.VERY_HIGH),
])
def test_shipped_sinks(catalog, name, complexity):
    api = classify_api(catalog, name)
    assert api.kind == ApiKind.SINK
    assert api.attack_complexity == complexity


@pytest.mark.parametrize("name, criticality", [
    ("ContentProvider.read", Criticality.HIGH),
    ("SMS.receive", Criticality.HIGH),
    ("TelephonyManager.getDeviceId", Criticality.MEDIUM),
    ("DeviceId", Criticality.MEDIUM),
])
def test_shipped_sources(catalog, name, criticality):
    assert classify_api(catalog, name).criticality == criticality


def test_short_names_share_their_long_form_row(catalog):
    assert classify_api(catalog, "MapView") == classify_api(catalog, "MapView.animateTo")
    assert classify_api(catalog, "DeviceId") == classify_api(catalog, "TelephonyManager.getDeviceId")


@pytest.mark.parametrize("name", ["startActivity", "sendBroadcast", "startService", "bindService"])
def test_shipped_ipc(catalog, name):
    assert classify_api(catalog, name).kind == ApiKind.IPC_OUT


def test_shipped_lifecycle(catalog):
    assert "onCreate" in catalog.lifecycle_methods(ComponentKind.ACTIVITY)
    assert {"onStartCommand", "onBind"} <= catalog.lifecycle_methods(ComponentKind.SERVICE)
    assert "onReceive" in catalog.lifecycle_methods(ComponentKind.BROADCAST_RECEIVER)


def test_every_source_and_sink_has_a_level(catalog):
    for api in catalog.entries.values():
        if api.kind == ApiKind.SOURCE:
            assert api.criticality is not None
        if api.kind == ApiKind.SINK:
            assert api.attack_complexity is not None
        if api.kind == ApiKind.IPC_OUT:
            assert api.resolution is not None


def test_catalog_carries_version_and_digest(catalog):
    assert catalog.version == "default-1"
    assert len(catalog.digest) == 64


def test_ordinal_orders():
    assert Criticality.LOW.rank < Criticality.MEDIUM.rank < Criticality.HIGH.rank
    assert AttackComplexity.MEDIUM.rank < AttackComplexity.HIGH.rank < AttackComplexity.VERY_HIGH.rank


# ─── Load errors ───

@pytest.mark.parametrize("apis, code", [
    ([{"name": "x", "class": "source", "level": "high"}, {"name": "x", "class": "sink", "level": "high"}], "duplicate_api"),
    ([{"name": "x", "class": "source", "level": "extreme"}], "unknown_level"),
    ([{"name": "x", "class": "sink", "level": "low"}], "unknown_level"),
    ([{"name": "x", "class": "source"}], "missing_level"),
    ([{"name": "x", "class": "ipc_out"}], "missing_resolution"),
    ([{"name": "x", "class": "teleport"}], "schema"),
])
def test_load_errors(apis, code):
    with pytest.raises(CatalogError) as info:
        load_catalog(catalog_text(apis))
    assert info.value.code == code


def test_unknown_component_kind_in_lifecycle():
    with pytest.raises(CatalogError) as info:
        load_catalog(catalog_text([], lifecycle={"Fragment": ["onAttach"]}))
    assert info.value.code == "unknown_kind"


def test_syntax_error():
    with pytest.raises(CatalogError) as info:
        load_catalog("{not json")
    assert info.value.code == "syntax"


def test_low_criticality_is_admitted():
    catalog = load_catalog(catalog_text([{"name": "Clock.read", "class": "source", "level": "low"}]))
    assert classify_api(catalog, "Clock.read").criticality == Criticality.LOW


# ─── Properties ───

entry_strategy = st.one_of(
    st.builds(lambda lv: {"class": "source", "level": lv}, st.sampled_from(["low", "medium", "high"])),
    st.builds(lambda lv: {"class": "sink", "level": lv}, st.sampled_from(["medium", "high", "very_high"])),
    st.builds(lambda r: {"class": "ipc_out", "resolution": r}, st.sampled_from(["explicit", "implicit_action", "broadcast"])),
    st.just({"class": "ipc_in"}),
)
names = st.text(alphabet="abcdefgXYZ.", min_size=1, max_size=8)


@settings(max_examples=100, deadline=None)
@given(st.dictionaries(names, entry_strategy, max_size=10), names, entry_strategy, st.lists(names, max_size=10))
def test_extension_never_reclassifies_other_names(entries, new_name, new_entry, lookups):
    entries.pop(new_name, None)
    base = load_catalog(catalog_text([{"name": n, **e} for n, e in entries.items()]))
    extended = load_catalog(catalog_text(
        [{"name": n, **e} for n, e in entries.items()] + [{"name": new_name, **new_entry}]
    ))
    for name in list(entries) + lookups:
        if name != new_name:
            assert classify_api(extended, name) == classify_api(base, name)
