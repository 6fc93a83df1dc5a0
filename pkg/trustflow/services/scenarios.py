"""
Scenario fixtures – bundle documents reproducing the attack topologies:
(a) one app reading a sensitive source and sending it to a sink,
(b) reading and sending split across two cooperating apps,
(c) a malicious reader abusing an unguarded forwarder,
case_study: a location helper app feeding a public-transport app's WebView.
"""

import logging
from pathlib import Path

from trustflow.errors import InputError
from trustflow.schemas.bundle import BundleDocument
from trustflow.utils.documents import write_document

logger = logging.getLogger(__name__)


def _api(name: str, args: list[str] | None = None, define: str | None = None, target: str | None = None) -> dict:
    body: dict = {"name": name, "args": args or []}
    if define:
        body["def"] = define
    if target:
        body["target"] = target
    return {"api": body}


def _assign(define: str, uses: list[str]) -> dict:
    return {"assign": {"def": define, "uses": uses}}


def _call(callee: str, args: list[str], define: str | None = None) -> dict:
    body: dict = {"callee": callee, "args": args}
    if define:
        body["def"] = define
    return {"call": body}


# ─── Scenario (a): single app, source straight to sink ───
SCENARIO_A = [
    {
        "app_id": "flashlight",
        "label": "Flashlight",
        "granted_permissions": ["READ_CONTACTS", "INTERNET"],
        "components": [
            {
                "name": "MainActivity",
                "kind": "Activity",
                "exported": True,
                "intent_filters": ["android.intent.action.MAIN"],
                "methods": [
                    {
                        "name": "onCreate",
                        "params": ["savedState"],
                        "body": [
                            _api("ContentProvider.read", define="contacts", target="content://contacts"),
                            _assign("payload", ["contacts"]),
                            _api("WebView.loadUrl", ["payload"]),
                        ],
                    },
                ],
            },
        ],
    },
]

# ─── Scenario (b): reader app hands data to a sender app ───
SCENARIO_B = [
    {
        "app_id": "contactsbackup",
        "label": "ContactsBackup",
        "granted_permissions": ["READ_CONTACTS"],
        "components": [
            {
                "name": "MainActivity",
                "kind": "Activity",
                "exported": True,
                "intent_filters": ["android.intent.action.MAIN"],
                "methods": [
                    {
                        "name": "onCreate",
                        "params": ["savedState"],
                        "body": [
                            _api("ContentProvider.read", define="c", target="content://contacts"),
                            _api("startService", ["c"], target="syncer/UploadService"),
                        ],
                    },
                ],
            },
        ],
    },
    {
        "app_id": "syncer",
        "label": "Syncer",
        "granted_permissions": ["INTERNET"],
        "components": [
            {
                "name": "UploadService",
                "kind": "Service",
                "exported": True,
                "methods": [
                    {
                        "name": "onStartCommand",
                        "params": ["intent"],
                        "body": [
                            _assign("url", ["intent"]),
                            _api("WebView.loadUrl", ["url"]),
                        ],
                    },
                ],
            },
        ],
    },
]

# ─── Scenario (c): malicious reader, erroneous forwarder ───
SCENARIO_C = [
    {
        "app_id": "wallpaperfun",
        "label": "WallpaperFun",
        "granted_permissions": ["READ_SMS"],
        "components": [
            {
                "name": "WallpaperActivity",
                "kind": "Activity",
                "exported": True,
                "intent_filters": ["android.intent.action.MAIN"],
                "methods": [
                    {
                        "name": "onCreate",
                        "params": ["savedState"],
                        "body": [
                            _api("SMS.receive", define="sms"),
                            _api("sendBroadcast", ["sms"], target="com.forwarder.SHARE"),
                        ],
                    },
                ],
            },
        ],
    },
    {
        "app_id": "quickshare",
        "label": "QuickShare",
        "granted_permissions": ["INTERNET", "SEND_SMS"],
        "components": [
            {
                "name": "ShareReceiver",
                "kind": "BroadcastReceiver",
                "exported": True,
                "intent_filters": ["com.forwarder.SHARE"],
                "methods": [
                    {
                        "name": "onReceive",
                        "params": ["context", "intent"],
                        "body": [
                            _assign("body", ["intent"]),
                            _api("SMS.send", ["body"]),
                        ],
                    },
                ],
            },
        ],
    },
]

# ─── Case study: location helper + public-transport app ───
CASE_STUDY = [
    {
        "app_id": "pubtranslocation",
        "label": "PubTransLocation",
        "granted_permissions": ["ACCESS_FINE_LOCATION"],
        "components": [
            {
                "name": "LocationService",
                "kind": "Service",
                "exported": True,
                "intent_filters": ["GET_LOCATION"],
                "methods": [
                    {
                        "name": "onBind",
                        "params": ["intent"],
                        "body": [_call("requestLocation", ["intent"])],
                    },
                    {
                        "name": "requestLocation",
                        "params": ["callback"],
                        "body": [
                            _api("LocationManager.getLastKnownLocation", define="loc"),
                            _assign("payload", ["loc"]),
                            _api("RemoteCallback.send", ["payload"], target="LOCATION_RESULT"),
                        ],
                    },
                ],
            },
        ],
    },
    {
        "app_id": "pubtrans",
        "label": "PubTrans",
        "granted_permissions": ["INTERNET"],
        "components": [
            {
                "name": "MainActivity",
                "kind": "Activity",
                "exported": True,
                "intent_filters": ["android.intent.action.MAIN"],
                "methods": [
                    {
                        "name": "onCreate",
                        "params": ["savedState"],
                        "body": [_api("bindService", define="svc", target="GET_LOCATION")],
                    },
                    {
                        "name": "onLocationResult",
                        "params": [],
                        "body": [
                            _api("RemoteCallback.receive", define="loc", target="LOCATION_RESULT"),
                            _assign("query", ["loc"]),
                            _call("showResults", ["query"]),
                        ],
                    },
                    {
                        "name": "showResults",
                        "params": ["q"],
                        "body": [
                            _assign("extras", ["q"]),
                            _api("startActivity", ["extras"], target="pubtrans/ResultWebView"),
                        ],
                    },
                ],
            },
            {
                "name": "ResultWebView",
                "kind": "Activity",
                "exported": False,
                "methods": [
                    {
                        "name": "onCreate",
                        "params": ["savedState"],
                        "body": [
                            _api("getIntent", define="extras"),
                            _call("loadResults", ["extras"]),
                        ],
                    },
                    {
                        "name": "loadResults",
                        "params": ["extras"],
                        "body": [
                            _api("buildUrl", ["extras"], define="url"),
                            _api("WebView.loadUrl", ["url"]),
                        ],
                    },
                ],
            },
        ],
    },
]

SCENARIOS = {
    "a": SCENARIO_A,
    "b": SCENARIO_B,
    "c": SCENARIO_C,
    "case_study": CASE_STUDY,
}


def scenario_documents(kind: str) -> list[BundleDocument]:
    if kind not in SCENARIOS:
        raise InputError("unknown_scenario", f"unknown scenario '{kind}' (choose from {', '.join(SCENARIOS)})")
    return [BundleDocument.model_validate(raw) for raw in SCENARIOS[kind]]


def write_scenario(kind: str, out_dir: str | Path) -> list[Path]:
    """
    Write one <app_id>.json per app of the scenario, in install order.
    Existing files of the same name are replaced.
    """
    out_dir = Path(out_dir)
    written = []
    for doc in scenario_documents(kind):
        path = write_document(out_dir / f"{doc.app_id}.json", doc)
        logger.info(f"Scenario {kind}: wrote {doc.app_id}")
        written.append(path)
    return written
