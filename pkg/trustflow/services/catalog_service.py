"""
Catalog service – loads classification tables and classifies API names.
"""

import hashlib
import json
import logging
from functools import lru_cache
from pathlib import Path

from pydantic import ValidationError

from trustflow.errors import CatalogError
from trustflow.models.app import ComponentKind
from trustflow.models.catalog import (
    ApiCatalog,
    ApiClass,
    ApiKind,
    AttackComplexity,
    Criticality,
    ProviderRole,
    Resolution,
)
from trustflow.schemas.catalog import ApiEntryDocument, CatalogDocument

logger = logging.getLogger(__name__)

DEFAULT_CATALOG_FILE = Path(__file__).resolve().parent.parent / "data" / "default_catalog.json"


def _entry_class(entry: ApiEntryDocument) -> ApiClass:
    kind = ApiKind(entry.class_)
    provider = ProviderRole(entry.provider) if entry.provider else None

    if kind == ApiKind.SOURCE:
        if entry.level is None:
            raise CatalogError("missing_level", f"source '{entry.name}' has no criticality")
        try:
            criticality = Criticality(entry.level)
        except ValueError:
            raise CatalogError("unknown_level", f"'{entry.level}' is not a criticality ({entry.name})")
        return ApiClass(kind=kind, criticality=criticality, label=entry.label, provider=provider)

    if kind == ApiKind.SINK:
        if entry.level is None:
            raise CatalogError("missing_level", f"sink '{entry.name}' has no attack complexity")
        try:
            complexity = AttackComplexity(entry.level)
        except ValueError:
            raise CatalogError("unknown_level", f"'{entry.level}' is not an attack complexity ({entry.name})")
        return ApiClass(kind=kind, attack_complexity=complexity, label=entry.label, provider=provider)

    if entry.level is not None:
        raise CatalogError("unknown_level", f"{kind.value} entry '{entry.name}' cannot carry a level")

    if kind == ApiKind.IPC_OUT:
        if entry.resolution is None:
            raise CatalogError("missing_resolution", f"ipc_out '{entry.name}' has no resolution mode")
        return ApiClass(kind=kind, resolution=Resolution(entry.resolution), label=entry.label)

    return ApiClass(kind=kind, label=entry.label)


def catalog_from_document(doc: CatalogDocument) -> ApiCatalog:
    entries: dict[str, ApiClass] = {}
    for entry in doc.apis:
        if entry.name in entries:
            raise CatalogError("duplicate_api", f"api '{entry.name}' listed twice")
        entries[entry.name] = _entry_class(entry)

    lifecycle: dict[ComponentKind, frozenset[str]] = {}
    for kind_name, methods in doc.lifecycle.items():
        try:
            kind = ComponentKind(kind_name)
        except ValueError:
            raise CatalogError("unknown_kind", f"'{kind_name}' is not a component kind")
        lifecycle[kind] = frozenset(methods)

    canonical = doc.model_dump_json(by_alias=True, exclude_none=True)
    digest = hashlib.sha256(canonical.encode("utf-8")).hexdigest()
    return ApiCatalog(
        version=doc.version or "custom",
        digest=digest,
        entries=entries,
        lifecycle_entries=lifecycle,
    )


def load_catalog(text: str) -> ApiCatalog:
    """
    Parse a catalog document.
    Raises CatalogError (syntax, schema, duplicate_api, unknown_level,
    missing_level, missing_resolution, unknown_kind).
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise CatalogError("syntax", f"{e.msg} (line {e.lineno}, column {e.colno})") from e
    try:
        doc = CatalogDocument.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise CatalogError("schema", f"{location}: {first['msg']}") from e

    catalog = catalog_from_document(doc)
    logger.debug(f"Catalog {catalog.version}: {len(catalog.entries)} api entries")
    return catalog


def load_catalog_file(path: str | Path) -> ApiCatalog:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise CatalogError("io", f"cannot read {path}: {e}") from e
    return load_catalog(text)


@lru_cache()
def default_catalog() -> ApiCatalog:
    """The shipped transcription of the source, sink and IPC tables."""
    return load_catalog_file(DEFAULT_CATALOG_FILE)


def classify_api(catalog: ApiCatalog, name: str) -> ApiClass:
    """Total lookup; names absent from the catalog are Neutral."""
    return catalog.classify(name)
