"""
Reading and writing of the JSON / text artifacts exchanged between phases.
All output is UTF-8 with a trailing newline so reruns are byte-identical.
"""

import json
import logging
from pathlib import Path
from typing import TypeVar

from pydantic import BaseModel, ValidationError

from trustflow.errors import DocumentError

logger = logging.getLogger(__name__)

DocumentT = TypeVar("DocumentT", bound=BaseModel)


def dump_document(doc: BaseModel) -> str:
    return doc.model_dump_json(by_alias=True, exclude_none=True, indent=2) + "\n"


def parse_document(text: str, model: type[DocumentT], name: str = "document") -> DocumentT:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError("syntax", f"{name}: {e.msg} (line {e.lineno}, column {e.colno})") from e
    try:
        return model.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise DocumentError("schema", f"{name}: {location}: {first['msg']}") from e


def read_document(path: str | Path, model: type[DocumentT]) -> DocumentT:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise DocumentError("io", f"cannot read {path}: {e}") from e
    return parse_document(text, model, name=str(path))


def write_text(path: str | Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logger.info(f"Wrote {path}")
    return path


def write_document(path: str | Path, doc: BaseModel) -> Path:
    return write_text(path, dump_document(doc))
