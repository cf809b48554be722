"""Canonical JSON serialization and atomic file writes.

Every JSON artifact the package emits goes through :func:`canonical_json`
so that identical inputs always produce byte-identical files: keys keep
their insertion order, there is no whitespace variation, and the file ends
with a single newline.  Writes land in a temporary file in the target
directory and are renamed into place, so batch runs never observe a
half-written artifact.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Any

from .errors import FormatError


def canonical_json(doc: Any) -> str:
    """Serialize ``doc`` to the package's canonical JSON form."""
    return json.dumps(doc, ensure_ascii=False, separators=(",", ":"), allow_nan=False) + "\n"


def atomic_write_bytes(path: str | Path, data: bytes) -> None:
    """Write ``data`` to ``path`` via a same-directory temp file + rename."""
    path = Path(path)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent or Path("."), prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


def write_json(path: str | Path, doc: Any) -> None:
    atomic_write_bytes(path, canonical_json(doc).encode("utf-8"))


def read_json(path: str | Path) -> Any:
    """Parse a UTF-8 JSON file, raising :class:`FormatError` on bad content."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise FormatError(f"{path}: not valid UTF-8 ({exc})") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc})") from exc


def require_key(doc: dict, key: str, kind: type | tuple[type, ...], where: str) -> Any:
    """Fetch ``doc[key]`` checking its JSON type, raising :class:`FormatError`."""
    if key not in doc:
        raise FormatError(f"{where}: missing required key {key!r}")
    value = doc[key]
    if kind is float:
        kind = (int, float)
    if isinstance(value, bool) and kind is not bool:
        raise FormatError(f"{where}: key {key!r} has wrong type {type(value).__name__}")
    if not isinstance(value, kind):
        raise FormatError(f"{where}: key {key!r} has wrong type {type(value).__name__}")
    return value
