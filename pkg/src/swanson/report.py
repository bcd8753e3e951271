"""Deterministic serialization: float formatting, CSV/JSON documents, run manifests."""

from __future__ import annotations

import datetime as _dt
import hashlib
import json
import math
import os
import sys
import tempfile
from typing import Iterable, Sequence

from . import __version__
from .quad_ops import CONVENTION

SCHEMA_VERSION = 1


def fmt_float(x: float) -> str:
    """17 significant digits; lowercase scientific outside ``[1e-4, 1e6)``."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0:
        return "0"
    if 1e-4 <= abs(x) < 1e6:
        return format(x, ".17g")
    return format(x, ".16e")


def fmt_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return fmt_float(value)
    return str(value)


def csv_text(header: Sequence[str], rows: Iterable[Sequence], footer: Sequence[str] = ()) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(fmt_cell(v) for v in row) for row in rows)
    lines.extend(f"# {line}" for line in footer)
    return "\n".join(lines) + "\n"


def _jsonable(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, complex):
        return {"re": _jsonable(value.real), "im": _jsonable(value.imag)}
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if hasattr(value, "item"):  # numpy scalar
        return _jsonable(value.item())
    return value


def json_text(command: str, payload: dict) -> str:
    doc = {"schema_version": SCHEMA_VERSION, "command": command}
    doc.update(payload)
    return json.dumps(_jsonable(doc), indent=2, sort_keys=False) + "\n"


def input_hash(config: dict) -> str:
    canonical = json.dumps(_jsonable(config), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def build_manifest(command: str, config: dict, timestamp: str | None = None) -> dict:
    if timestamp is None:
        timestamp = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": "swanson",
        "tool_version": __version__,
        "command": command,
        "config": _jsonable(config),
        "convention": CONVENTION,
        "timestamp": timestamp,
        "input_hash": input_hash({"command": command, **config}),
    }


def manifest_path(out_path: str) -> str:
    return out_path + ".manifest.json"


def atomic_write(path: str, text: str) -> None:
    """Write ``text`` to ``path`` via a temp file in the same directory and rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".swanson-", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(text: str, out: str | None, command: str, config: dict) -> None:
    """Write a data document to ``out`` (plus manifest) or to stdout."""
    if out is None:
        sys.stdout.write(text)
        return
    atomic_write(out, text)
    manifest = build_manifest(command, config)
    atomic_write(manifest_path(out), json.dumps(manifest, indent=2) + "\n")
