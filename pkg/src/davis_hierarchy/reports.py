"""Deterministic JSON reports."""
from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from pathlib import Path

SCHEMA_VERSION = 1


def digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _default(obj):
    if isinstance(obj, Fraction):
        return {"num": obj.numerator, "den": obj.denominator}
    if isinstance(obj, (set, frozenset)):
        return sorted(obj, key=repr)
    if hasattr(obj, "to_json"):
        return obj.to_json()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def make_report(command: str, argv, inputs, verdicts: dict, result: dict, caveats=()) -> dict:
    """``inputs`` is a list of file paths; each is recorded with its sha256."""
    return {
        "schema": SCHEMA_VERSION,
        "command": command,
        "argv": list(argv),
        "inputs": {str(p): digest(p) for p in inputs},
        "verdicts": {k: bool(v) for k, v in verdicts.items()},
        "passed": all(verdicts.values()),
        "result": result,
        "caveats": sorted(set(caveats)),
    }


def error_report(command: str, argv, error: Exception) -> dict:
    out = {
        "schema": SCHEMA_VERSION,
        "command": command,
        "argv": list(argv),
        "error": {"type": type(error).__name__, "message": str(error)},
    }
    limit = getattr(error, "limit_name", None)
    if limit is not None:
        out["error"]["limit"] = limit
    return out


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, default=_default) + "\n"


def write_report(report: dict, path=None, stream=None) -> str:
    text = dumps(report)
    if path and path != "-":
        Path(path).write_text(text)
    elif stream is not None:
        stream.write(text)
    return text
