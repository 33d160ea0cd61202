"""Golden fixture runner.

``golden.json`` in the corpus directory lists command lines (with input
paths relative to that directory), the expected exit code, and expected
values at dotted paths of the report.
"""
from __future__ import annotations

import io
import json
from pathlib import Path

CORPUS_DIR = Path(__file__).with_name("corpus")


def lookup(report, dotted: str):
    node = report
    for part in dotted.split("."):
        if isinstance(node, list):
            node = node[int(part)]
        else:
            node = node[part]
    return node


def load_fixtures(directory=None) -> list[dict]:
    directory = Path(directory) if directory else CORPUS_DIR
    return json.loads((directory / "golden.json").read_text())


def run_fixture(fixture: dict, directory=None) -> dict:
    from .cli import run_command

    directory = Path(directory) if directory else CORPUS_DIR
    argv = [a.replace("{corpus}", str(directory)) for a in fixture["argv"]]
    code, report = run_command(argv, stdout=io.StringIO(), stderr=io.StringIO())
    mismatches = []
    if code != fixture["exit"]:
        mismatches.append(f"exit {code} != {fixture['exit']}")
    for path, expected in fixture.get("values", {}).items():
        try:
            got = lookup(report, path)
        except (KeyError, IndexError, TypeError):
            got = "<missing>"
        if got != expected:
            mismatches.append(f"{path}: {got!r} != {expected!r}")
    return {"name": fixture["name"], "matched": not mismatches, "mismatches": mismatches}


def run_corpus(directory=None) -> list[dict]:
    return [run_fixture(f, directory) for f in load_fixtures(directory)]
