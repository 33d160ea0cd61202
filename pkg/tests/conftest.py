from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from davis_hierarchy.coxeter import INF, coxeter_from_edges, parse_coxeter, right_angled  # noqa: E402
from davis_hierarchy.corpus import CORPUS_DIR  # noqa: E402
from davis_hierarchy.nerve import build_nerve  # noqa: E402

PENTAGON_EDGES = [("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "a")]


def load_system(name):
    return parse_coxeter((CORPUS_DIR / name).read_text())


@pytest.fixture(scope="session")
def pentagon():
    return right_angled("abcde", PENTAGON_EDGES)


@pytest.fixture(scope="session")
def pentagon_nerve(pentagon):
    return build_nerve(pentagon)


@pytest.fixture(scope="session")
def dinf():
    return coxeter_from_edges("st", {("s", "t"): INF})


@pytest.fixture(scope="session")
def i2_3():
    return coxeter_from_edges("st", {("s", "t"): 3})


@pytest.fixture
def corpus_dir():
    return CORPUS_DIR


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
