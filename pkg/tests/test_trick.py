from __future__ import annotations

import pytest

from davis_hierarchy.coxeter import right_angled
from davis_hierarchy.errors import NotClosedBoundary, NotFlag
from davis_hierarchy.nerve import build_nerve
from davis_hierarchy.quotients import finite_quotient
from davis_hierarchy.simplicial import SimplicialComplex, barycentric_subdivision, cycle, find_isomorphism
from davis_hierarchy.trick import prepare_mirrored_manifold, run_trick

PENTAGON_DISK = SimplicialComplex([(f"v{i}", f"v{(i + 1) % 5}", "c") for i in range(5)])
SQUARE = SimplicialComplex([("a", "b", "c"), ("a", "c", "d")])
SQUARE_BOUNDARY = SimplicialComplex([("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])


def test_non_flag_boundary_is_refused():
    with pytest.raises(NotFlag):
        prepare_mirrored_manifold(SimplicialComplex([(0, 1, 2)]), SimplicialComplex([(0, 1), (1, 2), (0, 2)]))


def test_boundary_must_match():
    with pytest.raises(NotClosedBoundary):
        prepare_mirrored_manifold(SQUARE, cycle(4))
    with pytest.raises(NotClosedBoundary):
        prepare_mirrored_manifold(SQUARE, SimplicialComplex([("a", "b"), ("b", "c")]))
    with pytest.raises(NotClosedBoundary):
        prepare_mirrored_manifold(PENTAGON_DISK, SimplicialComplex([("v0", "v1"), ("v1", "v2"), ("v2", "v0")]))


def test_square_gives_product_of_infinite_dihedral_groups():
    MM = prepare_mirrored_manifold(SQUARE, SQUARE_BOUNDARY)
    W = MM.system
    assert W.rank == 4
    commuting = sum(1 for i in range(4) for j in range(i + 1, 4) if W.m(i, j) == 2)
    assert commuting == 4
    assert find_isomorphism(build_nerve(W).complex, cycle(4)) is not None


def test_pentagon_disk_gives_pentagon_group():
    MM = prepare_mirrored_manifold(PENTAGON_DISK, cycle(5))
    expected = right_angled(["v0", "v1", "v2", "v3", "v4"], [(f"v{i}", f"v{(i + 1) % 5}") for i in range(5)])
    assert MM.system == expected
    interior = [x for x in MM.chamber.complex.vertices if not MM.chamber.S(x)]
    assert ("c",) in interior


def test_interval_trick():
    MM = prepare_mirrored_manifold(SimplicialComplex([("p", "q")]), SimplicialComplex([("p",), ("q",)]))
    out = run_trick(MM, 3)
    assert out.passed
    assert len(out.complex.chambers) == 7
    assert out.trace.terminal.components == 7


def test_pentagon_disk_trick_mod_3():
    MM = prepare_mirrored_manifold(PENTAGON_DISK, cycle(5))
    out = run_trick(MM, 2, finite_quotient(MM.system, "mod-3"))
    assert out.passed
    bM = barycentric_subdivision(PENTAGON_DISK)
    for _, K in out.trace.states[-1].component_complexes():
        assert find_isomorphism(K, bM) is not None


def test_square_trick_euler_ledger():
    out = run_trick(prepare_mirrored_manifold(SQUARE, SQUARE_BOUNDARY), 2)
    assert out.passed and out.links_ok
    for step in out.trace.steps:
        mv = step.mayer_vietoris
        assert mv.chi_M == mv.chi_N - mv.chi_F
