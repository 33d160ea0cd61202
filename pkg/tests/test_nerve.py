from __future__ import annotations

from itertools import combinations

import pytest
from oracles import float_closure, geometric_generators

from conftest import load_system
from davis_hierarchy.coxeter import coxeter_from_edges, right_angled
from davis_hierarchy.nerve import build_chamber, build_nerve, manifold_check
from davis_hierarchy.simplicial import SimplicialComplex, cross_polytope_boundary, cycle, is_isomorphic, join


def _named_cycle(names):
    n = len(names)
    return SimplicialComplex([(names[i], names[(i + 1) % n]) for i in range(n)])


def test_pentagon_nerve(pentagon_nerve):
    L = pentagon_nerve.named_complex()
    assert L == _named_cycle("abcde")
    assert [t.order for t in pentagon_nerve.spherical_subsets] == [1] + [2] * 5 + [4] * 5


def test_nerve_includes_every_spherical_subset_oracle():
    W = load_system("b3.cox")
    N = build_nerve(W)
    for k in range(W.rank + 1):
        for T in combinations(range(W.rank), k):
            sub = [[W.orders[i][j] for j in T] for i in T]
            order = float_closure(geometric_generators(sub)) if T else 1
            assert N.is_spherical(T) == (order is not None)
            if order is not None:
                assert N.order(T) == order


def test_right_angled_nerve_is_flag_complex_of_graph():
    # octahedral boundary as the commuting graph of six generators
    names = ["p0", "m0", "p1", "m1", "p2", "m2"]
    pairs = [(a, b) for a, b in combinations(names, 2) if a[1] != b[1]]
    W = right_angled(names, pairs)
    L = build_nerve(W).named_complex()
    assert is_isomorphic(L, cross_polytope_boundary(3))
    assert manifold_check(build_nerve(W), 3).kind == "manifold"


def test_triangle_groups_nerves():
    W = load_system("triangle237.cox")
    N = build_nerve(W)
    assert is_isomorphic(N.complex, cycle(3))
    cert = manifold_check(N, 2)
    assert cert.passed and cert.kind == "manifold"


def test_manifold_with_boundary():
    # a path of three generators: nerve is an interval (a 1-disk)
    W = coxeter_from_edges("abc", {("a", "b"): 2, ("b", "c"): 2})
    cert = manifold_check(build_nerve(W), 2)
    assert cert.kind == "manifold with boundary"


def test_finite_group_nerve_is_a_simplex():
    W = load_system("a3.cox")
    N = build_nerve(W)
    assert N.maximal_subsets() == [(0, 1, 2)]
    assert N.order((0, 1, 2)) == 24
    # a simplex is a disk, so the Davis complex of a finite group is a 3-cell
    assert manifold_check(N, 3).kind == "manifold with boundary"


def test_chamber_is_cone_on_subdivided_nerve(pentagon_nerve):
    K = build_chamber(pentagon_nerve)
    assert len(K.complex.vertices) == 11
    assert K.complex.homology(reduced=True).is_acyclic
    assert K.S(()) == frozenset()
    for s in range(5):
        mirror = K.mirror(s)
        # the mirror of s is the closed star of s in b(L): a path of three vertices
        assert mirror.f_vector() == (3, 2)
        assert all(s in x for x in mirror.vertices)


def test_join_nerve_for_product():
    W = coxeter_from_edges(
        ["a", "b", "c", "d"],
        {("a", "c"): 2, ("a", "d"): 2, ("b", "c"): 2, ("b", "d"): 2},
    )
    two_points = lambda p: SimplicialComplex([(p + "0",), (p + "1",)])
    assert is_isomorphic(build_nerve(W).complex, join(two_points("x"), two_points("y")))


@pytest.mark.parametrize("m", [3, 4, 5, 6])
def test_dihedral_orders(m):
    W = coxeter_from_edges("st", {("s", "t"): m})
    assert build_nerve(W).order((0, 1)) == 2 * m
