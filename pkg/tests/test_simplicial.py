from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from davis_hierarchy.errors import LabelCollision, ParseError, SimplexNotFound
from davis_hierarchy.simplicial import (
    SimplicialComplex,
    barycentric_subdivision,
    cone,
    cross_polytope_boundary,
    cycle,
    find_isomorphism,
    format_complex,
    is_homology_disk,
    is_homology_sphere,
    is_isomorphic,
    join,
    parse_complex,
    simplex,
    sphere_boundary,
)

TORUS = SimplicialComplex(
    [(i, (i + 1) % 7, (i + 3) % 7) for i in range(7)] + [(i, (i + 2) % 7, (i + 3) % 7) for i in range(7)]
)
RP2 = SimplicialComplex(
    [(1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 6, 2), (2, 3, 5), (3, 4, 6), (4, 5, 2), (5, 6, 3), (6, 2, 4)]
)

complexes = st.lists(
    st.lists(st.integers(0, 7), min_size=1, max_size=4, unique=True), min_size=1, max_size=10
).map(SimplicialComplex)


def test_torus_homology():
    h = TORUS.homology()
    assert h.betti == {0: 1, 1: 2, 2: 1}
    assert not h.torsion
    assert TORUS.f_vector() == (7, 21, 14)


def test_projective_plane_has_torsion():
    h = RP2.homology()
    assert h.betti == {0: 1}
    assert h.torsion == {1: (2,)}
    assert h.group(1) == "Z/2"


def test_spheres():
    for n in range(1, 5):
        assert sphere_boundary(n).homology(reduced=True).betti == {n - 1: 1}
    assert cross_polytope_boundary(3).f_vector() == (6, 12, 8)
    assert cross_polytope_boundary(3).euler_characteristic() == 2


def test_void_and_empty_simplex():
    void = SimplicialComplex([])
    unit = SimplicialComplex([()])
    assert void.dimension == -2 and unit.dimension == -1
    assert join(unit, cycle(4)) == cycle(4)
    assert unit.homology(reduced=True).betti == {-1: 1}


@settings(max_examples=80, deadline=None)
@given(complexes)
def test_euler_poincare(K):
    betti = K.homology().betti
    assert sum((-1) ** k * b for k, b in betti.items()) == K.euler_characteristic()


@settings(max_examples=40, deadline=None)
@given(complexes)
def test_subdivision_preserves_homology(K):
    assert barycentric_subdivision(K).homology() == K.homology()


@settings(max_examples=40, deadline=None)
@given(complexes)
def test_cone_is_acyclic(K):
    assert cone(K, "apex").homology(reduced=True).is_acyclic


@settings(max_examples=40, deadline=None)
@given(complexes)
def test_relabel_is_isomorphism(K):
    L = K.relabel(lambda v: f"x{v}")
    assert is_isomorphic(K, L)
    assert L.homology() == K.homology()


def test_join_of_circles_is_three_sphere():
    L = join(cycle(4, "a"), cycle(5, "b"))
    cert = is_homology_sphere(L, 3)
    assert cert.passed
    assert cert.verdict == "homology 3-sphere; sphere status unresolved"
    with pytest.raises(LabelCollision):
        join(cycle(4), cycle(5))


def test_flagness():
    assert not cycle(3).is_flag()
    assert cycle(3).missing_faces() == [("v0", "v1", "v2")]
    assert cycle(4).is_flag()
    assert cross_polytope_boundary(4).is_flag()
    assert not sphere_boundary(3).is_flag()


def test_links_and_stars():
    S = cross_polytope_boundary(3)
    assert is_isomorphic(S.link(("x0+",)), cycle(4))
    assert S.star(("x0+",)).homology(reduced=True).is_acyclic
    with pytest.raises(SimplexNotFound):
        S.link(("x0+", "x0-"))


def test_boundary_and_disk():
    D = cone(cycle(5), "c")
    assert is_isomorphic(D.boundary(), cycle(5))
    assert is_homology_disk(D, 2).passed
    assert not is_homology_sphere(D, 2).passed
    assert is_homology_sphere(cycle(5), 1).verdict == "sphere"


def test_torus_is_not_a_sphere():
    assert not is_homology_sphere(TORUS, 2).passed


def test_components():
    K = SimplicialComplex([(0, 1), (2, 3), (3, 4)])
    assert sorted(len(c.vertices) for c in K.components()) == [2, 3]


def test_isomorphism_search():
    mapping = find_isomorphism(cycle(6, "a"), cycle(6, "b"))
    assert mapping is not None and len(mapping) == 6
    assert find_isomorphism(cycle(6), join(cycle(3, "a"), SimplicialComplex([("p",)]))) is None
    assert not is_isomorphic(simplex("abc"), cycle(3))


def test_file_roundtrip():
    K = join(cycle(4, "a"), cycle(4, "b"))
    assert parse_complex(format_complex(K)) == K


@pytest.mark.parametrize(
    "text",
    [
        "",
        "complex two\na b\na b\n",
        "complex 2\na\na b\n",
        "complex 2\na b\na c\n",
        "simplicial 2\na b\na b\n",
    ],
)
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_complex(text)
