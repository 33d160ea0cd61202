from __future__ import annotations

import pytest

from conftest import load_system
from davis_hierarchy.coxeter import Element
from davis_hierarchy.davis import (
    Panel,
    basic_construction,
    davis_ball,
    halfspace_check,
    local_arrangement_check,
    make_panel,
    separation_check,
    vertex_link_check,
    walls_in_ball,
)
from davis_hierarchy.errors import PanelNotActive
from davis_hierarchy.nerve import build_chamber, build_nerve, make_mirrored
from davis_hierarchy.simplicial import SimplicialComplex, is_isomorphic


@pytest.fixture(scope="module")
def pentagon_r2(pentagon, pentagon_nerve):
    return davis_ball(pentagon, 2, pentagon_nerve)


def test_pentagon_ball_is_contractible_shadow(pentagon_r2):
    R = pentagon_r2.realization
    assert len(pentagon_r2.chambers) == 21
    assert R.complex.homology(reduced=True).is_acyclic
    assert R.complex.f_vector() == (161, 370, 210)


def test_pentagon_walls(pentagon, pentagon_nerve, pentagon_r2):
    assert len(walls_in_ball(davis_ball(pentagon, 1, pentagon_nerve))) == 5
    walls = walls_in_ball(pentagon_r2)
    assert len(walls) == 15
    for wall in walls:
        carrier = wall.carrier(pentagon_r2)
        assert carrier.is_pure() and carrier.dimension == 1
        assert carrier.homology(reduced=True).is_acyclic


def test_certificates_on_pentagon(pentagon_nerve, pentagon_r2):
    assert separation_check(pentagon_r2).passed
    links = vertex_link_check(pentagon_r2, pentagon_nerve, 2)
    assert links.passed and links.checked > 0
    assert halfspace_check(pentagon_r2).passed
    assert local_arrangement_check(pentagon_r2).passed


def test_dinf_ball(dinf):
    U = davis_ball(dinf, 3)
    assert len(U.chambers) == 7
    assert len(walls_in_ball(U)) == 6
    assert len(U.boundary_panels) == 2
    R = U.realization
    # a segment tiled by seven intervals, each subdivided at its midpoint
    assert R.complex.f_vector() == (15, 14)


@pytest.mark.parametrize("name", ["a3.cox", "b3.cox", "i2_3.cox"])
def test_finite_group_realization_is_acyclic(name):
    W = load_system(name)
    U = davis_ball(W, 20)
    assert not U.boundary_panels
    assert U.realization.complex.homology(reduced=True).is_acyclic
    assert separation_check(U).passed


def test_i2_3_local_arrangement(i2_3):
    U = davis_ball(i2_3, 3)
    assert len(walls_in_ball(U)) == 3
    assert local_arrangement_check(U).passed
    centre = [lab for lab in U.interior_vertices() if lab[1] == (0, 1)]
    assert len(centre) == 1
    assert len(U.vertex_chambers(centre[0])) == 6


def test_deactivate_and_restrict(dinf):
    U = davis_ball(dinf, 3)
    p = make_panel(dinf, Element(()), 0)
    V = U.deactivate([p])
    assert len(V.chamber_components()) == 2
    with pytest.raises(PanelNotActive):
        V.deactivate([p])
    left = min(V.chamber_components(), key=len)
    sub = V.restrict(left)
    assert set(sub.chambers) == set(left)
    assert sub.adhesions <= V.adhesions


def test_cutting_a_far_wall_leaves_a_component_unchanged(dinf):
    U = davis_ball(dinf, 3)
    far = make_panel(dinf, dinf.element([1, 0]), 1)
    V = U.deactivate([far])
    comps = V.component_complexes()
    assert sorted(len(c) for c, _ in comps) == [1, 6]


def test_panels_are_oriented(pentagon):
    p = make_panel(pentagon, pentagon.element([0]), 0)
    assert p == Panel(Element(()), 0, Element((0,)))


def test_basic_construction_with_interval_chamber(dinf):
    X = make_mirrored(SimplicialComplex([("p", "q")]), {"p": {0}, "q": {1}}, 2, dinf.names)
    U = basic_construction(dinf, X, 2)
    assert len(U.chambers) == 5
    assert is_isomorphic(U.realization.complex, SimplicialComplex([(i, i + 1) for i in range(5)]))


def test_chamber_of_davis_ball(pentagon_nerve):
    K = build_chamber(pentagon_nerve)
    U = basic_construction(pentagon_nerve.system, K, 0)
    assert len(U.chambers) == 1
    assert U.realization.complex.f_vector() == K.complex.f_vector()
    assert build_nerve(pentagon_nerve.system).complex == pentagon_nerve.complex
