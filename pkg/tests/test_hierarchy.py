from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from davis_hierarchy.coxeter import Element
from davis_hierarchy.davis import davis_ball, make_panel, walls_in_ball
from davis_hierarchy.errors import NotAComponent, TidyViolation
from davis_hierarchy.hierarchy import (
    WallFamily,
    census,
    check_tidy,
    cut_open,
    induced_hierarchy,
    mayer_vietoris,
    run_hierarchy,
    wall_family,
)
from davis_hierarchy.quotients import finite_quotient


@pytest.fixture(scope="module")
def dinf_even(dinf):
    # index-2 subgroup of even-length elements
    return finite_quotient(dinf, {"s": (1, 0), "t": (1, 0)})


@pytest.fixture(scope="module")
def pentagon_trace(pentagon, pentagon_nerve):
    U = davis_ball(pentagon, 2, pentagon_nerve)
    Q = finite_quotient(pentagon, "mod-3")
    return run_hierarchy(U, wall_family(U, Q), quotient=Q)


def test_dinf_single_orbit_is_tidy(dinf, dinf_even):
    U = davis_ball(dinf, 3)
    E = wall_family(U, dinf_even)
    assert len(E) == 2
    for member in E.members:
        assert check_tidy(U, WallFamily((member,))).passed
    assert check_tidy(U, E).passed


def test_cut_middle_wall_of_dinf(dinf):
    U = davis_ball(dinf, 1)
    N = cut_open(U, [make_panel(dinf, Element(()), 0)])
    c = census(N)
    assert c.components == 2 and c.all_acyclic


def test_pentagon_cut_one_orbit(pentagon, pentagon_nerve):
    U = davis_ball(pentagon, 1, pentagon_nerve)
    E = wall_family(U, finite_quotient(pentagon, "mod-3"))
    N = cut_open(U, E.members[0])
    c = census(N)
    assert c.components == 2 and c.all_acyclic
    mv = mayer_vietoris(U, E.members[0], N)
    assert mv.passed
    assert mv.chi_M == mv.chi_N - mv.chi_F


def test_dinf_hierarchy(dinf, dinf_even):
    U = davis_ball(dinf, 3)
    trace = run_hierarchy(U, wall_family(U, dinf_even), quotient=dinf_even)
    assert trace.passed
    assert len(trace.steps) == 2
    assert trace.terminal.components == 7


def test_pentagon_hierarchy(pentagon_trace):
    assert pentagon_trace.passed
    assert len(pentagon_trace.steps) == 15
    assert pentagon_trace.terminal.components == 21
    for step in pentagon_trace.steps:
        mv = step.mayer_vietoris
        assert mv.exact and mv.chain_composite_zero
        assert mv.chi_M == mv.chi_N - mv.chi_F
        assert step.residual_tidy is None or step.residual_tidy.passed


def test_mayer_vietoris_rejects_a_wrong_cut(dinf):
    U = davis_ball(dinf, 2)
    walls = walls_in_ball(U)
    F = walls[0].panels
    wrong = cut_open(U, walls[1].panels)
    # both cuts are points, so the Euler ledger balances; exactness does not
    mv = mayer_vietoris(U, F, wrong)
    assert mv.euler_ok
    assert not mv.exact and not mv.passed


def test_crossing_orbit_is_not_tidy(i2_3):
    U = davis_ball(i2_3, 3)
    E = wall_family(U)
    cert = check_tidy(U, E)
    assert not cert.local_arrangement
    assert any("crosses itself" in w for w in cert.witnesses)
    with pytest.raises(TidyViolation) as info:
        run_hierarchy(U, E)
    assert info.value.step == 0
    forced = run_hierarchy(U, E, override=True)
    assert forced.overridden and not forced.passed
    assert forced.terminal_single_chambers


def test_regular_quotient_hierarchy(i2_3, corpus_dir):
    from davis_hierarchy.quotients import parse_quotient_file

    Q = finite_quotient(i2_3, parse_quotient_file((corpus_dir / "i2_3_regular.perm").read_text(), i2_3))
    U = davis_ball(i2_3, 3)
    trace = run_hierarchy(U, wall_family(U, Q), quotient=Q)
    assert trace.passed and len(trace.steps) == 3 and trace.terminal.components == 6


@settings(max_examples=10, deadline=None)
@given(st.permutations(range(5)))
def test_terminal_state_is_order_independent(pentagon, pentagon_nerve, order):
    U = davis_ball(pentagon, 1, pentagon_nerve)
    E = wall_family(U)
    trace = run_hierarchy(U, E, order=order)
    assert trace.passed
    assert trace.terminal.chamber_counts == [1] * 6


def test_induced_hierarchies(dinf, dinf_even, pentagon_trace):
    U = davis_ball(dinf, 3)
    trace = run_hierarchy(U, wall_family(U, dinf_even), quotient=dinf_even)
    single = trace.states[-1].chamber_components()[0]
    assert induced_hierarchy(trace, single).steps == []
    half = max(trace.states[1].chamber_components(), key=len)
    sub = induced_hierarchy(trace, half)
    assert len(sub.steps) == 1 and sub.passed
    assert sub.stabilizer == [Element(())]

    comp = max(pentagon_trace.states[1].chamber_components(), key=len)
    sub = induced_hierarchy(pentagon_trace, comp)
    assert sub.passed and sub.initial_tidy.passed
    with pytest.raises(NotAComponent):
        induced_hierarchy(pentagon_trace, [Element(()), Element((2,))])


def test_trace_json_is_complete(pentagon_trace):
    data = pentagon_trace.to_json()
    assert data["passed"]
    assert len(data["euler_ledger"]) == 15
    assert data["steps"][0]["mayer_vietoris"]["exact"]
