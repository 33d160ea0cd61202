from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_form

from davis_hierarchy.chains import (
    ChainComplex,
    direct_sum,
    induced_map_ranks,
    mapping_cone,
    rank,
    smith_invariants,
)
from davis_hierarchy.errors import ResourceLimit
from davis_hierarchy.simplicial import cycle


def _sparse(rows):
    return {i: {j: v for j, v in enumerate(r) if v} for i, r in enumerate(rows) if any(r)}


def _sympy_invariants(rows):
    snf = smith_normal_form(Matrix(rows))
    diag = [abs(snf[i, i]) for i in range(min(snf.shape)) if snf[i, i] != 0]
    return sorted(int(d) for d in diag)


matrices = st.integers(1, 6).flatmap(
    lambda n: st.integers(1, 6).flatmap(
        lambda m: st.lists(st.lists(st.integers(-4, 4), min_size=m, max_size=m), min_size=n, max_size=n)
    )
)


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_smith_invariants_match_sympy(rows):
    assert sorted(smith_invariants(_sparse(rows))) == _sympy_invariants(rows)


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_rank_matches_numpy(rows):
    assert rank(_sparse(rows)) == np.linalg.matrix_rank(np.array(rows, dtype=float))


def test_known_invariants():
    assert smith_invariants(_sparse([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])) == [2, 6, 12]
    assert smith_invariants({}) == []


def test_chain_complex_of_circle():
    C, _ = cycle(6).chain_complex()
    assert C.betti() == {0: 1, 1: 1}
    assert C.euler() == 0


def test_direct_sum_and_cone_of_identity():
    C, _ = cycle(4).chain_complex()
    S, offsets = direct_sum(C, C)
    assert S.betti() == {0: 2, 1: 2}
    assert offsets[1][0] == C.dims[0]
    identity = {k: {i: {i: 1} for i in range(d)} for k, d in C.dims.items()}
    assert mapping_cone(C, C, identity).betti() == {}
    assert induced_map_ranks(C, C, identity) == {0: 1, 1: 1}


def test_zero_map_ranks():
    C, _ = cycle(5).chain_complex()
    assert induced_map_ranks(C, C, {}) == {0: 0, 1: 0}


def test_cell_cap(monkeypatch):
    monkeypatch.setenv("DH_MAX_CELLS", "10")
    with pytest.raises(ResourceLimit) as info:
        cycle(6).chain_complex()
    assert info.value.limit_name == "simplices"


def test_explicit_complex():
    # a single edge: C_1 -> C_0 with boundary (1, -1)
    C = ChainComplex({0: 2, 1: 1}, {1: {0: {0: -1}, 1: {0: 1}}})
    assert C.betti() == {0: 1}
