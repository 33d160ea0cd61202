"""Independent reference computations used by the tests.

Nothing here goes through the word problem, the classifier or the chamber
system code; groups are handled as explicit matrices.
"""
from __future__ import annotations

import math

import numpy as np

from davis_hierarchy.coxeter import INF


def geometric_generators(orders):
    """Tits geometric representation: s(v) = v - 2 B(e_s, v) e_s."""
    n = len(orders)
    B = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            m = orders[i][j]
            B[i, j] = -1.0 if m == INF else -math.cos(math.pi / m)
    gens = []
    for s in range(n):
        M = np.eye(n)
        M[s, :] -= 2 * B[s, :]
        gens.append(M)
    return gens


def _key(M):
    return tuple(np.round(M, 6).ravel() + 0.0)


def float_closure(gens, cap=1000):
    """Order of the matrix group generated by ``gens``, or None beyond ``cap``."""
    n = gens[0].shape[0] if gens else 0
    start = np.eye(n)
    seen = {_key(start)}
    frontier = [start]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = g @ s
                k = _key(h)
                if k not in seen:
                    seen.add(k)
                    if len(seen) > cap:
                        return None
                    nxt.append(h)
        frontier = nxt
    return len(seen)


def word_matrix(gens, word):
    n = gens[0].shape[0]
    M = np.eye(n)
    for s in word:
        M = M @ gens[s]
    return M


def same_element(gens, w1, w2) -> bool:
    """The geometric representation is faithful, so equal matrices = equal elements."""
    return np.allclose(word_matrix(gens, w1), word_matrix(gens, w2), atol=1e-7)


# -- exact crystallographic groups ------------------------------------------------

_CARTAN = {2: (0, 0), 3: (-1, -1), 4: (-1, -2), 6: (-1, -3)}


def integer_generators(orders):
    """Integral reflection matrices (columns are images of simple roots)."""
    n = len(orders)
    A = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            A[i][j], A[j][i] = _CARTAN[orders[i][j]]
    gens = []
    for s in range(n):
        M = [[int(r == c) for c in range(n)] for r in range(n)]
        for t in range(n):
            M[s][t] -= A[s][t]
        gens.append(tuple(map(tuple, M)))
    return gens


def _mul(a, b):
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n))


def integer_group(gens, subset=None):
    """All elements of the subgroup generated by ``gens[i]`` for i in ``subset``."""
    n = len(gens)
    idx = range(n) if subset is None else subset
    ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for s in idx:
                h = _mul(g, gens[s])
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return seen


def brute_force_basic_construction(orders, chamber):
    """U(W, K) for finite W as the quotient of W x K.

    (g, x) ~ (h, x) iff g^-1 h lies in W_{S(x)}, i.e. g W_{S(x)} = h W_{S(x)};
    each vertex class is labelled by that coset.
    """
    from davis_hierarchy.simplicial import SimplicialComplex

    gens = integer_generators(orders)
    group = integer_group(gens)
    parabolics = {}
    for x in chamber.complex.vertices:
        T = tuple(sorted(chamber.S(x)))
        if T not in parabolics:
            parabolics[T] = integer_group(gens, T)

    def cls(g, x):
        T = tuple(sorted(chamber.S(x)))
        return (frozenset(_mul(g, h) for h in parabolics[T]), x)

    facets = [tuple(cls(g, x) for x in f) for g in group for f in chamber.complex.facets]
    return SimplicialComplex(facets), len(group)
