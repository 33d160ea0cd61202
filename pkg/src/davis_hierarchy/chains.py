"""Exact integer linear algebra for chain complexes.

Sparse matrices are ``dict[row, dict[col, int]]``.  Everything here uses
Python integers; ranks over the rationals are read off the integral Smith
normal form.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .config import max_cells
from .errors import ResourceLimit


def smith_invariants(matrix: dict, nrows: int | None = None, ncols: int | None = None) -> list[int]:
    """Nonzero invariant factors d1 | d2 | ... of an integer matrix.

    Unit pivots are eliminated sparsely first; whatever is left (no entry of
    absolute value 1) goes through a dense Smith reduction.
    """
    rows = {i: dict(r) for i, r in matrix.items() if r}
    for r in rows.values():
        for j in [j for j, v in r.items() if v == 0]:
            del r[j]
    rows = {i: r for i, r in rows.items() if r}
    cols: dict[int, set] = {}
    for i, r in rows.items():
        for j in r:
            cols.setdefault(j, set()).add(i)

    invariants = []
    pending = sorted(rows, key=lambda i: len(rows[i]))
    progress = True
    while progress and pending:
        progress = False
        deferred = []
        for i in pending:
            r = rows.get(i)
            if r is None:
                continue
            best = None
            for j, v in r.items():
                if v == 1 or v == -1:
                    c = len(cols[j])
                    if best is None or c < best[0]:
                        best = (c, j)
                        if c == 1:
                            break
            if best is None:
                deferred.append(i)
                continue
            j = best[1]
            pv = r[j]
            for k in list(cols[j]):
                if k == i:
                    continue
                rk = rows[k]
                f = rk[j] * pv
                for c, v in r.items():
                    nv = rk.get(c, 0) - f * v
                    if nv:
                        if c not in rk:
                            cols[c].add(k)
                        rk[c] = nv
                    else:
                        if c in rk:
                            del rk[c]
                            cols[c].discard(k)
                if not rk:
                    del rows[k]
            for c in r:
                cols[c].discard(i)
            del cols[j]
            del rows[i]
            invariants.append(1)
            progress = True
        pending = [i for i in deferred if i in rows]
        pending.sort(key=lambda i: len(rows[i]))

    if rows:
        invariants.extend(_dense_smith(rows))
    return _normalize_invariants(invariants)


def _dense_smith(rows: dict) -> list[int]:
    row_ids = sorted(rows)
    col_ids = sorted({j for r in rows.values() for j in r})
    cidx = {j: k for k, j in enumerate(col_ids)}
    A = [[0] * len(col_ids) for _ in row_ids]
    for a, i in enumerate(row_ids):
        for j, v in rows[i].items():
            A[a][cidx[j]] = v
    m, n = len(A), len(col_ids)
    diag = []
    t = 0
    while t < min(m, n):
        # smallest nonzero entry in the remaining block
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                v = A[i][j]
                if v and (piv is None or abs(v) < piv[0]):
                    piv = (abs(v), i, j)
        if piv is None:
            break
        _, pi, pj = piv
        A[t], A[pi] = A[pi], A[t]
        for row in A:
            row[t], row[pj] = row[pj], row[t]
        while True:
            p = A[t][t]
            changed = False
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    if q:
                        A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                    if A[i][t]:
                        A[t], A[i] = A[i], A[t]
                        changed = True
                        break
            if changed:
                continue
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    if q:
                        for row in A:
                            row[j] -= q * row[t]
                    if A[t][j]:
                        for row in A:
                            row[t], row[j] = row[j], row[t]
                        changed = True
                        break
            if changed:
                continue
            # pivot must divide the rest of the block
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            A[t] = [a + b for a, b in zip(A[t], A[bad])]
        diag.append(abs(A[t][t]))
        t += 1
    return diag


def _normalize_invariants(values: list[int]) -> list[int]:
    """Rewrite a diagonal as a divisibility chain (same abelian group)."""
    vals = sorted(abs(v) for v in values if v)
    if all(vals[k] % vals[k - 1] == 0 for k in range(1, len(vals))):
        return vals
    changed = True
    while changed:
        changed = False
        for a in range(len(vals)):
            for b in range(a + 1, len(vals)):
                x, y = vals[a], vals[b]
                if y % x:
                    g = gcd(x, y)
                    vals[a], vals[b] = g, x * y // g
                    changed = True
        vals.sort()
    return vals


def rank(matrix: dict) -> int:
    """Rank over the rationals (exact)."""
    return len(smith_invariants(matrix))


@dataclass
class ChainComplex:
    """Free chain complex: ``dims[k]`` generators in degree k, ``boundary[k]``
    the sparse matrix of d_k : C_k -> C_{k-1} (rows index C_{k-1})."""

    dims: dict[int, int]
    boundary: dict[int, dict]

    def degrees(self):
        return sorted(k for k, d in self.dims.items() if d)

    def _rank(self, k):
        cache = self.__dict__.setdefault("_rank_cache", {})
        if k not in cache:
            d = self.boundary.get(k)
            cache[k] = rank(d) if d else 0
        return cache[k]

    def betti(self) -> dict[int, int]:
        out = {}
        for k in self.degrees():
            b = self.dims[k] - self._rank(k) - self._rank(k + 1)
            if b:
                out[k] = b
        return out

    def euler(self) -> int:
        return sum((-1) ** k * d for k, d in self.dims.items())


def direct_sum(*complexes: ChainComplex):
    """Direct sum plus per-summand offsets (dict degree -> offset) for each summand."""
    dims: dict[int, int] = {}
    offsets = []
    for C in complexes:
        off = {}
        for k, d in C.dims.items():
            off[k] = dims.get(k, 0)
            dims[k] = dims.get(k, 0) + d
        offsets.append(off)
    boundary: dict[int, dict] = {}
    for C, off in zip(complexes, offsets):
        for k, mat in C.boundary.items():
            target = boundary.setdefault(k, {})
            ro, co = off.get(k - 1, 0), off.get(k, 0)
            for i, row in mat.items():
                dest = target.setdefault(i + ro, {})
                for j, v in row.items():
                    dest[j + co] = v
    return ChainComplex(dims, boundary), offsets


def mapping_cone(source: ChainComplex, target: ChainComplex, chain_map: dict) -> ChainComplex:
    """Cone(f)_k = source_{k-1} (+) target_k, d(x, y) = (-dx, f(x) + dy).

    ``chain_map[k]`` is the sparse matrix of f_k (rows index target_k).
    In each degree the source block comes first.
    """
    degrees = set(source.dims) | {k + 1 for k in source.dims} | set(target.dims)
    dims = {k: source.dims.get(k - 1, 0) + target.dims.get(k, 0) for k in degrees}
    boundary = {}
    for k in degrees:
        # columns: degree-k cone generators; rows: degree k-1
        s_off_row = source.dims.get(k - 2, 0)  # target block offset in degree k-1
        s_off_col = source.dims.get(k - 1, 0)  # target block offset in degree k
        mat: dict[int, dict] = {}
        ds = source.boundary.get(k - 1, {})
        for i, row in ds.items():
            dest = mat.setdefault(i, {})
            for j, v in row.items():
                dest[j] = -v
        fk = chain_map.get(k - 1, {})
        for i, row in fk.items():
            dest = mat.setdefault(i + s_off_row, {})
            for j, v in row.items():
                dest[j] = dest.get(j, 0) + v
        dt = target.boundary.get(k, {})
        for i, row in dt.items():
            dest = mat.setdefault(i + s_off_row, {})
            for j, v in row.items():
                dest[j + s_off_col] = dest.get(j + s_off_col, 0) + v
        mat = {i: {j: v for j, v in r.items() if v} for i, r in mat.items()}
        mat = {i: r for i, r in mat.items() if r}
        if mat:
            boundary[k] = mat
    return ChainComplex(dims, boundary)


def induced_map_ranks(source: ChainComplex, target: ChainComplex, chain_map: dict) -> dict[int, int]:
    """Ranks over Q of f_* : H_k(source) -> H_k(target) for every degree.

    Read off the long exact sequence of the mapping cone:
    dim H_k(cone) = (b_k(target) - r_k) + (b_{k-1}(source) - r_{k-1}).
    """
    bs, bt = source.betti(), target.betti()
    bc = mapping_cone(source, target, chain_map).betti()
    degrees = sorted(set(source.dims) | set(target.dims))
    if not degrees:
        return {}
    ranks = {}
    prev = 0
    for k in range(min(degrees), max(degrees) + 1):
        r = bt.get(k, 0) + bs.get(k - 1, 0) - prev - bc.get(k, 0)
        ranks[k] = r
        prev = r
    return ranks


def check_size(count: int, what: str = "cells"):
    cap = max_cells()
    if count > cap:
        raise ResourceLimit(what, count, cap)
