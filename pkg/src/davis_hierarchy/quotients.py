"""Finite quotients of Coxeter groups, torsion-freeness of their kernels, and
the trivial intersection property for kernel-orbits of walls."""
from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .coxeter import INF, CoxeterSystem, Element, parabolic_elements
from .davis import ChamberComplex, Wall, walls_in_ball
from .errors import ParseError, RelationViolation, UnsupportedRecipe
from .nerve import Nerve

# Cartan-matrix entries (a_st, a_ts) with a_st * a_ts = 4 cos^2(pi / m)
_CARTAN = {2: (0, 0), 3: (-1, -1), 4: (-1, -2), 6: (-1, -3), INF: (-2, -2)}


@dataclass(frozen=True, eq=False)
class FiniteQuotient:
    """A homomorphism phi from W onto a finite group of matrices mod p or of
    permutations.  The kernel Gamma is implicit."""

    system: CoxeterSystem
    kind: str  # "matrix" | "permutation"
    images: tuple
    recipe: str
    modulus: int | None = None
    degree: int = 0

    @property
    def identity(self):
        if self.kind == "matrix":
            n = self.degree
            return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
        return tuple(range(self.degree))

    def mul(self, a, b):
        if self.kind == "matrix":
            prod = (np.array(a, dtype=np.int64) @ np.array(b, dtype=np.int64)) % self.modulus
            return tuple(tuple(int(x) for x in row) for row in prod)
        return tuple(a[i] for i in b)

    def phi(self, w) -> tuple:
        word = w.normal_form if isinstance(w, Element) else tuple(w)
        cache = self.__dict__.setdefault("_phi_cache", {(): self.identity})
        if word in cache:
            return cache[word]
        k = len(word) - 1
        while word[:k] not in cache:
            k -= 1
        value = cache[word[:k]]
        for j in range(k, len(word)):
            value = self.mul(value, self.images[word[j]])
            cache[word[: j + 1]] = value
        return value

    def in_kernel(self, w) -> bool:
        return self.phi(w) == self.identity

    def to_json(self):
        out = {"recipe": self.recipe, "kind": self.kind, "degree": self.degree}
        if self.modulus is not None:
            out["modulus"] = self.modulus
        return out


def _power(Q: FiniteQuotient, a, k: int):
    out = Q.identity
    for _ in range(k):
        out = Q.mul(out, a)
    return out


def check_relations(Q: FiniteQuotient):
    W = Q.system
    for s in range(W.rank):
        if Q.mul(Q.images[s], Q.images[s]) != Q.identity:
            raise RelationViolation(f"image of {W.names[s]} does not square to 1")
    for s in range(W.rank):
        for t in range(s + 1, W.rank):
            m = W.m(s, t)
            if m == INF:
                continue
            st = Q.mul(Q.images[s], Q.images[t])
            if _power(Q, st, m) != Q.identity:
                raise RelationViolation(f"({W.names[s]} {W.names[t]})^{m} != 1")


def _is_prime(p: int) -> bool:
    return p > 1 and all(p % d for d in range(2, int(p**0.5) + 1))


def reflection_matrices(W: CoxeterSystem, p: int) -> tuple:
    """Generator images of the integral reflection representation, mod p.

    s acts by v -> v - <a_s, v> e_s with <a_s, e_t> the Cartan entry a_st.
    """
    n = W.rank
    A = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            m = W.m(i, j)
            if m not in _CARTAN:
                raise UnsupportedRecipe(
                    f"reflection-mod-p needs every m_st in {{2,3,4,6,inf}}; m({W.names[i]},{W.names[j]}) = {m}"
                )
            A[i][j], A[j][i] = _CARTAN[m]
    images = []
    for s in range(n):
        M = [[int(r == c) for c in range(n)] for r in range(n)]
        for t in range(n):
            M[s][t] -= A[s][t]  # column t is the image of e_t
        images.append(tuple(tuple(x % p for x in row) for row in M))
    return tuple(images)


def parse_recipe(recipe: str):
    m = re.fullmatch(r"(?:reflection-)?mod-(\d+)", recipe.strip())
    if not m:
        raise UnsupportedRecipe(f"unknown quotient recipe {recipe!r}")
    return int(m.group(1))


def finite_quotient(W: CoxeterSystem, recipe) -> FiniteQuotient:
    """Build and validate a finite quotient.

    ``recipe`` is ``"reflection-mod-p"`` / ``"mod-p"`` (p an odd prime), or a
    mapping from generator names to permutations (tuples of images of
    ``0..d-1``).
    """
    if isinstance(recipe, str):
        p = parse_recipe(recipe)
        if p % 2 == 0 or not _is_prime(p):
            raise UnsupportedRecipe(f"modulus must be an odd prime, got {p}")
        if not (W.is_right_angled or W.is_even or all(
            W.m(i, j) in _CARTAN for i in range(W.rank) for j in range(W.rank) if i != j
        )):
            raise UnsupportedRecipe("reflection-mod-p requires a right-angled or even system")
        Q = FiniteQuotient(W, "matrix", reflection_matrices(W, p), f"reflection-mod-{p}", p, W.rank)
    else:
        images = []
        degree = None
        for s in range(W.rank):
            perm = tuple(recipe[W.names[s]])
            if degree is None:
                degree = len(perm)
            if len(perm) != degree or sorted(perm) != list(range(degree)):
                raise RelationViolation(f"image of {W.names[s]} is not a permutation of 0..{degree - 1}")
            images.append(perm)
        Q = FiniteQuotient(W, "permutation", tuple(images), "user-permutations", None, degree or 0)
    check_relations(Q)
    return Q


def trivial_quotient(W: CoxeterSystem) -> FiniteQuotient:
    """phi = 1, so Gamma = W."""
    return finite_quotient(W, {name: (0,) for name in W.names})


def parse_quotient_file(text: str, W: CoxeterSystem) -> dict:
    """Lines ``s: (1 2)(3 4)``; points are arbitrary tokens, ``()`` is the identity."""
    cycles_by_gen = {}
    points = set()
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ParseError(f"expected 's: <cycles>', got {line!r}")
        name, rest = (x.strip() for x in line.split(":", 1))
        if name not in W.names:
            raise ParseError(f"unknown generator {name!r}")
        if name in cycles_by_gen:
            raise ParseError(f"generator {name!r} listed twice")
        if not re.fullmatch(r"(\(\s*[^()]*\))*", rest.replace(" ", "")) and rest:
            raise ParseError(f"bad cycle notation {rest!r}")
        cycles = [c.split() for c in re.findall(r"\(([^()]*)\)", rest)]
        for c in cycles:
            if len(set(c)) != len(c):
                raise ParseError(f"repeated point in cycle {c}")
            points.update(c)
        cycles_by_gen[name] = cycles
    missing = [s for s in W.names if s not in cycles_by_gen]
    if missing:
        raise ParseError(f"no image given for {missing}")
    try:
        ordered = sorted(points, key=int)
    except ValueError:
        ordered = sorted(points)
    pos = {x: i for i, x in enumerate(ordered)}
    d = max(len(ordered), 1)
    out = {}
    for name, cycles in cycles_by_gen.items():
        perm = list(range(d))
        seen = set()
        for c in cycles:
            if seen & set(c):
                raise ParseError(f"cycles of {name} are not disjoint")
            seen.update(c)
            for a, b in zip(c, c[1:] + c[:1]):
                perm[pos[a]] = pos[b]
        out[name] = tuple(perm)
    return out


# -- certificates --------------------------------------------------------------

@dataclass
class TorsionFreeCertificate:
    checked: list = field(default_factory=list)
    witnesses: list = field(default_factory=list)  # (T, kernel element)

    @property
    def passed(self) -> bool:
        return not self.witnesses

    def to_json(self, W: CoxeterSystem):
        return {
            "passed": self.passed,
            "maximal_spherical_subsets": [[W.names[i] for i in T] for T in self.checked],
            "witnesses": [
                {"subset": [W.names[i] for i in T], "kernel_element": W.word_str(w)}
                for T, w in self.witnesses
            ],
        }


def torsion_free_check(W: CoxeterSystem, N: Nerve, Q: FiniteQuotient) -> TorsionFreeCertificate:
    """Gamma = ker(phi) is torsion-free iff phi is injective on every maximal
    spherical parabolic (finite subgroups are conjugate into those)."""
    cert = TorsionFreeCertificate()
    for T in N.complex.facets:
        cert.checked.append(T)
        for v in parabolic_elements(W, T):
            if v.length and Q.in_kernel(v):
                cert.witnesses.append((T, v))
                break
    return cert


def panel_orbit_key(Q: FiniteQuotient, panel) -> tuple:
    """Two panels are Gamma-equivalent iff their keys agree."""
    a = Q.phi(panel.lower)
    b = Q.mul(a, Q.images[panel.gen])
    return (panel.gen, min(a, b), max(a, b))


def wall_orbits(U: ChamberComplex, Q: FiniteQuotient, walls=None) -> list[list[Wall]]:
    """Partition the walls of the ball into Gamma-orbits.

    Walls sharing a Gamma-equivalent panel are translates of each other;
    panel equivalence is decided exactly from phi.
    """
    walls = walls if walls is not None else walls_in_ball(U)
    parent = list(range(len(walls)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    first = {}
    for i, wall in enumerate(walls):
        for p in wall.panels:
            key = panel_orbit_key(Q, p)
            if key in first:
                a, b = find(first[key]), find(i)
                if a != b:
                    parent[max(a, b)] = min(a, b)
            else:
                first[key] = i
    groups: dict = {}
    for i, wall in enumerate(walls):
        groups.setdefault(find(i), []).append(wall)
    return [groups[k] for k in sorted(groups)]


@dataclass
class TrivialIntersectionCertificate:
    orbits: list
    witnesses: list = field(default_factory=list)  # (reflection, reflection, vertex)
    torsion_free: bool | None = None

    @property
    def passed(self) -> bool:
        return not self.witnesses

    def to_json(self, W: CoxeterSystem):
        return {
            "passed": self.passed,
            "orbit_count": len(self.orbits),
            "orbits": [[W.word_str(w.reflection) for w in orbit] for orbit in self.orbits],
            "witnesses": [
                {"wall": W.word_str(a), "translate": W.word_str(b), "shared_vertex": repr(v)}
                for a, b, v in self.witnesses
            ],
            "kernel_torsion_free": self.torsion_free,
            "caveats": ["scoped to walls meeting the truncated ball"],
        }


def trivial_intersection_check(U: ChamberComplex, Q: FiniteQuotient, N: Nerve | None = None,
                               walls=None) -> TrivialIntersectionCertificate:
    """Each Gamma-translate of a wall equals it or misses it.

    Distinct walls in one Gamma-orbit must have disjoint carriers in the
    realization; a shared vertex is a crossing witness.
    """
    orbits = wall_orbits(U, Q, walls)
    R = U.realization
    cert = TrivialIntersectionCertificate(orbits)
    if N is not None:
        cert.torsion_free = torsion_free_check(U.system, N, Q).passed
    for orbit in orbits:
        owner = {}
        for wall in orbit:
            verts = set()
            for p in wall.panels:
                i = U.index[p.lower]
                verts.update(R.label[i, x] for x in U.chamber.mirror_vertices(p.gen))
            for v in sorted(verts):
                if v in owner and owner[v] != wall.reflection:
                    cert.witnesses.append((owner[v], wall.reflection, v))
                    break
                owner[v] = wall.reflection
    return cert
