"""Finite abstract simplicial complexes with exact integral homology."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations

import networkx as nx

from .chains import ChainComplex, check_size, smith_invariants
from .errors import LabelCollision, ParseError, SimplexNotFound


def sorted_labels(labels):
    labels = list(labels)
    try:
        return sorted(labels)
    except TypeError:
        return sorted(labels, key=repr)


class SimplicialComplex:
    """A finite simplicial complex given by its facets.

    ``SimplicialComplex([])`` is the void complex; ``SimplicialComplex([()])``
    is the complex whose only simplex is the empty one (the unit for joins).
    Extra ``vertices`` are added as isolated points.
    """

    def __init__(self, facets, vertices=()):
        sets = {frozenset(f) for f in facets}
        for v in vertices:
            sets.add(frozenset([v]))
        if len(sets) > 1:
            sets.discard(frozenset())
        maximal = _maximal_sets(sets)
        verts = set()
        for f in maximal:
            verts.update(f)
        self.vertices = tuple(sorted_labels(verts))
        self._order = {v: i for i, v in enumerate(self.vertices)}
        key = self._order.__getitem__
        self.facets = tuple(
            sorted(
                (tuple(sorted(f, key=key)) for f in maximal),
                key=lambda t: (len(t), [key(v) for v in t]),
            )
        )
        self._faces = None

    # -- basics ---------------------------------------------------------
    @property
    def dimension(self) -> int:
        if not self.facets:
            return -2  # void
        return max(len(f) for f in self.facets) - 1

    def canonical(self, simplex) -> tuple:
        return tuple(sorted(simplex, key=self._order.__getitem__))

    def faces(self) -> dict[int, list[tuple]]:
        """All non-empty faces by dimension, in canonical vertex order."""
        if self._faces is None:
            found: dict[int, set] = {}
            for f in self.facets:
                for k in range(1, len(f) + 1):
                    bucket = found.setdefault(k - 1, set())
                    bucket.update(combinations(f, k))
            key = self._order.__getitem__
            self._faces = {
                d: sorted(s, key=lambda t: [key(v) for v in t]) for d, s in sorted(found.items())
            }
        return self._faces

    def simplex_set(self) -> frozenset:
        cached = getattr(self, "_simplex_set", None)
        if cached is None:
            cached = frozenset(t for fs in self.faces().values() for t in fs)
            self._simplex_set = cached
        return cached

    def __contains__(self, simplex) -> bool:
        simplex = tuple(simplex)
        if not simplex:
            return bool(self.facets)
        if any(v not in self._order for v in simplex):
            return False
        return self.canonical(simplex) in self.simplex_set()

    def f_vector(self) -> tuple[int, ...]:
        faces = self.faces()
        return tuple(len(faces[d]) for d in range(self.dimension + 1)) if self.dimension >= 0 else ()

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * len(fs) for d, fs in self.faces().items())

    def is_pure(self) -> bool:
        return len({len(f) for f in self.facets}) <= 1

    def __eq__(self, other):
        return isinstance(other, SimplicialComplex) and self.facets == other.facets

    def __hash__(self):
        return hash(self.facets)

    def __repr__(self):
        return f"SimplicialComplex(dim={self.dimension}, f={self.f_vector()})"

    # -- constructions ----------------------------------------------------
    def relabel(self, mapping) -> "SimplicialComplex":
        get = mapping.__getitem__ if hasattr(mapping, "__getitem__") else mapping
        return SimplicialComplex([[get(v) for v in f] for f in self.facets])

    def induced(self, vertices) -> "SimplicialComplex":
        """Full subcomplex on ``vertices``."""
        keep = set(vertices)
        return SimplicialComplex([[v for v in f if v in keep] for f in self.facets])

    def star(self, simplex) -> "SimplicialComplex":
        s = set(simplex)
        return SimplicialComplex([f for f in self.facets if s.issubset(f)])

    def components(self) -> list["SimplicialComplex"]:
        uf = nx.utils.UnionFind(self.vertices)
        for f in self.facets:
            if len(f) > 1:
                uf.union(*f)
        groups: dict = {}
        for f in self.facets:
            if f:
                groups.setdefault(uf[f[0]], []).append(f)
        comps = [SimplicialComplex(fs) for fs in groups.values()]
        comps.sort(key=lambda c: repr(c.vertices[0]))
        return comps

    def boundary(self) -> "SimplicialComplex":
        """Closure of the codimension-one faces lying in exactly one facet."""
        d = self.dimension
        if d <= 0:
            return SimplicialComplex([])
        counts: dict[tuple, int] = {}
        for f in self.facets:
            if len(f) != d + 1:
                continue
            for ridge in combinations(f, d):
                counts[ridge] = counts.get(ridge, 0) + 1
        return SimplicialComplex([r for r, c in counts.items() if c == 1])

    # -- homology ------------------------------------------------------------
    def chain_complex(self, reduced: bool = False) -> tuple[ChainComplex, dict]:
        """Simplicial chain complex plus ``index[d][simplex]`` lookup tables."""
        faces = self.faces()
        check_size(sum(len(v) for v in faces.values()), "simplices")
        index = {d: {s: i for i, s in enumerate(fs)} for d, fs in faces.items()}
        dims = {d: len(fs) for d, fs in faces.items()}
        boundary = {}
        for d, fs in faces.items():
            if d == 0:
                continue
            lower = index[d - 1]
            mat: dict[int, dict] = {}
            for j, s in enumerate(fs):
                for i in range(len(s)):
                    row = lower[s[:i] + s[i + 1:]]
                    mat.setdefault(row, {})[j] = -1 if i % 2 else 1
            boundary[d] = mat
        if reduced and self.facets:
            dims[-1] = 1
            index[-1] = {(): 0}
            if faces:
                boundary[0] = {0: {j: 1 for j in range(dims[0])}}
        return ChainComplex(dims, boundary), index

    def homology(self, reduced: bool = False) -> "HomologyProfile":
        C, _ = self.chain_complex(reduced)
        invariants = {k: smith_invariants(m) for k, m in C.boundary.items()}
        betti, torsion = {}, {}
        for k in C.degrees():
            rk = len(invariants.get(k, ()))
            rk1 = invariants.get(k + 1, [])
            b = C.dims[k] - rk - len(rk1)
            if b:
                betti[k] = b
            tors = tuple(x for x in rk1 if x > 1)
            if tors:
                torsion[k] = tors
        return HomologyProfile(betti, torsion, reduced)

    def betti_numbers(self, reduced: bool = False) -> dict[int, int]:
        return self.chain_complex(reduced)[0].betti()

    # -- local structure ------------------------------------------------------
    def link(self, simplex) -> "SimplicialComplex":
        s = set(simplex)
        if s and simplex not in self:
            raise SimplexNotFound(f"{tuple(simplex)!r} is not a simplex")
        if not s:
            return self
        return SimplicialComplex([[v for v in f if v not in s] for f in self.facets if s.issubset(f)])

    def graph(self) -> nx.Graph:
        G = nx.Graph()
        G.add_nodes_from(self.vertices)
        for f in self.facets:
            G.add_edges_from(combinations(f, 2))
        return G

    def is_flag(self) -> bool:
        return not self.missing_faces()

    def missing_faces(self) -> list[tuple]:
        """Cliques of the 1-skeleton that do not span a simplex."""
        simplices = self.simplex_set()
        missing = []
        for clique in nx.find_cliques(self.graph()):
            c = self.canonical(clique)
            if c not in simplices:
                missing.append(c)
        return sorted(missing, key=repr)


def _maximal_sets(sets):
    ordered = sorted(sets, key=len, reverse=True)
    kept = []
    by_vertex: dict = {}
    for f in ordered:
        if f:
            v = next(iter(f))
            candidates = by_vertex.get(v, ())
            if any(f <= g for g in candidates):
                continue
        elif kept:
            continue
        kept.append(f)
        for v in f:
            by_vertex.setdefault(v, []).append(f)
    return kept


@dataclass(frozen=True)
class HomologyProfile:
    """Integral homology: free ranks and torsion coefficients per degree."""

    betti: dict
    torsion: dict
    reduced: bool = False

    def rank(self, k: int) -> int:
        return self.betti.get(k, 0)

    @property
    def is_acyclic(self) -> bool:
        """True when reduced homology vanishes (only meaningful if ``reduced``)."""
        return not self.betti and not self.torsion

    def group(self, k: int) -> str:
        parts = []
        b = self.betti.get(k, 0)
        if b:
            parts.append("Z" if b == 1 else f"Z^{b}")
        parts.extend(f"Z/{t}" for t in self.torsion.get(k, ()))
        return " + ".join(parts) if parts else "0"

    def to_json(self):
        return {
            "reduced": self.reduced,
            "betti": {str(k): v for k, v in sorted(self.betti.items())},
            "torsion": {str(k): list(v) for k, v in sorted(self.torsion.items())},
        }


def join(K1: SimplicialComplex, K2: SimplicialComplex) -> SimplicialComplex:
    common = set(K1.vertices) & set(K2.vertices)
    if common:
        raise LabelCollision(f"shared vertex labels: {sorted_labels(common)}")
    return SimplicialComplex([f + g for f in K1.facets for g in K2.facets])


def barycentric_subdivision(K: SimplicialComplex) -> SimplicialComplex:
    """Vertices are the simplices of K (as canonical tuples); facets are maximal chains."""
    chains = set()
    for f in K.facets:
        if not f:
            continue
        for perm in permutations(f):
            chains.add(frozenset(K.canonical(perm[:k]) for k in range(1, len(perm) + 1)))
    check_size(len(chains), "subdivision facets")
    if not chains:
        return SimplicialComplex([()] if K.facets else [])
    return SimplicialComplex(chains)


def cone(K: SimplicialComplex, apex) -> SimplicialComplex:
    if apex in K._order:
        raise LabelCollision(f"apex {apex!r} already a vertex")
    return SimplicialComplex([f + (apex,) for f in K.facets] or [(apex,)])


def simplex(vertices) -> SimplicialComplex:
    return SimplicialComplex([tuple(vertices)])


def cycle(n: int, prefix: str = "v") -> SimplicialComplex:
    names = [f"{prefix}{i}" for i in range(n)]
    return SimplicialComplex([(names[i], names[(i + 1) % n]) for i in range(n)])


def sphere_boundary(n: int, prefix: str = "v") -> SimplicialComplex:
    """Boundary of the n-simplex (a triangulated (n-1)-sphere)."""
    names = [f"{prefix}{i}" for i in range(n + 1)]
    return SimplicialComplex(combinations(names, n))


def cross_polytope_boundary(n: int, prefix: str = "x") -> SimplicialComplex:
    """Boundary of the n-dimensional cross-polytope: the join of n copies of S^0."""
    K = SimplicialComplex([()])
    for i in range(n):
        K = join(K, SimplicialComplex([(f"{prefix}{i}+",), (f"{prefix}{i}-",)]))
    return K


# -- isomorphism ----------------------------------------------------------------

def _incidence_graph(K: SimplicialComplex) -> nx.Graph:
    G = nx.Graph()
    for v in K.vertices:
        G.add_node(("v", v), kind="v")
    for i, f in enumerate(K.facets):
        G.add_node(("f", i), kind=f"f{len(f)}")
        for v in f:
            G.add_edge(("v", v), ("f", i))
    return G


def find_isomorphism(K1: SimplicialComplex, K2: SimplicialComplex):
    """A vertex bijection carrying K1 onto K2, or None."""
    if K1.f_vector() != K2.f_vector() or len(K1.facets) != len(K2.facets):
        return None
    G1, G2 = _incidence_graph(K1), _incidence_graph(K2)
    matcher = nx.algorithms.isomorphism.GraphMatcher(
        G1, G2, node_match=lambda a, b: a["kind"] == b["kind"]
    )
    for mapping in matcher.isomorphisms_iter():
        return {a[1]: b[1] for a, b in mapping.items() if a[0] == "v"}
    return None


def is_isomorphic(K1: SimplicialComplex, K2: SimplicialComplex) -> bool:
    return find_isomorphism(K1, K2) is not None


def is_isomorphism(K1: SimplicialComplex, K2: SimplicialComplex, mapping) -> bool:
    """Check that ``mapping`` is a simplicial isomorphism K1 -> K2."""
    if set(mapping) != set(K1.vertices):
        return False
    if len(set(mapping.values())) != len(mapping) or set(mapping.values()) != set(K2.vertices):
        return False
    image = {frozenset(mapping[v] for v in f) for f in K1.facets}
    return image == {frozenset(f) for f in K2.facets}


# -- sphere certificates -----------------------------------------------------------

@dataclass
class SphereCertificate:
    dimension: int
    pseudomanifold: bool
    homology_ok: bool
    links_ok: bool
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.pseudomanifold and self.homology_ok and self.links_ok

    @property
    def verdict(self) -> str:
        if not self.passed:
            return "not a homology sphere"
        if self.dimension <= 2:
            return "sphere"
        if self.dimension == 3:
            return "homology 3-sphere; sphere status unresolved"
        return "homology sphere"

    def to_json(self):
        return {
            "dimension": self.dimension,
            "closed_pseudomanifold": self.pseudomanifold,
            "homology_of_sphere": self.homology_ok,
            "links_are_homology_spheres": self.links_ok,
            "passed": self.passed,
            "verdict": self.verdict,
            "failures": [str(f) for f in self.failures],
        }


def _ridge_counts(K: SimplicialComplex, d: int):
    counts: dict[tuple, int] = {}
    for f in K.facets:
        for ridge in combinations(f, d):
            counts[ridge] = counts.get(ridge, 0) + 1
    return counts


def _strongly_connected(K: SimplicialComplex, d: int) -> bool:
    if len(K.facets) <= 1:
        return True
    G = nx.Graph()
    G.add_nodes_from(range(len(K.facets)))
    by_ridge: dict = {}
    for i, f in enumerate(K.facets):
        for ridge in combinations(f, d):
            by_ridge.setdefault(ridge, []).append(i)
    for ids in by_ridge.values():
        for a, b in zip(ids, ids[1:]):
            G.add_edge(a, b)
    return nx.is_connected(G)


def _has_sphere_homology(K: SimplicialComplex, d: int) -> bool:
    if d == -1:
        return K.facets == ((),)
    if not K.facets or K.facets == ((),):
        return False
    H = K.homology(reduced=True)
    return H.betti == {d: 1} and not H.torsion


def _is_acyclic(K: SimplicialComplex) -> bool:
    if not K.facets or K.facets == ((),):
        return False
    return K.homology(reduced=True).is_acyclic


def is_homology_sphere(K: SimplicialComplex, d: int) -> SphereCertificate:
    failures = []
    pure = K.is_pure() and K.dimension == d
    pseudo = pure
    if pure and d >= 0:
        counts = _ridge_counts(K, d)
        bad = [r for r, c in counts.items() if c != 2]
        if bad:
            pseudo = False
            failures.append(f"ridges not in exactly two facets: {bad[:5]}")
        elif not _strongly_connected(K, d):
            pseudo = False
            failures.append("facet adjacency graph is disconnected")
    elif not pure:
        failures.append(f"not pure of dimension {d} (dimension {K.dimension})")
    homology_ok = _has_sphere_homology(K, d)
    if not homology_ok:
        failures.append(f"homology differs from S^{d}")
    links_ok = True
    if pure:
        for k, faces in K.faces().items():
            if k >= d:
                continue
            for s in faces:
                if not _has_sphere_homology(K.link(s), d - 1 - k):
                    links_ok = False
                    failures.append(f"link of {s!r} is not a homology S^{d - 1 - k}")
    else:
        links_ok = False
    return SphereCertificate(d, pseudo, homology_ok, links_ok, failures)


@dataclass
class DiskCertificate:
    dimension: int
    pseudomanifold_with_boundary: bool
    acyclic: bool
    boundary_sphere: bool
    links_ok: bool
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.pseudomanifold_with_boundary and self.acyclic and self.boundary_sphere and self.links_ok

    @property
    def verdict(self) -> str:
        if not self.passed:
            return "not a homology disk"
        return "disk" if self.dimension <= 2 else "homology disk"

    def to_json(self):
        return {
            "dimension": self.dimension,
            "pseudomanifold_with_boundary": self.pseudomanifold_with_boundary,
            "acyclic": self.acyclic,
            "boundary_is_homology_sphere": self.boundary_sphere,
            "links_ok": self.links_ok,
            "passed": self.passed,
            "verdict": self.verdict,
            "failures": [str(f) for f in self.failures],
        }


def is_homology_disk(K: SimplicialComplex, d: int) -> DiskCertificate:
    failures = []
    pure = K.is_pure() and K.dimension == d
    pseudo = pure
    bd_faces = set()
    if pure and d >= 1:
        counts = _ridge_counts(K, d)
        if any(c > 2 for c in counts.values()):
            pseudo = False
            failures.append("some ridge lies in more than two facets")
        elif not _strongly_connected(K, d):
            pseudo = False
            failures.append("facet adjacency graph is disconnected")
    elif pure and d == 0:
        pseudo = len(K.facets) == 1
    else:
        pseudo = False
        failures.append(f"not pure of dimension {d}")
    acyclic = _is_acyclic(K)
    if not acyclic:
        failures.append("not acyclic")
    if d == 0:
        bd = SimplicialComplex([()])
        boundary_ok = True
    else:
        bd = K.boundary()
        boundary_ok = bool(bd.facets) and is_homology_sphere(bd, d - 1).passed
        if not boundary_ok:
            failures.append(f"boundary is not a homology S^{d - 1}")
    bd_faces = bd.simplex_set() if bd.facets and bd.facets != ((),) else frozenset()
    links_ok = pure
    if pure:
        for k, faces in K.faces().items():
            if k >= d:
                continue
            for s in faces:
                L = K.link(s)
                ok = _is_acyclic(L) if s in bd_faces else _has_sphere_homology(L, d - 1 - k)
                if not ok:
                    links_ok = False
                    failures.append(f"bad link at {s!r}")
    return DiskCertificate(d, pseudo, acyclic, boundary_ok, links_ok, failures)


# -- file format -----------------------------------------------------------------

def parse_complex(text: str) -> SimplicialComplex:
    """Parse ``complex <n>`` / vertex names / one facet per line."""
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise ParseError("empty complex file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "complex":
        raise ParseError(f"expected 'complex <vertex-count>', got {lines[0]!r}")
    try:
        n = int(head[1])
    except ValueError:
        raise ParseError(f"bad vertex count {head[1]!r}") from None
    if len(lines) < 2:
        raise ParseError("missing vertex-name line")
    names = lines[1].split()
    if len(names) != n:
        raise ParseError(f"expected {n} vertex names, got {len(names)}")
    if len(set(names)) != n:
        raise ParseError("duplicate vertex names")
    known = set(names)
    facets = []
    for line in lines[2:]:
        f = line.split()
        unknown = [v for v in f if v not in known]
        if unknown:
            raise ParseError(f"facet uses undeclared vertices {unknown}")
        if len(set(f)) != len(f):
            raise ParseError(f"repeated vertex in facet {line!r}")
        facets.append(f)
    return SimplicialComplex(facets, vertices=names)


def label_name(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, tuple):
        return "(" + ",".join(label_name(x) for x in v) + ")"
    return str(v)


def format_complex(K: SimplicialComplex, name=label_name) -> str:
    names = {v: name(v) for v in K.vertices}
    if len(set(names.values())) != len(names):
        raise LabelCollision("vertex names are not unique after formatting")
    if any(" " in x or not x for x in names.values()):
        raise ParseError("vertex names must be non-empty and space-free")
    lines = [f"complex {len(K.vertices)}", " ".join(names[v] for v in K.vertices)]
    for f in K.facets:
        if f:
            lines.append(" ".join(names[v] for v in f))
    return "\n".join(lines) + "\n"
