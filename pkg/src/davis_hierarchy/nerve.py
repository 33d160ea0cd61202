"""The nerve of a Coxeter system and the Davis chamber with its mirrors."""
from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType

from .config import DEFAULT_MAX_SUBSETS
from .coxeter import CoxeterSystem, SphericalSubset, is_spherical, spherical_order
from .errors import ResourceLimit
from .simplicial import (
    DiskCertificate,
    SimplicialComplex,
    SphereCertificate,
    barycentric_subdivision,
    is_homology_disk,
    is_homology_sphere,
)


@dataclass(frozen=True)
class Nerve:
    system: CoxeterSystem
    complex: SimplicialComplex  # vertices are generator indices
    spherical_subsets: tuple[SphericalSubset, ...]  # includes the empty set

    def order(self, T) -> int:
        return self._orders[tuple(sorted(T))]

    @property
    def _orders(self):
        cached = self.__dict__.get("_order_map")
        if cached is None:
            cached = {t.subset: t.order for t in self.spherical_subsets}
            object.__setattr__(self, "_order_map", cached)
        return cached

    def is_spherical(self, T) -> bool:
        return tuple(sorted(T)) in self._orders

    def maximal_subsets(self) -> list[tuple[int, ...]]:
        return [f for f in self.complex.facets]

    def named_complex(self) -> SimplicialComplex:
        return self.complex.relabel(lambda i: self.system.names[i])


def build_nerve(W: CoxeterSystem, max_subsets: int = DEFAULT_MAX_SUBSETS) -> Nerve:
    """Spherical subsets by level-wise pruning: T is tried only if every
    (|T|-1)-subset of T is spherical."""
    found = [SphericalSubset((), 1)]
    level = [()]
    while level:
        current = set(level)
        nxt = []
        for T in level:
            start = T[-1] + 1 if T else 0
            for s in range(start, W.rank):
                U = T + (s,)
                if any(U[:k] + U[k + 1:] not in current for k in range(len(U) - 1)):
                    continue
                if is_spherical(W, U):
                    nxt.append(U)
        for U in nxt:
            found.append(SphericalSubset(U, spherical_order(W, U)))
        if len(found) > max_subsets:
            raise ResourceLimit("spherical_subsets", len(found), max_subsets)
        level = nxt
    simplices = [t.subset for t in found if t.subset]
    complex_ = SimplicialComplex(simplices)
    found.sort(key=lambda t: (len(t.subset), t.subset))
    return Nerve(W, complex_, tuple(found))


@dataclass
class ManifoldCertificate:
    dimension: int
    sphere: SphereCertificate
    disk: DiskCertificate

    @property
    def kind(self) -> str:
        if self.sphere.passed:
            return "manifold"
        if self.disk.passed:
            return "manifold with boundary"
        return "not certified"

    @property
    def passed(self) -> bool:
        return self.sphere.passed or self.disk.passed

    def to_json(self):
        return {
            "n": self.dimension,
            "kind": self.kind,
            "nerve_sphere": self.sphere.to_json(),
            "nerve_disk": self.disk.to_json(),
        }


def manifold_check(N: Nerve, n: int) -> ManifoldCertificate:
    """Is Sigma(W, S) an n-manifold (nerve a homology (n-1)-sphere) or an
    n-manifold with boundary (nerve a homology (n-1)-disk)?"""
    L = N.complex
    return ManifoldCertificate(n, is_homology_sphere(L, n - 1), is_homology_disk(L, n - 1))


@dataclass(frozen=True, eq=False)
class MirroredChamber:
    """A simplicial complex with mirrors indexed by generators.

    ``mirror_sets[x]`` is S(x), the set of generator indices whose mirror
    contains the vertex x.  Each mirror is the full subcomplex on its vertices.
    """

    complex: SimplicialComplex
    mirror_sets: MappingProxyType
    rank: int
    names: tuple = field(default=())

    def S(self, x) -> frozenset:
        return self.mirror_sets[x]

    def mirror(self, s: int) -> SimplicialComplex:
        return self.complex.induced([x for x in self.complex.vertices if s in self.mirror_sets[x]])

    def mirror_vertices(self, s: int) -> tuple:
        cache = self.__dict__.setdefault("_mv_cache", {})
        if s not in cache:
            cache[s] = tuple(x for x in self.complex.vertices if s in self.mirror_sets[x])
        return cache[s]

    def mirror_facets(self, s: int) -> tuple:
        cache = self.__dict__.setdefault("_mf_cache", {})
        if s not in cache:
            cache[s] = tuple(f for f in self.mirror(s).facets if f)
        return cache[s]

    def mirror_simplices(self, s: int) -> tuple:
        """Faces of the chamber lying in mirror s (canonical tuples)."""
        cache = self.__dict__.setdefault("_ms_cache", {})
        if s not in cache:
            cache[s] = tuple(
                f
                for fs in self.complex.faces().values()
                for f in fs
                if all(s in self.mirror_sets[x] for x in f)
            )
        return cache[s]


def make_mirrored(complex_: SimplicialComplex, mirror_sets, rank: int, names=()) -> MirroredChamber:
    full = {x: frozenset(mirror_sets.get(x, ())) for x in complex_.vertices}
    return MirroredChamber(complex_, MappingProxyType(full), rank, tuple(names))


def build_chamber(N: Nerve) -> MirroredChamber:
    """K = cone on the barycentric subdivision of the nerve.

    Vertices of K are the spherical subsets themselves (as sorted index
    tuples); the cone point is the empty tuple.  S(T) = T.
    """
    bL = barycentric_subdivision(N.complex)
    facets = [f + ((),) for f in bL.facets if f] or [((),)]
    K = SimplicialComplex(facets)
    return make_mirrored(K, {x: x for x in K.vertices}, N.system.rank, N.system.names)
