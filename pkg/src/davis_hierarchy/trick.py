"""The reflection group trick for a compact manifold with flag boundary.

Given M with boundary triangulated by a flag complex L, take the
right-angled group W_L (one generator per vertex of L) and build U(W_L, M).
The chamber is the barycentric subdivision b(M), whose vertices are the
simplices of M; the mirror of a boundary vertex v is its closed star in
b(L).
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations

from .coxeter import CoxeterSystem, right_angled
from .davis import (
    ChamberComplex,
    basic_construction,
    local_arrangement_check,
    walls_in_ball,
)
from .errors import NotClosedBoundary, NotFlag
from .hierarchy import ACYCLIC_CAVEAT, check_tidy, family_from_orbits, run_hierarchy
from .nerve import MirroredChamber, build_nerve, make_mirrored
from .quotients import (
    FiniteQuotient,
    panel_orbit_key,
    trivial_intersection_check,
    trivial_quotient,
)
from .simplicial import (
    SimplicialComplex,
    barycentric_subdivision,
    find_isomorphism,
    is_homology_sphere,
    label_name,
)


@dataclass(frozen=True, eq=False)
class MirroredManifold:
    manifold: SimplicialComplex
    boundary: SimplicialComplex
    system: CoxeterSystem
    chamber: MirroredChamber
    generators: tuple  # vertex of L for each generator index


def _closed_pseudomanifold(L: SimplicialComplex, d: int) -> bool:
    if not L.facets or not L.is_pure() or L.dimension != d:
        return False
    counts = Counter(r for f in L.facets for r in combinations(f, d))
    return all(c == 2 for c in counts.values())


def prepare_mirrored_manifold(M: SimplicialComplex, boundary: SimplicialComplex) -> MirroredManifold:
    d = M.dimension
    faces = {frozenset(f) for f in M.simplex_set()}
    if any(frozenset(f) not in faces for f in boundary.facets if f):
        raise NotClosedBoundary("boundary is not a subcomplex of M")
    if not _closed_pseudomanifold(boundary, d - 1):
        raise NotClosedBoundary(f"boundary is not a closed {d - 1}-pseudomanifold")
    if {frozenset(f) for f in M.boundary().simplex_set()} != {frozenset(f) for f in boundary.simplex_set()}:
        raise NotClosedBoundary("boundary differs from the boundary of M")
    missing = boundary.missing_faces()
    if missing:
        raise NotFlag(f"boundary is not flag; e.g. {list(missing[0])} spans no simplex")

    gens = boundary.vertices
    names = [label_name(v) for v in gens]
    edges = [(label_name(a), label_name(b)) for f in boundary.faces().get(1, []) for a, b in [f]]
    W = right_angled(names, edges)
    index = {v: i for i, v in enumerate(gens)}
    bM = barycentric_subdivision(M)
    in_boundary = {frozenset(f) for f in boundary.simplex_set()}
    mirror_sets = {
        x: frozenset(index[v] for v in x) if frozenset(x) in in_boundary else frozenset()
        for x in bM.vertices
    }
    chamber = make_mirrored(bM, mirror_sets, W.rank, W.names)
    return MirroredManifold(M, boundary, W, chamber, tuple(gens))


@dataclass
class WallPropertyCertificate:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_json(self):
        return {"passed": self.passed, **self.detail}


@dataclass
class TrickOutput:
    mirrored: MirroredManifold
    complex: ChamberComplex
    quotient: FiniteQuotient
    nerve_matches: bool
    links_ok: bool
    link_failures: list
    certificates: list
    trace: object

    @property
    def passed(self) -> bool:
        return (self.nerve_matches and self.links_ok and all(c.passed for c in self.certificates)
                and self.trace.passed)

    def to_json(self):
        W = self.complex.system
        return {
            "passed": self.passed,
            "generators": list(W.names),
            "chambers": len(self.complex.chambers),
            "quotient": self.quotient.to_json(),
            "nerve_equals_boundary": self.nerve_matches,
            "interior_links_spheres": self.links_ok,
            "link_failures": self.link_failures,
            "wall_properties": {c.name: c.to_json() for c in self.certificates},
            "hierarchy": self.trace.to_json(),
            "terminal_pieces": "copies of the chamber b(M)",
            "caveats": [ACYCLIC_CAVEAT, "the group acting on M is trivial"],
        }


def _interior_links(U: ChamberComplex, n: int) -> list:
    R = U.realization
    failures = []
    for lab in U.interior_vertices():
        if not is_homology_sphere(R.complex.link((lab,)), n - 1).passed:
            failures.append(repr(lab))
    return failures


def run_trick(MM: MirroredManifold, r: int, quotient: FiniteQuotient | None = None) -> TrickOutput:
    W = MM.system
    n = MM.manifold.dimension
    Q = quotient or trivial_quotient(W)
    N = build_nerve(W)
    nerve_matches = find_isomorphism(N.complex, MM.boundary.relabel(lambda v: W.index(label_name(v)))) is not None

    U = basic_construction(W, MM.chamber, r)
    walls = walls_in_ball(U)
    certs = []

    bad = []
    for wall in walls:
        K = wall.carrier(U)
        codim_one = K.is_pure() and K.dimension == n - 1
        if not codim_one or not all(c.homology(reduced=True).is_acyclic for c in K.components()):
            bad.append(W.word_str(wall.reflection))
    certs.append(WallPropertyCertificate(
        "walls_codim_one_acyclic", not bad, {"walls": len(walls), "failures": bad}))

    ti = trivial_intersection_check(U, Q, walls=walls)
    certs.append(WallPropertyCertificate(
        "orbits_disjoint_unions", ti.passed, ti.to_json(W)))

    family = family_from_orbits(ti.orbits, W)
    tidy = check_tidy(U, family)
    certs.append(WallPropertyCertificate(
        "orbit_intersections_acyclic", tidy.intersections_acyclic,
        {"intersections_checked": tidy.intersections_checked}))

    keys = {panel_orbit_key(Q, p) for w in walls for p in w.panels}
    image = _group_elements(Q)
    detail = {"panel_orbit_types": len(keys), "quotient_order": len(image) if image else None}
    ok = image is None or len(keys) <= W.rank * len(image)
    certs.append(WallPropertyCertificate("finite_panel_types", ok, detail))

    local = local_arrangement_check(U, walls)
    noncommuting = []
    for lab in U.interior_vertices():
        T = tuple(sorted(U.chamber.S(lab[1])))
        for a, b in combinations(T, 2):
            if W.m(a, b) != 2:
                noncommuting.append(repr(lab))
    certs.append(WallPropertyCertificate(
        "local_right_angled", local.passed and not noncommuting and tidy.local_arrangement,
        {"vertices_checked": local.checked, "failures": local.failures + noncommuting}))

    link_failures = _interior_links(U, n)
    trace = run_hierarchy(U, family, quotient=Q)
    return TrickOutput(MM, U, Q, nerve_matches, not link_failures, link_failures, certs, trace)


def _group_elements(Q: FiniteQuotient, cap: int = 100_000):
    """The finite image phi(W), or None if it exceeds ``cap``."""
    seen = {Q.identity}
    frontier = [Q.identity]
    while frontier:
        g = frontier.pop()
        for s in Q.images:
            h = Q.mul(g, s)
            if h not in seen:
                seen.add(h)
                if len(seen) > cap:
                    return None
                frontier.append(h)
    return seen
