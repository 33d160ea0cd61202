"""Chamber systems: finite balls of the basic construction U(W, X) and of the
Davis complex, their realizations, and their walls.

A chamber complex is a set of chambers (group elements) together with the
set of *active* panels along which neighbouring chambers are glued.  Cutting
is deactivating panels; the realization is recomputed from what is active.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property

from .coxeter import CoxeterSystem, Element, cayley_ball, parabolic_elements
from .errors import PanelNotActive
from .nerve import MirroredChamber, Nerve
from .simplicial import (
    SimplicialComplex,
    barycentric_subdivision,
    find_isomorphism,
    is_homology_sphere,
    is_isomorphism,
)


@dataclass(frozen=True, order=True)
class Panel:
    """Adjacency of chambers ``lower`` and ``upper = lower * s`` across mirror s.

    ``lower`` is always the shorter of the two, so it lies on the side of
    the panel's wall that contains the identity chamber.
    """

    lower: Element
    gen: int
    upper: Element

    def label(self, W: CoxeterSystem) -> str:
        return f"{W.word_str(self.lower)}|{W.names[self.gen]}"


def make_panel(W: CoxeterSystem, u: Element, s: int) -> Panel:
    us = W.multiply_generator(u, s)
    return Panel(u, s, us) if us.length > u.length else Panel(us, s, u)


@dataclass(frozen=True)
class Realization:
    complex: SimplicialComplex
    label: dict  # (chamber index, x) -> realized vertex label
    members: dict  # realized vertex label -> list of (chamber index, x)


@dataclass(frozen=True, eq=False)
class ChamberComplex:
    system: CoxeterSystem
    chamber: MirroredChamber
    chambers: tuple[Element, ...]
    adhesions: frozenset  # active panels
    boundary_panels: frozenset = frozenset()  # panels leaving the truncated ball
    cut_panels: frozenset = frozenset()  # interior panels that have been deactivated
    radius: int | None = None

    @cached_property
    def index(self) -> dict:
        return {w: i for i, w in enumerate(self.chambers)}

    @property
    def interior_panels(self) -> frozenset:
        return self.adhesions | self.cut_panels

    def deactivate(self, panels) -> "ChamberComplex":
        panels = frozenset(panels)
        missing = panels - self.adhesions
        if missing:
            raise PanelNotActive(f"{len(missing)} panel(s) not active, e.g. {min(missing)}")
        return replace(
            self,
            adhesions=self.adhesions - panels,
            cut_panels=self.cut_panels | panels,
        )

    def restrict(self, chambers) -> "ChamberComplex":
        """Sub-chamber-complex on a set of chambers (panels leaving it are dropped)."""
        keep = frozenset(chambers)
        inside = lambda p: p.lower in keep and p.upper in keep
        return ChamberComplex(
            self.system,
            self.chamber,
            tuple(w for w in self.chambers if w in keep),
            frozenset(p for p in self.adhesions if inside(p)),
            frozenset(p for p in self.boundary_panels if p.lower in keep or p.upper in keep),
            frozenset(p for p in self.cut_panels if inside(p)),
            self.radius,
        )

    # -- realization --------------------------------------------------------
    @cached_property
    def realization(self) -> Realization:
        X = self.chamber
        xs = X.complex.vertices
        xidx = {x: k for k, x in enumerate(xs)}
        nx_ = len(xs)
        parent = list(range(len(self.chambers) * nx_))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        idx = self.index
        for p in self.adhesions:
            i, j = idx[p.lower], idx[p.upper]
            for x in X.mirror_vertices(p.gen):
                a, b = find(i * nx_ + xidx[x]), find(j * nx_ + xidx[x])
                if a != b:
                    # keep the smaller chamber index as root
                    if a < b:
                        parent[b] = a
                    else:
                        parent[a] = b
        label = {}
        members: dict = {}
        for i, w in enumerate(self.chambers):
            for k, x in enumerate(xs):
                root = find(i * nx_ + k)
                lab = (self.chambers[root // nx_].normal_form, x)
                label[i, x] = lab
                members.setdefault(lab, []).append((i, x))
        facets = [
            tuple(label[i, x] for x in f)
            for i in range(len(self.chambers))
            for f in X.complex.facets
        ]
        return Realization(SimplicialComplex(facets), label, members)

    def chamber_components(self) -> list[frozenset]:
        """Chamber sets of the connected components (via active panels)."""
        parent = {w: w for w in self.chambers}

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for p in self.adhesions:
            a, b = find(p.lower), find(p.upper)
            if a != b:
                parent[max(a, b)] = min(a, b)
        groups: dict = {}
        for w in self.chambers:
            groups.setdefault(find(w), []).append(w)
        return sorted((frozenset(g) for g in groups.values()), key=min)

    def component_complexes(self) -> list[tuple[frozenset, SimplicialComplex]]:
        R = self.realization
        out = []
        for comp in self.chamber_components():
            facets = [
                tuple(R.label[self.index[w], x] for x in f)
                for w in sorted(comp)
                for f in self.chamber.complex.facets
            ]
            out.append((comp, SimplicialComplex(facets)))
        return out

    def chamber_image(self, w: Element) -> SimplicialComplex:
        R = self.realization
        i = self.index[w]
        return SimplicialComplex([tuple(R.label[i, x] for x in f) for f in self.chamber.complex.facets])

    # -- carriers -----------------------------------------------------------
    def mirror_copy(self, w: Element, s: int) -> list[tuple]:
        """Facets of the image of mirror s of chamber w in the realization."""
        R = self.realization
        i = self.index[w]
        return [tuple(R.label[i, x] for x in f) for f in self.chamber.mirror_facets(s)]

    def carrier(self, panels) -> SimplicialComplex:
        """Union of the mirror copies of the given panels, on both sides."""
        facets = []
        for p in panels:
            facets.extend(self.mirror_copy(p.lower, p.gen))
            if p.upper in self.index:
                facets.extend(self.mirror_copy(p.upper, p.gen))
        return SimplicialComplex(facets)

    def side_copy(self, panels, side: str) -> SimplicialComplex:
        """Mirror copies on the ``lower`` or ``upper`` side of each panel."""
        facets = []
        for p in panels:
            facets.extend(self.mirror_copy(getattr(p, side), p.gen))
        return SimplicialComplex(facets)

    # -- truncation scope ------------------------------------------------------
    def _coset_complete(self, w: Element, T: frozenset) -> bool:
        cache = self.__dict__.setdefault("_parabolic_cache", {})
        key = tuple(sorted(T))
        if key not in cache:
            cache[key] = parabolic_elements(self.system, key)
        members = self.index
        return all(self.system.multiply(w, v) in members for v in cache[key])

    def is_interior_vertex(self, lab) -> bool:
        """Whole star of the vertex lies inside the truncated ball."""
        word, x = lab
        return self._coset_complete(Element(word), self.chamber.S(x))

    def interior_vertices(self) -> list:
        cache = self.__dict__.get("_interior")
        if cache is None:
            cache = [lab for lab in self.realization.complex.vertices if self.is_interior_vertex(lab)]
            object.__setattr__(self, "_interior", cache)
        return cache

    def vertex_chambers(self, lab) -> list[Element]:
        return sorted({self.chambers[i] for i, _ in self.realization.members[lab]})


def basic_construction(W: CoxeterSystem, X: MirroredChamber, r: int) -> ChamberComplex:
    """Chambers = Cayley ball of radius r, all interior panels glued; panels
    from length-r chambers to length r+1 are recorded as truncation boundary."""
    if X.rank != W.rank:
        raise ValueError("mirrors of X must be indexed by the generators of W")
    ball = cayley_ball(W, r)
    adhesions = frozenset(Panel(u, s, v) for u, v, s in ball.edges)
    boundary = []
    for w in ball.elements:
        if w.length == r:
            desc = W.right_descents(w)
            for s in range(W.rank):
                if s not in desc:
                    boundary.append(Panel(w, s, W.multiply_generator(w, s)))
    return ChamberComplex(W, X, ball.elements, adhesions, frozenset(boundary), frozenset(), r)


def davis_ball(W: CoxeterSystem, r: int, nerve: Nerve | None = None) -> ChamberComplex:
    from .nerve import build_chamber, build_nerve

    N = nerve or build_nerve(W)
    return basic_construction(W, build_chamber(N), r)


# -- walls -------------------------------------------------------------------

@dataclass(frozen=True)
class Wall:
    reflection: Element
    panels: tuple[Panel, ...]

    def carrier(self, U: ChamberComplex) -> SimplicialComplex:
        return U.carrier(self.panels)

    def to_json(self, W: CoxeterSystem):
        return {
            "reflection": W.word_str(self.reflection),
            "panels": [p.label(W) for p in self.panels],
        }


def walls_in_ball(U: ChamberComplex) -> list[Wall]:
    """Interior panels grouped by the reflection u s u^-1 fixing them."""
    W = U.system
    groups: dict = {}
    for p in U.interior_panels:
        groups.setdefault(W.reflection(p.lower, p.gen), []).append(p)
    return [Wall(r, tuple(sorted(ps))) for r, ps in sorted(groups.items())]


def wall_of_panel(U: ChamberComplex, walls=None) -> dict:
    walls = walls if walls is not None else walls_in_ball(U)
    return {p: w for w in walls for p in w.panels}


# -- certificates -----------------------------------------------------------

@dataclass
class LinkCertificate:
    checked: int = 0
    excluded_boundary: int = 0
    failures: list = field(default_factory=list)
    sphere_links_checked: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self):
        return {
            "passed": self.passed,
            "cellulation_vertices_checked": self.checked,
            "all_vertex_links_checked": self.sphere_links_checked,
            "excluded_truncation_boundary": self.excluded_boundary,
            "failures": [str(f) for f in self.failures],
            "caveats": ["truncation-boundary vertices excluded"],
        }


def vertex_link_check(U: ChamberComplex, N: Nerve, n: int | None = None) -> LinkCertificate:
    """Links at interior vertices of the realization.

    Vertices of the Davis cellulation are the chamber cone points; their
    simplicial link is the barycentric subdivision of L, which is how the
    link "is" L.  If ``n`` is given and L is a homology (n-1)-sphere, every
    interior vertex link is also required to be a homology (n-1)-sphere.
    """
    cert = LinkCertificate()
    R = U.realization
    bL = barycentric_subdivision(N.complex)
    check_spheres = n is not None and is_homology_sphere(N.complex, n - 1).passed
    for lab in R.complex.vertices:
        if not U.is_interior_vertex(lab):
            cert.excluded_boundary += 1
            continue
        link = R.complex.link((lab,))
        if not U.chamber.S(lab[1]) and lab[1] == ():
            cert.checked += 1
            if find_isomorphism(link, bL) is None:
                cert.failures.append(f"link at cone point of {lab[0]} is not b(L)")
        if check_spheres:
            cert.sphere_links_checked += 1
            if not is_homology_sphere(link, n - 1).passed:
                cert.failures.append(f"link at {lab} is not a homology S^{n - 1}")
    return cert


@dataclass
class SeparationCertificate:
    chambers: int
    components: int
    all_single_chambers: bool
    all_isomorphic_to_chamber: bool
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.components == self.chambers and self.all_single_chambers and self.all_isomorphic_to_chamber

    def to_json(self):
        return {
            "passed": self.passed,
            "chambers": self.chambers,
            "components": self.components,
            "failures": [str(f) for f in self.failures],
        }


def separation_check(U: ChamberComplex, walls=None) -> SeparationCertificate:
    """Deactivate every wall panel; each component must be one copy of the chamber."""
    walls = walls if walls is not None else walls_in_ball(U)
    V = U.deactivate([p for w in walls for p in w.panels])
    comps = V.component_complexes()
    single = all(len(c) == 1 for c, _ in comps)
    X = U.chamber.complex
    failures = []
    for comp, K in comps:
        if len(comp) != 1:
            failures.append(f"component with {len(comp)} chambers")
            continue
        (w,) = comp
        i = V.index[w]
        mapping = {V.realization.label[i, x]: x for x in X.vertices}
        if not is_isomorphism(K, X, mapping):
            failures.append(f"chamber {w.normal_form} is not a copy of K")
    return SeparationCertificate(len(U.chambers), len(comps), single, not failures, failures)


@dataclass
class HalfspaceCertificate:
    walls: int
    positive_connected: int
    negative_connected: int
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self):
        return {
            "passed": self.passed,
            "walls": self.walls,
            "positive_sides_connected": self.positive_connected,
            "negative_sides_connected": self.negative_connected,
            "failures": [str(f) for f in self.failures],
            "caveats": ["sides are intersected with the truncated ball"],
        }


def halfspace_check(U: ChamberComplex, walls=None) -> HalfspaceCertificate:
    """Graph-level convexity shadow: removing a wall's panels leaves its two
    sides (intersected with the ball) each connected in the chamber graph."""
    W = U.system
    walls = walls if walls is not None else walls_in_ball(U)
    edges = {}
    for p in U.interior_panels:
        edges.setdefault(p.lower, []).append((p.upper, p))
        edges.setdefault(p.upper, []).append((p.lower, p))
    cert = HalfspaceCertificate(len(walls), 0, 0)
    for wall in walls:
        cut = set(wall.panels)
        r = wall.reflection
        plus = [w for w in U.chambers if W.multiply(r, w).length > w.length]
        minus = [w for w in U.chambers if W.multiply(r, w).length < w.length]
        for side, name in ((plus, "positive"), (minus, "negative")):
            members = set(side)
            if not members:
                continue
            start = min(members)
            seen, stack = {start}, [start]
            while stack:
                a = stack.pop()
                for b, p in edges.get(a, ()):
                    if p not in cut and b in members and b not in seen:
                        seen.add(b)
                        stack.append(b)
            if len(seen) == len(members):
                if name == "positive":
                    cert.positive_connected += 1
                else:
                    cert.negative_connected += 1
            else:
                cert.failures.append(f"{name} side of {W.word_str(r)} splits in the ball")
    return cert


@dataclass
class LocalArrangementCertificate:
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self):
        return {"passed": self.passed, "vertices_checked": self.checked,
                "failures": [str(f) for f in self.failures]}


def reflections_of(W: CoxeterSystem, T) -> frozenset:
    """All reflections of the finite parabolic W_T (conjugates of T by W_T)."""
    T = W.subset(T)
    out = set()
    for v in parabolic_elements(W, T):
        for t in T:
            out.add(W.reflection(v, t))
    return frozenset(out)


def local_arrangement_check(U: ChamberComplex, walls=None) -> LocalArrangementCertificate:
    """At each interior vertex x, the walls through x are exactly the
    reflections of the local finite group u W_{S(x)} u^-1."""
    W = U.system
    walls = walls if walls is not None else walls_in_ball(U)
    by_panel = wall_of_panel(U, walls)
    cert = LocalArrangementCertificate()
    refl_cache: dict = {}
    R = U.realization
    for lab in U.interior_vertices():
        word, x = lab
        T = tuple(sorted(U.chamber.S(x)))
        if not T:
            continue
        cert.checked += 1
        u = Element(word)
        if T not in refl_cache:
            refl_cache[T] = reflections_of(W, T)
        expected = {W.conjugate(u, t) for t in refl_cache[T]}
        chambers = {U.chambers[i] for i, _ in R.members[lab]}
        through = set()
        for c in chambers:
            for s in T:
                p = make_panel(W, c, s)
                if p in by_panel:
                    through.add(by_panel[p].reflection)
        if through != expected:
            cert.failures.append(f"vertex {lab}: {len(through)} walls vs {len(expected)} reflections")
    return cert
