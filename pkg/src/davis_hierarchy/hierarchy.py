"""Tidy families of walls, cutting open, hierarchies and their Mayer-Vietoris
certificates.

A hierarchy run cuts a chamber complex along an ordered family of wall
orbits.  Every cut is audited by the rational Mayer-Vietoris sequence

    H(F+ u F-) -> H(F) + H(N) -> H(M) -> ...

where N is the cut-open complex, F the carrier of the cut, and F+ / F- its
two copies in N.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .chains import direct_sum, induced_map_ranks
from .config import DEFAULT_MAX_SUBSETS
from .coxeter import Element
from .davis import ChamberComplex, make_panel, walls_in_ball
from .errors import NotAComponent, ResourceLimit, TidyViolation
from .simplicial import SimplicialComplex, find_isomorphism, is_isomorphism

ACYCLIC_CAVEAT = "contractible is certified as integrally acyclic; simple connectivity is not decided"
SCOPE_CAVEAT = "claims are scoped to the truncated ball; truncation panels are never cut"


@dataclass(frozen=True)
class WallFamily:
    """Ordered family E_0, ..., E_r; each member is a frozenset of panels."""

    members: tuple
    labels: tuple = ()

    def __len__(self):
        return len(self.members)

    def panel_index(self) -> dict:
        return {p: i for i, E in enumerate(self.members) for p in E}

    def reordered(self, order) -> "WallFamily":
        order = list(order)
        if sorted(order) != list(range(len(self.members))):
            raise ValueError(f"order must be a permutation of 0..{len(self.members) - 1}")
        labels = tuple(self.labels[i] for i in order) if self.labels else ()
        return WallFamily(tuple(self.members[i] for i in order), labels)


def family_from_orbits(orbits, W=None) -> WallFamily:
    members = tuple(frozenset(p for wall in orbit for p in wall.panels) for orbit in orbits)
    labels = ()
    if W is not None:
        labels = tuple(",".join(W.word_str(w.reflection) for w in orbit) for orbit in orbits)
    return WallFamily(members, labels)


def wall_family(U: ChamberComplex, Q=None) -> WallFamily:
    """Gamma-orbits of the walls of U as a family (Gamma = W if Q is None)."""
    from .quotients import trivial_quotient, wall_orbits

    Q = Q or trivial_quotient(U.system)
    return family_from_orbits(wall_orbits(U, Q), U.system)


# -- tidiness ------------------------------------------------------------------

@dataclass
class TidyCertificate:
    components_acyclic: bool = True
    intersections_acyclic: bool = True
    boundary_neat: bool = True
    local_arrangement: bool = True
    intersections_checked: int = 0
    vertices_checked: int = 0
    witnesses: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (self.components_acyclic and self.intersections_acyclic
                and self.boundary_neat and self.local_arrangement)

    def to_json(self):
        return {
            "passed": self.passed,
            "components_acyclic": self.components_acyclic,
            "intersections_acyclic": self.intersections_acyclic,
            "boundary_neat": self.boundary_neat,
            "local_arrangement": self.local_arrangement,
            "intersections_checked": self.intersections_checked,
            "vertices_checked": self.vertices_checked,
            "witnesses": [str(w) for w in self.witnesses],
            "caveats": [ACYCLIC_CAVEAT, SCOPE_CAVEAT],
        }


def _acyclic_components(K: SimplicialComplex) -> bool:
    return all(c.homology(reduced=True).is_acyclic for c in K.components())


def check_tidy(M: ChamberComplex, E: WallFamily, max_subsets: int = DEFAULT_MAX_SUBSETS) -> TidyCertificate:
    cert = TidyCertificate()
    W = M.system
    R = M.realization
    for i, Ei in enumerate(E.members):
        inactive = Ei - M.adhesions
        if inactive:
            raise TidyViolation(f"E_{i} has {len(inactive)} inactive panel(s)", certificate=cert)

    for comp, K in M.component_complexes():
        if not K.homology(reduced=True).is_acyclic:
            cert.components_acyclic = False
            cert.witnesses.append(f"component at {min(comp).normal_form} is not acyclic")

    carriers = [M.carrier(Ei) for Ei in E.members]
    simplices = [K.simplex_set() for K in carriers]

    # intersections, grown only while non-empty
    level = [((i,), simplices[i]) for i in range(len(simplices)) if simplices[i]]
    seen = 0
    while level:
        nxt = []
        for idx, common in level:
            seen += 1
            if seen > max_subsets:
                raise ResourceLimit("family_intersections", seen, max_subsets)
            if not _acyclic_components(SimplicialComplex(common)):
                cert.intersections_acyclic = False
                cert.witnesses.append(f"intersection of E{list(idx)} has a non-acyclic component")
            for j in range(idx[-1] + 1, len(simplices)):
                both = common & simplices[j]
                if both:
                    nxt.append((idx + (j,), both))
        level = nxt
    cert.intersections_checked = seen

    dM = R.complex.boundary().simplex_set()
    for i, K in enumerate(carriers):
        on_boundary = simplices[i] & dM
        own = K.boundary().simplex_set()
        if on_boundary != own:
            cert.boundary_neat = False
            extra = sorted(on_boundary ^ own, key=repr)[:1]
            cert.witnesses.append(f"E_{i} meets the boundary away from its own boundary at {extra}")

    owner = E.panel_index()
    for lab in M.interior_vertices():
        T = tuple(sorted(M.chamber.S(lab[1])))
        if not T:
            continue
        cert.vertices_checked += 1
        local: dict = {}
        for i, _ in R.members[lab]:
            c = M.chambers[i]
            for s in T:
                p = make_panel(W, c, s)
                if p in M.adhesions:
                    local.setdefault(W.reflection(p.lower, p.gen), set()).add(p)
        per_member: dict = {}
        for refl, panels in local.items():
            tags = {owner.get(p) for p in panels}
            if tags == {None}:
                continue
            if len(tags) > 1:
                cert.local_arrangement = False
                cert.witnesses.append(f"vertex {lab}: hyperplane {W.word_str(refl)} split between members")
                continue
            per_member.setdefault(tags.pop(), []).append(refl)
        for i, refls in per_member.items():
            if len(refls) > 1:
                cert.local_arrangement = False
                names = sorted(W.word_str(r) for r in refls)
                cert.witnesses.append(f"vertex {lab}: E_{i} crosses itself along {names}")
    return cert


# -- cutting ---------------------------------------------------------------------

@dataclass
class ComponentCensus:
    components: int
    chamber_counts: list
    acyclic: list

    @property
    def all_acyclic(self) -> bool:
        return all(self.acyclic)

    def to_json(self):
        return {
            "components": self.components,
            "chamber_counts": self.chamber_counts,
            "all_acyclic": self.all_acyclic,
        }


def census(M: ChamberComplex) -> ComponentCensus:
    comps = M.component_complexes()
    return ComponentCensus(
        len(comps),
        [len(c) for c, _ in comps],
        [K.homology(reduced=True).is_acyclic for _, K in comps],
    )


def cut_open(M: ChamberComplex, F) -> ChamberComplex:
    """Deactivate the panels of F.  Each panel leaves two boundary copies of
    its mirror behind, one per side."""
    return M.deactivate(F)


# -- Mayer-Vietoris ----------------------------------------------------------------

def _perm_sign(positions) -> int:
    sign = 1
    p = list(positions)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                sign = -sign
    return sign


def _add_simplicial_map(out, src_index, tgt_complex, tgt_index, f, scale=1, row_offset=None, col_offset=None):
    """Accumulate the chain map induced by the vertex map f (rows = target)."""
    for k, table in src_index.items():
        if k < 0:
            continue
        ro = row_offset.get(k, 0) if row_offset else 0
        co = col_offset.get(k, 0) if col_offset else 0
        mat = out.setdefault(k, {})
        for s, j in table.items():
            image = [f(v) for v in s]
            t = tgt_complex.canonical(image)
            sign = _perm_sign([t.index(v) for v in image])
            row = mat.setdefault(tgt_index[k][t] + ro, {})
            row[j + co] = row.get(j + co, 0) + scale * sign


def _compose(g: dict, f: dict) -> dict:
    out = {}
    for k, fk in f.items():
        gk = g.get(k, {})
        cols: dict = {}
        for i, row in fk.items():
            for j, v in row.items():
                cols.setdefault(j, {})[i] = v
        res: dict = {}
        for r, grow in gk.items():
            for j, fcol in cols.items():
                val = sum(gv * fcol[m] for m, gv in grow.items() if m in fcol)
                if val:
                    res.setdefault(r, {})[j] = val
        if res:
            out[k] = res
    return out


@dataclass
class MayerVietorisCertificate:
    degrees: list
    h_collar: dict  # H(F+ u F-)
    h_middle: dict  # H(F) + H(N)
    h_total: dict  # H(M)
    rank_alpha: dict
    rank_beta: dict
    chain_composite_zero: bool
    exact: bool
    chi_M: int
    chi_N: int
    chi_F: int

    @property
    def euler_ok(self) -> bool:
        return self.chi_M == self.chi_N - self.chi_F

    @property
    def passed(self) -> bool:
        return self.exact and self.euler_ok and self.chain_composite_zero

    def to_json(self):
        keyed = lambda d: {str(k): d.get(k, 0) for k in self.degrees}
        return {
            "passed": self.passed,
            "exact": self.exact,
            "euler_identity": self.euler_ok,
            "chi": {"M": self.chi_M, "N": self.chi_N, "F": self.chi_F},
            "ranks": {
                "H(F+ u F-)": keyed(self.h_collar),
                "H(F)+H(N)": keyed(self.h_middle),
                "H(M)": keyed(self.h_total),
                "alpha": keyed(self.rank_alpha),
                "beta": keyed(self.rank_beta),
            },
            "chain_level_beta_alpha_zero": self.chain_composite_zero,
        }


def mayer_vietoris(M: ChamberComplex, F, N: ChamberComplex) -> MayerVietorisCertificate:
    RM, RN = M.realization, N.realization
    q = {RN.label[key]: RM.label[key] for key in RN.label}
    Fm = M.carrier(F)
    plus = N.side_copy(F, "lower")
    minus = N.side_copy(F, "upper")
    collar = SimplicialComplex(
        [tuple((0, v) for v in f) for f in plus.facets] + [tuple((1, v) for v in f) for f in minus.facets]
    )

    CC, iC = collar.chain_complex()
    CA, iA = Fm.chain_complex()
    CB, iB = RN.complex.chain_complex()
    CM, iM = RM.complex.chain_complex()
    AB, (offA, offB) = direct_sum(CA, CB)

    alpha: dict = {}
    _add_simplicial_map(alpha, iC, Fm, iA, lambda v: q[v[1]], row_offset=offA)
    _add_simplicial_map(alpha, iC, RN.complex, iB, lambda v: v[1], scale=-1, row_offset=offB)
    beta: dict = {}
    _add_simplicial_map(beta, iA, RM.complex, iM, lambda v: v, col_offset=offA)
    _add_simplicial_map(beta, iB, RM.complex, iM, q.__getitem__, col_offset=offB)
    for mp in (alpha, beta):
        for k in list(mp):
            mp[k] = {i: {j: v for j, v in r.items() if v} for i, r in mp[k].items()}
            mp[k] = {i: r for i, r in mp[k].items() if r}

    composite_zero = not _compose(beta, alpha)
    ra = induced_map_ranks(CC, AB, alpha)
    rb = induced_map_ranks(AB, CM, beta)
    hC, hAB, hM = CC.betti(), AB.betti(), CM.betti()
    top = max([0] + [k for k in CM.dims] + [k for k in AB.dims]) + 1
    degrees = list(range(0, top + 1))
    exact = True
    for k in degrees:
        if hAB.get(k, 0) - rb.get(k, 0) != ra.get(k, 0):
            exact = False
        if hM.get(k, 0) - rb.get(k, 0) != hC.get(k - 1, 0) - ra.get(k - 1, 0):
            exact = False
    return MayerVietorisCertificate(
        degrees, hC, hAB, hM, ra, rb, composite_zero, exact,
        RM.complex.euler_characteristic(), RN.complex.euler_characteristic(), Fm.euler_characteristic(),
    )


# -- hierarchies ------------------------------------------------------------------

@dataclass
class HierarchyStep:
    index: int
    label: str
    panels: int
    census_before: ComponentCensus
    census_after: ComponentCensus
    carrier_homology: object
    mayer_vietoris: MayerVietorisCertificate
    residual_tidy: TidyCertificate | None

    @property
    def passed(self) -> bool:
        tidy_ok = self.residual_tidy is None or self.residual_tidy.passed
        return self.mayer_vietoris.passed and tidy_ok

    def to_json(self):
        return {
            "step": self.index,
            "member": self.label,
            "panels": self.panels,
            "before": self.census_before.to_json(),
            "after": self.census_after.to_json(),
            "F_homology": self.carrier_homology.to_json(),
            "mayer_vietoris": self.mayer_vietoris.to_json(),
            "residual_tidy": None if self.residual_tidy is None else self.residual_tidy.to_json(),
        }


@dataclass
class HierarchyTrace:
    family: WallFamily
    initial_tidy: TidyCertificate
    steps: list
    states: list  # M_0, ..., M_{m+1}
    terminal: ComponentCensus
    terminal_single_chambers: bool
    terminal_isomorphic: bool
    overridden: bool = False
    quotient: object = None
    stabilizer: list | None = None
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (self.initial_tidy.passed and all(s.passed for s in self.steps)
                and self.terminal_single_chambers and self.terminal_isomorphic)

    def to_json(self):
        W = self.states[0].system
        out = {
            "passed": self.passed,
            "initial_tidy": self.initial_tidy.to_json(),
            "steps": [s.to_json() for s in self.steps],
            "euler_ledger": [
                {"chi_M": s.mayer_vietoris.chi_M, "chi_N": s.mayer_vietoris.chi_N, "chi_F": s.mayer_vietoris.chi_F}
                for s in self.steps
            ],
            "terminal": self.terminal.to_json(),
            "terminal_single_chambers": self.terminal_single_chambers,
            "terminal_isomorphic": self.terminal_isomorphic,
            "override": self.overridden,
            "failures": self.failures,
            "caveats": [ACYCLIC_CAVEAT, SCOPE_CAVEAT],
        }
        if self.stabilizer is not None:
            out["stabilizer"] = [W.word_str(g) for g in self.stabilizer]
        return out


def run_hierarchy(M: ChamberComplex, E: WallFamily, order=None, override: bool = False,
                  end: SimplicialComplex | None = None, quotient=None) -> HierarchyTrace:
    """Cut M along E_0, E_1, ... in order.

    After each cut the residual family is re-checked for tidiness.  The
    terminal components must be single chambers isomorphic to the chamber
    (or, if ``end`` is given, isomorphic to ``end``).
    """
    if order is not None:
        E = E.reordered(order)
    tidy = check_tidy(M, E)
    if not tidy.passed and not override:
        raise TidyViolation("family is not tidy: " + "; ".join(tidy.witnesses[:3]), step=0, certificate=tidy)
    states = [M]
    steps = []
    current = M
    for i, F in enumerate(E.members):
        before = census(current)
        nxt = cut_open(current, F)
        mv = mayer_vietoris(current, F, nxt)
        residual = WallFamily(E.members[i + 1:])
        recheck = check_tidy(nxt, residual) if residual.members else None
        if recheck is not None and not recheck.passed and not override:
            raise TidyViolation(
                "residual family is not tidy: " + "; ".join(recheck.witnesses[:3]),
                step=i + 1, certificate=recheck,
            )
        label = E.labels[i] if E.labels else f"E_{i}"
        steps.append(HierarchyStep(i, label, len(F), before, census(nxt),
                                   current.carrier(F).homology(), mv, recheck))
        states.append(nxt)
        current = nxt

    terminal = census(current)
    single = all(n == 1 for n in terminal.chamber_counts)
    failures = []
    iso = True
    X = current.chamber.complex
    for comp, K in current.component_complexes():
        if end is not None:
            ok = find_isomorphism(K, end) is not None
        elif len(comp) == 1:
            (w,) = comp
            i = current.index[w]
            ok = is_isomorphism(K, X, {current.realization.label[i, x]: x for x in X.vertices})
        else:
            ok = False
        if not ok:
            iso = False
            failures.append(f"terminal component at {min(comp).normal_form} is not the expected piece")
    return HierarchyTrace(E, tidy, steps, states, terminal, single, iso, override, quotient, None, failures)


def setwise_stabilizer(component, quotient, W) -> list:
    """Elements g of Gamma with g C = C, found among c' c0^-1 for c' in C."""
    comp = set(component)
    c0 = min(comp)
    c0_inv = W.inverse(c0)
    out = []
    for c in sorted(comp):
        g = W.multiply(c, c0_inv)
        if quotient is not None and not quotient.in_kernel(g):
            continue
        if all(W.multiply(g, x) in comp for x in comp):
            out.append(g)
    return out


def induced_hierarchy(trace: HierarchyTrace, component) -> HierarchyTrace:
    """Restrict a trace to a component of one of its stages."""
    comp = frozenset(component)
    start = None
    for i, state in enumerate(trace.states):
        if comp in state.chamber_components():
            start = i
            break
    if start is None:
        raise NotAComponent("chamber set is not a component of any stage of the trace")
    M = trace.states[start].restrict(comp)
    members, labels = [], []
    for j in range(start, len(trace.family.members)):
        F = frozenset(p for p in trace.family.members[j] if p.lower in comp and p.upper in comp)
        if F:
            members.append(F)
            labels.append(trace.family.labels[j] if trace.family.labels else f"E_{j}")
    family = WallFamily(tuple(members), tuple(labels))
    sub = run_hierarchy(M, family, override=trace.overridden, quotient=trace.quotient)
    sub.stabilizer = setwise_stabilizer(comp, trace.quotient, M.system)
    return sub


__all__ = [
    "WallFamily", "family_from_orbits", "wall_family", "TidyCertificate", "check_tidy",
    "ComponentCensus", "census", "cut_open", "MayerVietorisCertificate", "mayer_vietoris",
    "HierarchyStep", "HierarchyTrace", "run_hierarchy", "induced_hierarchy", "setwise_stabilizer",
    "walls_in_ball", "Element",
]
