"""Exact Euler characteristics: orbifold Euler characteristic of a Coxeter
system and the Charney-Davis quantity of a simplicial complex."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .nerve import Nerve
from .simplicial import SimplicialComplex, is_homology_sphere

KAPPA_CONVENTION = "kappa(L) = sum over simplices of L and the empty simplex of (-1/2)^(number of vertices)"


def chi_orb(N: Nerve) -> Fraction:
    """Sum over spherical T (including the empty set) of (-1)^|T| / |W_T|."""
    return sum((Fraction((-1) ** len(T.subset), T.order) for T in N.spherical_subsets), Fraction(0))


def kappa(L: SimplicialComplex) -> Fraction:
    total = Fraction(1) if L.facets else Fraction(0)
    for d, fs in L.faces().items():
        total += len(fs) * Fraction(-1, 2) ** (d + 1)
    return total


def euler_of_complex(K: SimplicialComplex) -> int:
    return K.euler_characteristic()


@dataclass
class CharneyDavisReport:
    kappa: Fraction
    flag: bool
    sphere_dimension: int
    homology_sphere: bool

    @property
    def hypotheses_hold(self) -> bool:
        """Flag homology sphere of odd dimension 2k-1."""
        return self.flag and self.homology_sphere and self.sphere_dimension % 2 == 1

    @property
    def sign_ok(self) -> bool | None:
        """(-1)^k kappa >= 0 for a flag homology (2k-1)-sphere; None if not applicable."""
        if not self.hypotheses_hold:
            return None
        k = (self.sphere_dimension + 1) // 2
        return (-1) ** k * self.kappa >= 0

    def to_json(self):
        return {
            "kappa": rational_json(self.kappa),
            "flag": self.flag,
            "dimension": self.sphere_dimension,
            "homology_sphere": self.homology_sphere,
            "conjecture_applies": self.hypotheses_hold,
            "sign_ok": self.sign_ok,
            "convention": KAPPA_CONVENTION,
        }


def charney_davis(L: SimplicialComplex) -> CharneyDavisReport:
    d = L.dimension
    sphere = d >= 0 and is_homology_sphere(L, d).passed
    return CharneyDavisReport(kappa(L), L.is_flag(), d, sphere)


@dataclass
class EulerReport:
    chi_orb: Fraction
    kappa: Fraction | None  # only for right-angled systems
    dimension: int | None  # n when the nerve is a homology (n-1)-sphere
    right_angled: bool

    @property
    def sign_verdict(self) -> bool | None:
        """(-1)^(n/2) chi_orb >= 0 for even n; None when it does not apply."""
        if self.dimension is None or self.dimension % 2:
            return None
        return (-1) ** (self.dimension // 2) * self.chi_orb >= 0

    @property
    def identity_ok(self) -> bool | None:
        if self.kappa is None:
            return None
        return self.kappa == self.chi_orb

    def to_json(self):
        return {
            "chi_orb": rational_json(self.chi_orb),
            "kappa": None if self.kappa is None else rational_json(self.kappa),
            "right_angled": self.right_angled,
            "right_angled_identity": self.identity_ok,
            "n": self.dimension,
            "sign_verdict": self.sign_verdict,
            "convention": KAPPA_CONVENTION,
        }


def euler_report(N: Nerve) -> EulerReport:
    L = N.complex
    d = L.dimension
    n = d + 1 if d >= 0 and is_homology_sphere(L, d).passed else None
    ra = N.system.is_right_angled
    return EulerReport(chi_orb(N), kappa(L) if ra else None, n, ra)


def rational_json(x: Fraction) -> dict:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}
