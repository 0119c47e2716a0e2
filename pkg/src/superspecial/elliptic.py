"""Supersingular elliptic curves in Legendre form y^2 = x(x - 1)(x - lambda)."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import comb

from .arith import FieldElement, Fp2, Poly, legendre_symbol, poly_eval

__all__ = [
    "EllipticCurve",
    "SupersingularData",
    "class_numbers",
    "is_supersingular",
    "j_invariant",
    "j_of_cubic",
    "legendre_lambda",
    "legendre_polynomial",
    "supersingular_data",
    "supersingular_lambdas",
    "two_isogenous",
]


def legendre_polynomial(field: Fp2) -> Poly:
    """sum_{l=0}^{m} C(m, l)^2 z^l with m = (p - 1)/2."""
    m = (field.p - 1) // 2
    return Poly(field, [comb(m, l) ** 2 for l in range(m + 1)])


def j_invariant(lam) -> FieldElement:
    """j-invariant of the Legendre curve with parameter lam."""
    if lam == 0 or lam == 1:
        raise ValueError("Legendre parameter must avoid 0 and 1")
    num = lam * lam - lam + 1
    den = lam * lam * (lam - 1) * (lam - 1)
    return 256 * num * num * num / den


def j_of_cubic(a: FieldElement, b: FieldElement, c: FieldElement) -> FieldElement:
    """j-invariant of y^2 = x^3 + a x^2 + b x + c."""
    disc = a * a * b * b - 4 * b * b * b - 4 * a * a * a * c + 18 * a * b * c - 27 * c * c
    if not disc:
        raise ValueError("singular cubic")
    u = a * a - 3 * b
    return 256 * u * u * u / disc


def legendre_lambda(e0: FieldElement, e1: FieldElement, e2: FieldElement) -> FieldElement:
    """Legendre parameter after moving e0 -> 0 and e1 -> 1 affinely."""
    return (e2 - e0) / (e1 - e0)


def is_supersingular(curve: "EllipticCurve | FieldElement") -> bool:
    lam = curve.lam if isinstance(curve, EllipticCurve) else curve
    if lam == 0 or lam == 1:
        raise ValueError("Legendre parameter must avoid 0 and 1")
    return not poly_eval(legendre_polynomial(lam.field), lam)


@dataclass(frozen=True)
class EllipticCurve:
    """y^2 = x(x - 1)(x - lam).

    The 2-torsion points carry labels 0, 1, 2 for x = 0, 1, lam.
    """

    lam: FieldElement

    def __post_init__(self):
        if self.lam == 0 or self.lam == 1:
            raise ValueError("Legendre parameter must avoid 0 and 1")

    @property
    def field(self) -> Fp2:
        return self.lam.field

    @property
    def j(self) -> FieldElement:
        return j_invariant(self.lam)

    @property
    def two_torsion(self) -> tuple[FieldElement, FieldElement, FieldElement]:
        f = self.field
        return (f.zero, f.one, self.lam)

    @property
    def aut_order(self) -> int:
        j = self.j
        if j == 1728:
            return 4
        if j == 0:
            return 6
        return 2

    @classmethod
    def from_two_torsion(cls, e0, e1, e2) -> "EllipticCurve":
        """Curve y^2 = (x - e0)(x - e1)(x - e2), labelled in the given order."""
        return cls(legendre_lambda(e0, e1, e2))

    def relabel(self, perm: tuple[int, int, int]) -> "EllipticCurve":
        """Same curve with label i now carried by the old label perm[i]."""
        e = self.two_torsion
        return EllipticCurve(legendre_lambda(e[perm[0]], e[perm[1]], e[perm[2]]))

    def two_torsion_symmetries(self) -> list[tuple[int, int, int]]:
        return two_torsion_symmetries(self)

    def quotient(self, label: int) -> "EllipticCurve":
        """Codomain of the 2-isogeny with kernel generated by 2-torsion point ``label``.

        Label 0 of the result is the image of the rest of the 2-torsion,
        i.e. the generator of the dual kernel.
        """
        return two_isogenous(self, label)

    def is_supersingular(self) -> bool:
        return is_supersingular(self)

    def __str__(self) -> str:
        return f"y^2 = x(x - 1)(x - ({self.lam}))"


def two_torsion_symmetries(curve: EllipticCurve) -> list[tuple[int, int, int]]:
    """Permutations of the 2-torsion labels induced by Aut(E)/{+-1}.

    A relabelling is induced by an automorphism exactly when it leaves the
    Legendre parameter unchanged.
    """
    return [perm for perm in permutations(range(3)) if curve.relabel(perm).lam == curve.lam]


def two_isogenous(curve: EllipticCurve, label: int) -> EllipticCurve:
    e = curve.two_torsion
    rest = [e[i] for i in range(3) if i != label]
    e0 = e[label]
    # y^2 = x(x^2 + A x + B) after moving the kernel point to 0
    A = -(rest[0] - e0) - (rest[1] - e0)
    B = (rest[0] - e0) * (rest[1] - e0)
    # codomain y^2 = X((X - A)^2 - 4B)
    s = (4 * B).sqrt()
    if s is None:
        raise ArithmeticError("2-torsion of the isogenous curve is not defined over F_p^2")
    return EllipticCurve.from_two_torsion(curve.field.zero, A + s, A - s)


def class_numbers(p: int) -> tuple[int, int, int, int]:
    """(h, h1, h2, h3): supersingular j-invariants in total and by |Aut| = 2, 4, 6."""
    e1 = 1 - legendre_symbol(-1, p)
    e3 = 1 - legendre_symbol(-3, p)
    h = Fraction(p - 1, 12) + Fraction(e3, 3) + Fraction(e1, 4)
    h2 = Fraction(e1, 2)
    h3 = Fraction(e3, 2)
    h1 = h - h2 - h3
    out = (h, h1, h2, h3)
    if any(v.denominator != 1 or v < 0 for v in out):
        raise ArithmeticError(f"class numbers not non-negative integers at p={p}: {out}")
    return tuple(int(v) for v in out)


@dataclass(frozen=True)
class SupersingularData:
    """Supersingular Legendre parameters for one prime, grouped by j."""

    field: Fp2
    lambdas: tuple[FieldElement, ...]
    by_j: dict = dc_field(compare=False)

    @property
    def j_invariants(self) -> list[FieldElement]:
        return sorted(self.by_j)

    def canonical(self, j: FieldElement) -> EllipticCurve:
        """Representative: smallest supersingular lambda in the j-fibre."""
        return EllipticCurve(self.by_j[j][0])

    def curves(self) -> list[EllipticCurve]:
        return [self.canonical(j) for j in self.j_invariants]


@lru_cache(maxsize=None)
def supersingular_data(p: int) -> SupersingularData:
    field = Fp2(p)
    lams = legendre_polynomial(field).roots()
    if len(set(lams)) != len(lams) or len(lams) != (p - 1) // 2:
        raise ArithmeticError(f"Legendre polynomial does not split into distinct roots over F_{p}^2")
    if any(l == 0 or l == 1 for l in lams):
        raise ArithmeticError("supersingular lambda in {0, 1}")
    by_j: dict[FieldElement, list[FieldElement]] = {}
    for lam in sorted(lams):
        by_j.setdefault(j_invariant(lam), []).append(lam)
    return SupersingularData(field, tuple(sorted(lams)), by_j)


def supersingular_lambdas(p: int) -> set[FieldElement]:
    return set(supersingular_data(p).lambdas)
