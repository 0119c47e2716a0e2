"""Genus-2 curves y^2 = f(x) over F_{p^2} and their branch-point geometry.

A curve is stored together with its six branch points on P^1 (the roots of
f, plus infinity when deg f = 5).  All symmetry questions are answered on
the branch set: reduced automorphisms are the Mobius maps permuting it and
two curves are isomorphic exactly when some Mobius map carries one branch
set onto the other.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, permutations
from math import comb
from typing import Iterable, Sequence, Union

import numpy as np

from .arith import FieldElement, Fp2, Poly, _conv, poly_eval
from .elliptic import supersingular_data

log = logging.getLogger(__name__)

__all__ = [
    "INF",
    "Genus2Curve",
    "IgusaKey",
    "MobiusMap",
    "RAType",
    "cartier_manin",
    "ab_from_lambda_mu",
    "cartier_manin_poly",
    "curve_ab",
    "curves_from_supersingular_pairs",
    "family_g",
    "family_h",
    "igusa_key",
    "is_isomorphic",
    "is_superspecial",
    "isomorphisms",
    "lambda_mu_from_ab",
    "ra_type",
    "reduced_automorphisms",
    "long_involutions",
    "short_involutions",
    "superspecial_family_curves",
    "sextic_poly",
    "s3_family_poly",
    "v4_family_poly",
]


class _Infinity:
    """The point at infinity of P^1."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"

    __str__ = __repr__

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()

Point = Union[FieldElement, _Infinity]


def point_key(pt: Point) -> tuple[int, int]:
    return (1, 0) if pt is INF else (0, pt.code)


def sort_points(points: Iterable[Point]) -> tuple[Point, ...]:
    return tuple(sorted(points, key=point_key))


def _homog(field: Fp2, pt: Point) -> tuple[FieldElement, FieldElement]:
    return (field.one, field.zero) if pt is INF else (pt, field.one)


class MobiusMap:
    """x -> (a x + b)/(c x + d), scaled so the first nonzero entry is 1."""

    __slots__ = ("field", "a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        field = next(v.field for v in (a, b, c, d) if isinstance(v, FieldElement))
        a, b, c, d = (field(v) for v in (a, b, c, d))
        if not (a * d - b * c):
            raise ValueError("singular Mobius matrix")
        lead = next(v for v in (a, b, c, d) if v)
        inv = lead.inverse()
        self.field = field
        self.a, self.b, self.c, self.d = a * inv, b * inv, c * inv, d * inv

    @classmethod
    def identity(cls, field: Fp2) -> "MobiusMap":
        return cls(field.one, field.zero, field.zero, field.one)

    @classmethod
    def _to_standard(cls, field: Fp2, z1: Point, z2: Point, z3: Point):
        # rows orthogonal to z1 and z3 send them to 0 and infinity
        x1, w1 = _homog(field, z1)
        x2, w2 = _homog(field, z2)
        x3, w3 = _homog(field, z3)
        r1 = (w1, -x1)
        r2 = (w3, -x3)
        s1 = r2[0] * x2 + r2[1] * w2
        s2 = r1[0] * x2 + r1[1] * w2
        return (r1[0] * s1, r1[1] * s1, r2[0] * s2, r2[1] * s2)

    @classmethod
    def from_three_points(cls, src: Sequence[Point], dst: Sequence[Point]) -> "MobiusMap":
        """The unique map sending src[i] to dst[i] (distinct points)."""
        field = next(v.field for v in (*src, *dst) if v is not INF)
        a1, b1, c1, d1 = cls._to_standard(field, *src)
        a2, b2, c2, d2 = cls._to_standard(field, *dst)
        # inverse of the second (adjugate) composed with the first
        ia, ib, ic, id_ = d2, -b2, -c2, a2
        return cls(ia * a1 + ib * c1, ia * b1 + ib * d1, ic * a1 + id_ * c1, ic * b1 + id_ * d1)

    @property
    def entries(self) -> tuple[FieldElement, ...]:
        return (self.a, self.b, self.c, self.d)

    def __call__(self, pt: Point) -> Point:
        if pt is INF:
            return INF if not self.c else self.a / self.c
        den = self.c * pt + self.d
        if not den:
            return INF
        return (self.a * pt + self.b) / den

    def __matmul__(self, other: "MobiusMap") -> "MobiusMap":
        """Composition: (self @ other)(x) = self(other(x))."""
        a, b, c, d = self.entries
        e, f, g, h = other.entries
        return MobiusMap(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def inverse(self) -> "MobiusMap":
        return MobiusMap(self.d, -self.b, -self.c, self.a)

    def is_identity(self) -> bool:
        return not self.b and not self.c and self.a == self.d

    def order(self, limit: int = 10**6) -> int:
        g = self
        n = 1
        while not g.is_identity():
            g = g @ self
            n += 1
            if n > limit:
                raise ArithmeticError("Mobius map of excessive order")
        return n

    def fixed_points(self) -> list[Point]:
        """Fixed points on P^1; raises if they are not defined over F_{p^2}."""
        a, b, c, d = self.entries
        if self.is_identity():
            raise ValueError("identity fixes every point")
        if not c:
            pts: list[Point] = [INF]
            if a != d:
                pts.append(b / (d - a))
            return pts
        # c x^2 + (d - a) x - b = 0
        disc = (d - a) * (d - a) + 4 * b * c
        s = disc.sqrt()
        if s is None:
            raise ArithmeticError("fixed points are not defined over F_p^2")
        two_c = 2 * c
        roots = {(a - d + s) / two_c, (a - d - s) / two_c}
        return list(sort_points(roots))

    def __eq__(self, other):
        if not isinstance(other, MobiusMap):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(tuple(v.code for v in self.entries))

    def __repr__(self):
        return f"MobiusMap(({self.a})x + ({self.b}) / ({self.c})x + ({self.d}))"


class RAType(enum.Enum):
    """Reduced automorphism group types, numbered as in the classification."""

    T0 = (0, 1, "0")
    T_Z2 = (1, 2, "Z2")
    T_S3 = (2, 6, "S3")
    T_V4 = (3, 4, "V4")
    T_D12 = (4, 12, "D12")
    T_S4 = (5, 24, "S4")
    T_Z5 = (6, 5, "Z5")

    def __init__(self, index: int, order: int, label: str):
        self.index = index
        self.order = order
        self.label = label

    @classmethod
    def from_label(cls, label: str) -> "RAType":
        for t in cls:
            if t.label == label:
                return t
        raise ValueError(f"unknown RA type {label!r}")

    def __str__(self):
        return self.label


_ORDER_TO_TYPE = {t.order: t for t in RAType}


# index patterns for the invariants of a binary sextic given by its roots
_PAIRS = list(combinations(range(6), 2))
_PAIR_INDEX = {pair: k for k, pair in enumerate(_PAIRS)}


def _pid(i: int, j: int) -> int:
    return _PAIR_INDEX[(i, j) if i < j else (j, i)]


def _matchings(items: tuple[int, ...]) -> list[tuple[tuple[int, int], ...]]:
    if not items:
        return [()]
    first, rest = items[0], items[1:]
    out = []
    for k, other in enumerate(rest):
        remaining = rest[:k] + rest[k + 1:]
        for m in _matchings(remaining):
            out.append(((first, other),) + m)
    return out


MATCHINGS = _matchings(tuple(range(6)))
_TRIPLE_SPLITS = [(t, tuple(i for i in range(6) if i not in t)) for t in combinations(range(6), 3) if 0 in t]
_A_TERMS = [[_pid(*pr) for pr in m] for m in MATCHINGS]
_B_TERMS = [[_pid(t[0], t[1]), _pid(t[1], t[2]), _pid(t[0], t[2]),
             _pid(u[0], u[1]), _pid(u[1], u[2]), _pid(u[0], u[2])] for t, u in _TRIPLE_SPLITS]
_C_TERMS = [(k, [_pid(t[i], u[perm[i]]) for i in range(3)])
            for k, (t, u) in enumerate(_TRIPLE_SPLITS) for perm in permutations(range(3))]


@dataclass(frozen=True, order=True)
class IgusaKey:
    """Closure-level isomorphism class key of a genus-2 curve.

    Built from the classical invariants of weights 2, 4, 6, 10 of the
    sextic (the root-difference sums), normalised in weighted projective
    space.  ``kind`` records which invariant was used to normalise.
    """

    kind: str
    values: tuple[tuple[int, int], ...]

    def __str__(self):
        parts = [f"{a}" if b == 0 else f"{a}+{b}*t" for a, b in self.values]
        return f"J:{self.kind}:" + "|".join(parts)


def _invariants_from_roots(roots: Sequence[FieldElement]):
    d = [(roots[i] - roots[j]) * (roots[i] - roots[j]) for i, j in _PAIRS]
    zero = roots[0].field.zero
    A = zero
    for i, j, k in _A_TERMS:
        A = A + d[i] * d[j] * d[k]
    b_terms = []
    B = zero
    for t in _B_TERMS:
        v = d[t[0]] * d[t[1]] * d[t[2]] * d[t[3]] * d[t[4]] * d[t[5]]
        b_terms.append(v)
        B = B + v
    C = zero
    for k, (i, j, l) in _C_TERMS:
        C = C + b_terms[k] * d[i] * d[j] * d[l]
    D = roots[0].field.one
    for v in d:
        D = D * v
    return A, B, C, D


def igusa_key_from_roots(roots: Sequence[FieldElement]) -> IgusaKey:
    A, B, C, D = _invariants_from_roots(roots)
    if not D:
        raise ValueError("repeated branch points: discriminant invariant vanishes")
    if A:
        ia = A.inverse()
        ia2 = ia * ia
        vals = (B * ia2, C * ia2 * ia, D * ia2 * ia2 * ia)
        kind = "A"
    elif B:
        idd = D.inverse()
        vals = (B ** 5 * idd * idd, B * C * idd)
        kind = "B"
    elif C:
        vals = (C ** 5 / D ** 3,)
        kind = "C"
    else:
        vals = ()
        kind = "D"
    return IgusaKey(kind, tuple(v.pair for v in vals))


def sextic_poly(f: Poly) -> Poly:
    """A degree-6 model of y^2 = f(x), moving infinity to a finite non-branch point.

    Degree-6 input is returned unchanged; otherwise x = c + 1/z with c the
    smallest element (by code) with f(c) != 0.
    """
    if f.degree == 6:
        return f
    if f.degree != 5:
        raise ValueError(f"genus-2 model must have degree 5 or 6, got {f.degree}")
    field = f.field
    c = next(e for e in field.elements() if poly_eval(f, e))
    # z^6 f(c + 1/z) = sum_k a_k (c z + 1)^k z^(6 - k)
    lin = Poly(field, [1, c])
    out = Poly(field, [])
    power = Poly(field, [1])
    for k, a in enumerate(f.coeffs):
        out = out + power * Poly(field, [0] * (6 - k) + [a])
        power = power * lin
    assert out.degree == 6
    return out


def cartier_manin_poly(f: Poly) -> list[list[FieldElement]]:
    """Cartier-Manin matrix of y^2 = f(x) for f of degree 5 or 6.

    Entry (i, j), i, j in {1, 2}, is the coefficient of x^(i p - j) in
    f^((p - 1)/2).
    """
    if f.degree not in (5, 6):
        raise ValueError(f"genus-2 model must have degree 5 or 6, got {f.degree}")
    field = f.field
    p = field.p
    m = (p - 1) // 2
    # exponentiate on numpy arrays and read off only the four entries
    result = (np.array([1], dtype=np.int64), np.array([0], dtype=np.int64))
    base = f._arrays()
    e = m
    while e:
        if e & 1:
            result = _conv(field, result, base)
        e >>= 1
        if e:
            base = _conv(field, base, base)
    c0, c1 = result

    def coeff(k: int) -> FieldElement:
        if 0 <= k < len(c0):
            return field(int(c0[k]), int(c1[k]))
        return field.zero

    return [[coeff(i * p - j) for j in (1, 2)] for i in (1, 2)]


class Genus2Curve:
    """y^2 = f(x) with deg f in {5, 6} and six distinct branch points in P^1(F_{p^2})."""

    def __init__(self, f: Poly, branch: Iterable[Point] | None = None):
        if f.degree not in (5, 6):
            raise ValueError(f"genus-2 model must have degree 5 or 6, got {f.degree}")
        self.f = f
        self.field = f.field
        if branch is None:
            roots = f.roots()
            if len(set(roots)) != len(roots):
                raise ValueError("f is not squarefree")
            branch = list(roots) + ([INF] if f.degree == 5 else [])
            if len(branch) != 6:
                raise ArithmeticError(
                    f"f has only {len(roots)} roots in F_{self.field.p}^2; "
                    "the branch points are not all defined over F_p^2")
        self.branch = sort_points(branch)
        if len(self.branch) != 6 or len(set(self.branch)) != 6:
            raise ValueError("a genus-2 curve needs six distinct branch points")

    @classmethod
    def from_branch(cls, field: Fp2, points: Iterable[Point], lead=1) -> "Genus2Curve":
        pts = list(points)
        finite = [pt for pt in pts if pt is not INF]
        return cls(Poly.from_roots(field, finite, lead), pts)

    @classmethod
    def from_coeffs(cls, field: Fp2, coeffs: Iterable) -> "Genus2Curve":
        return cls(Poly(field, coeffs))

    @classmethod
    def parse(cls, field: Fp2, text: str) -> "Genus2Curve":
        return cls(Poly.parse(field, text))

    def serialize(self) -> str:
        return self.f.serialize()

    def __repr__(self):
        return f"Genus2Curve(y^2 = {self.f})"

    def __str__(self):
        return f"y^2 = [{self.serialize()}]"

    def transform(self, m: MobiusMap) -> "Genus2Curve":
        """The curve whose branch set is m(branch)."""
        return Genus2Curve.from_branch(self.field, [m(q) for q in self.branch])

    def sextic_model(self) -> tuple["Genus2Curve", MobiusMap]:
        """A model without a branch point at infinity, and the map used."""
        if INF not in self.branch:
            return self, MobiusMap.identity(self.field)
        taken = set(self.branch)
        c = next(e for e in self.field.elements() if e not in taken)
        m = MobiusMap(self.field.zero, self.field.one, self.field.one, -c)
        return self.transform(m), m

    @cached_property
    def igusa_key(self) -> IgusaKey:
        sextic, _ = self.sextic_model()
        return igusa_key_from_roots(sextic.branch)

    @cached_property
    def reduced_automorphisms(self) -> tuple[MobiusMap, ...]:
        return tuple(_branch_maps(self.branch, self.branch))

    def permutation(self, m: MobiusMap) -> tuple[int, ...]:
        """Action of m on branch-point indices."""
        index = {q: i for i, q in enumerate(self.branch)}
        return tuple(index[m(q)] for q in self.branch)

    @cached_property
    def ra_type(self) -> RAType:
        return ra_type(self)

    @cached_property
    def long_involutions(self) -> tuple[MobiusMap, ...]:
        return tuple(long_involutions(self))

    @cached_property
    def cartier_manin(self) -> list[list[FieldElement]]:
        return cartier_manin(self)

    def is_superspecial(self) -> bool:
        return is_superspecial(self)


def _branch_maps(src: Sequence[Point], dst: Sequence[Point]) -> list[MobiusMap]:
    """All Mobius maps carrying the point set src onto dst."""
    target = set(dst)
    fixed = src[:3]
    out = []
    for triple in permutations(dst, 3):
        m = MobiusMap.from_three_points(fixed, triple)
        if all(m(q) in target for q in src[3:]):
            out.append(m)
    return out


def reduced_automorphisms(curve: Genus2Curve) -> tuple[MobiusMap, ...]:
    return curve.reduced_automorphisms


def ra_type(curve: Genus2Curve) -> RAType:
    group = curve.reduced_automorphisms
    try:
        t = _ORDER_TO_TYPE[len(group)]
    except KeyError:
        raise ArithmeticError(f"reduced automorphism group of order {len(group)}") from None
    if t is RAType.T_S3 and all((g @ h) == (h @ g) for g in group for h in group):
        raise ArithmeticError("cyclic group of order 6 found where S3 was expected")
    if t is RAType.T_V4 and any(not (g @ g).is_identity() for g in group):
        raise ArithmeticError("cyclic group of order 4 found where V4 was expected")
    return t


def _involutions(curve: Genus2Curve) -> list[tuple[MobiusMap, int]]:
    out = []
    for g in curve.reduced_automorphisms:
        if not g.is_identity() and (g @ g).is_identity():
            fixed = sum(1 for q in curve.branch if g(q) == q)
            out.append((g, fixed))
    return out


def long_involutions(curve: Genus2Curve) -> list[MobiusMap]:
    """Order-2 reduced automorphisms acting freely on the branch points."""
    out = []
    for g, fixed in _involutions(curve):
        if fixed == 0:
            out.append(g)
        elif fixed != 2:
            raise ArithmeticError(f"involution fixing {fixed} branch points")
    return out


def short_involutions(curve: Genus2Curve) -> list[MobiusMap]:
    return [g for g, fixed in _involutions(curve) if fixed]


def cartier_manin(curve: Genus2Curve) -> list[list[FieldElement]]:
    return cartier_manin_poly(curve.f)


def is_superspecial(curve: Genus2Curve | Poly) -> bool:
    f = curve if isinstance(curve, Poly) else curve.f
    m = cartier_manin_poly(f)
    return not any(v for row in m for v in row)


def igusa_key(curve: Genus2Curve) -> IgusaKey:
    return curve.igusa_key


def isomorphisms(c1: Genus2Curve, c2: Genus2Curve) -> list[MobiusMap]:
    """Mobius maps carrying branch(c1) onto branch(c2)."""
    return _branch_maps(c1.branch, c2.branch)


def is_isomorphic(c1: Genus2Curve, c2: Genus2Curve) -> bool:
    """Isomorphism over the algebraic closure, by exhausting Mobius maps."""
    target = set(c2.branch)
    fixed = c1.branch[:3]
    for triple in permutations(c2.branch, 3):
        m = MobiusMap.from_three_points(fixed, triple)
        if all(m(q) in target for q in c1.branch[3:]):
            return True
    return False


# -- superspecial seeds ----------------------------------------------------


def _family_poly(field: Fp2, offset: int, top: int) -> Poly:
    m = (field.p - 1) // 2
    return Poly(field, [comb(m, offset + l) * comb(m, l) for l in range(top + 1)])


def family_g(field: Fp2) -> Poly:
    """Superspeciality polynomial of the family y^2 = (x^3 - 1)(x^3 - alpha)."""
    p = field.p
    return _family_poly(field, (p + 1) // 6, p // 3)


def family_h(field: Fp2) -> Poly:
    """Superspeciality polynomial of the family y^2 = x(x^2 - 1)(x^2 - beta)."""
    p = field.p
    return _family_poly(field, (p + 1) // 4, p // 4)


def s3_family_poly(field: Fp2, alpha) -> Poly:
    alpha = field(alpha)
    return Poly(field, [alpha, 0, 0, -alpha - 1, 0, 0, 1])


def v4_family_poly(field: Fp2, beta) -> Poly:
    beta = field(beta)
    return Poly(field, [0, beta, 0, -beta - 1, 0, 1])


def superspecial_family_curves(p: int) -> list[Genus2Curve]:
    """Normal-form superspecial curves: roots of g and h plus the two rigid models."""
    field = Fp2(p)
    out = []
    for alpha in sorted(set(family_g(field).roots())):
        if alpha != 0 and alpha != 1:
            out.append(Genus2Curve(s3_family_poly(field, alpha)))
    for beta in sorted(set(family_h(field).roots())):
        if beta != 0 and beta != 1:
            out.append(Genus2Curve(v4_family_poly(field, beta)))
    if p % 6 == 5:
        out.append(Genus2Curve.from_coeffs(field, [-1, 0, 0, 0, 0, 0, 1]))
    if p % 8 in (5, 7):
        out.append(Genus2Curve.from_coeffs(field, [0, -1, 0, 0, 0, 1]))
    return out


def curve_ab(field: Fp2, a, b) -> Genus2Curve:
    """C_{a,b}: y^2 = (x^2 - 1)(x^2 - a)(x^2 - b); branch points must be rational."""
    a, b = field(a), field(b)
    if a == 0 or a == 1 or b == 0 or b == 1 or a == b:
        raise ValueError("C_{a,b} needs a, b not in {0, 1} and a != b")
    ra, rb = a.sqrt(), b.sqrt()
    if ra is None or rb is None:
        raise ArithmeticError("square roots of a, b are not in F_p^2")
    one = field.one
    return Genus2Curve.from_branch(field, [one, -one, ra, -ra, rb, -rb])


def ab_from_lambda_mu(lam: FieldElement, mu: FieldElement) -> tuple[FieldElement, FieldElement]:
    """Inverse of lambda = (b - a)/(1 - a), mu = (b - a)/(b(1 - a))."""
    return lam * (mu - 1) / (mu * (lam - 1)), lam / mu


def lambda_mu_from_ab(a: FieldElement, b: FieldElement) -> tuple[FieldElement, FieldElement]:
    return (b - a) / (1 - a), (b - a) / (b * (1 - a))


def curves_from_supersingular_pairs(p: int) -> list[Genus2Curve]:
    """C_{a,b} for every unordered pair of distinct supersingular Legendre parameters."""
    data = supersingular_data(p)
    field = data.field
    out = []
    for lam, mu in combinations(data.lambdas, 2):
        a, b = ab_from_lambda_mu(lam, mu)
        if a == 0 or a == 1 or b == 0 or b == 1 or a == b:
            log.info("skipping degenerate pair lambda=%s mu=%s", lam, mu)
            continue
        out.append(curve_ab(field, a, b))
    return out
