"""Closed-form counts of superspecial curves and of Richelot isogenies between them.

Every formula is evaluated in exact rationals and must land on a
non-negative integer; anything else is treated as a transcription error.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction

from .arith import is_prime, legendre_symbol
from .elliptic import class_numbers
from .genus2 import RAType

__all__ = [
    "CountReport",
    "PRODUCT_SHAPES",
    "count_report",
    "n_counts",
    "n_total",
    "orbit_signature_table",
    "product_signature_table",
    "theorem_62",
    "theorem_64",
]

Signature = tuple[tuple[tuple[int, int], ...], tuple[tuple[int, int], ...]]


def _check_prime(p: int) -> None:
    if not is_prime(p) or p <= 5:
        raise ValueError(f"expected a prime p > 5, got {p}")


def _integral(value: Fraction, what: str, p: int) -> int:
    if value.denominator != 1 or value < 0:
        raise ArithmeticError(f"{what} is not a non-negative integer at p={p}: {value}")
    return int(value)


def _eps(p: int) -> tuple[int, int, int]:
    """The correction terms 1 - (-d/p) for d = 1, 2, 3."""
    return tuple(1 - legendre_symbol(-d, p) for d in (1, 2, 3))


def n_counts(p: int) -> tuple[int, int, int, int, int, int, int]:
    """Numbers of superspecial curves with RA type 0, Z2, S3, V4, D12, S4, Z5."""
    _check_prime(p)
    e1, e2, e3 = _eps(p)
    five = p % 5 == 4
    F = Fraction
    raw = (
        F((p - 1) * (p * p - 35 * p + 346), 2880) - F(e1, 32) - F(e2, 8) - F(e3, 9) - (F(1, 5) if five else 0),
        F((p - 1) * (p - 17), 48) + F(e1, 8) + F(e2, 2) + F(e3, 2),
        F(p - 1, 6) - F(e2, 2) - F(e3, 3),
        F(p - 1, 8) - F(e1, 8) - F(e2, 4) - F(e3, 2),
        F(e3, 2),
        F(e2, 2),
        F(1 if five else 0),
    )
    return tuple(_integral(v, f"n{i}", p) for i, v in enumerate(raw))


def n_total(p: int) -> int:
    """Total number of superspecial curves, checked against the sum of the n_i."""
    _check_prime(p)
    e1, e2, e3 = _eps(p)
    F = Fraction
    total = F((p - 1) * (p * p + 25 * p + 166), 2880) - F(e1, 32) + F(e2, 8) + F(e3, 18)
    if p % 5 == 4:
        total += F(4, 5)
    value = _integral(total, "n", p)
    if value != sum(n_counts(p)):
        raise ArithmeticError(f"total formula {value} disagrees with sum of n_i {sum(n_counts(p))} at p={p}")
    return value


def theorem_62(p: int) -> tuple[int, int]:
    """(total, decomposed) reduced Richelot isogenies out of superspecial Jacobians."""
    _check_prime(p)
    e1, e2, e3 = _eps(p)
    F = Fraction
    total = _integral(F((p - 1) * (p + 2) * (p + 7), 192) - F(3 * e1, 32) + F(e2, 8), "total", p)
    dec = _integral(F((p - 1) * (p + 3), 48) - F(e1, 8) + F(e3, 6), "decomposed", p)
    n = n_counts(p)
    weights_total = (15, 11, 7, 8, 5, 4, 3)
    weights_dec = (0, 1, 1, 2, 2, 1, 0)
    by_type = sum(w * k for w, k in zip(weights_total, n))
    by_type_dec = sum(w * k for w, k in zip(weights_dec, n))
    if (total, dec) != (by_type, by_type_dec):
        raise ArithmeticError(f"closed forms {(total, dec)} disagree with type sums {(by_type, by_type_dec)} at p={p}")
    return total, dec


def theorem_64(p: int) -> tuple[int, int]:
    """(non-decomposed, decomposed) reduced Richelot isogenies out of products."""
    _check_prime(p)
    e1, _, e3 = _eps(p)
    F = Fraction
    nondec = _integral(F((p - 1) * (p + 3), 48) - F(e1, 8) + F(e3, 6), "non-decomposed", p)
    dec = _integral(F((p - 1) * (3 * p + 17), 96) + F((p + 6) * e1, 16) + F(e3, 3), "decomposed", p)
    _, h1, h2, h3 = class_numbers(p)
    pairs = h1 * (h1 - 1) // 2
    sum_nondec = 6 * pairs + 4 * h1 + 3 * h2 * h1 + 2 * h3 * h1 + h2 + h3 + h2 * h3
    sum_dec = 9 * pairs + 7 * h1 + 6 * h2 * h1 + 3 * h3 * h1 + 4 * h2 + 2 * h3 + 2 * h2 * h3
    if (nondec, dec) != (sum_nondec, sum_dec):
        raise ArithmeticError(f"closed forms {(nondec, dec)} disagree with class-number sums {(sum_nondec, sum_dec)} at p={p}")
    return nondec, dec


@dataclass(frozen=True)
class CountReport:
    p: int
    n0: int
    n1: int
    n2: int
    n3: int
    n4: int
    n5: int
    n6: int
    n_total: int
    thm62_total: int
    thm62_decomposed: int
    thm64_nondecomposed: int
    thm64_decomposed: int
    h: int
    h1: int
    h2: int
    h3: int

    def __post_init__(self):
        if self.n_total != sum(self.n):
            raise ArithmeticError("n_total differs from the sum of the n_i")
        if self.thm62_decomposed != self.thm64_nondecomposed:
            raise ArithmeticError("decomposed isogenies from Jacobians differ from non-decomposed ones from products")

    @property
    def n(self) -> tuple[int, ...]:
        return (self.n0, self.n1, self.n2, self.n3, self.n4, self.n5, self.n6)

    def as_dict(self) -> dict:
        return asdict(self)

    def lines(self) -> list[str]:
        return [
            f"p = {self.p}",
            "n = (" + ", ".join(map(str, self.n)) + f"), total {self.n_total}",
            f"h = {self.h} (h1 = {self.h1}, h2 = {self.h2}, h3 = {self.h3})",
            f"Jacobians: {self.thm62_total} isogenies, {self.thm62_decomposed} decomposed",
            f"products: {self.thm64_nondecomposed} non-decomposed, {self.thm64_decomposed} decomposed",
        ]

    def __str__(self) -> str:
        return "\n".join(self.lines())


def count_report(p: int) -> CountReport:
    n = n_counts(p)
    return CountReport(p, *n, n_total(p), *theorem_62(p), *theorem_64(p), *class_numbers(p))


# orbit signatures: (non-decomposed orbits, decomposed orbits), each a tuple of (size, count)
_RA_SIGNATURES: dict[RAType, Signature] = {
    RAType.T0: (((1, 15),), ()),
    RAType.T_Z2: (((1, 6), (2, 4)), ((1, 1),)),
    RAType.T_S3: (((1, 3), (3, 3)), ((3, 1),)),
    RAType.T_V4: (((1, 1), (2, 4), (4, 1)), ((1, 2),)),
    RAType.T_D12: (((2, 1), (3, 1), (6, 1)), ((1, 1), (3, 1))),
    RAType.T_S4: (((1, 1), (4, 2)), ((6, 1),)),
    RAType.T_Z5: (((5, 3),), ()),
}

_PRODUCT_SIGNATURES: dict[str, Signature] = {
    "ExE'": (((1, 6),), ((1, 9),)),
    "ExE": (((1, 3), (2, 1)), ((1, 4), (2, 3))),
    "ExE2": (((2, 3),), ((1, 3), (2, 3))),
    "ExE3": (((3, 2),), ((3, 3),)),
    "E2xE2": (((4, 1),), ((1, 1), (2, 1), (4, 2))),
    "E3xE3": (((3, 1),), ((3, 1), (9, 1))),
    "E2xE3": (((6, 1),), ((3, 1), (6, 1))),
}

PRODUCT_SHAPES = tuple(_PRODUCT_SIGNATURES)


def orbit_signature_table(ra: RAType | str) -> Signature:
    """Expected orbit structure of the 15 splittings of a curve of the given type."""
    if isinstance(ra, str):
        ra = RAType.from_label(ra)
    try:
        return _RA_SIGNATURES[ra]
    except KeyError:
        raise ValueError(f"unknown RA type {ra!r}") from None


def product_signature_table(shape: str) -> Signature:
    """Expected orbit structure for a product of the given shape, e.g. "E2xE3"."""
    try:
        return _PRODUCT_SIGNATURES[shape]
    except KeyError:
        raise ValueError(f"unknown product shape {shape!r}") from None
