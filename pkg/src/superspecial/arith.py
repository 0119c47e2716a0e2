"""Exact arithmetic in F_p, F_{p^2} = F_p[t]/(t^2 - r) and polynomials over it.

Elements are immutable.  Every element carries a reference to its field so
that mixed arithmetic with plain integers works (``x + 1``, ``3 * x``).
"""

from __future__ import annotations

import random
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "Fp2",
    "FieldElement",
    "Poly",
    "is_prime",
    "legendre_symbol",
]


def is_prime(n: int) -> bool:
    """Trial division; fine for the desk-scale moduli used here."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def legendre_symbol(a: int, q: int) -> int:
    """Legendre symbol (a/q) for an odd prime q, via Euler's criterion."""
    a %= q
    if a == 0:
        return 0
    return 1 if pow(a, (q - 1) // 2, q) == 1 else -1


class Fp2:
    """The field F_{p^2}, presented as F_p[t]/(t^2 - r).

    ``r`` is the smallest positive quadratic non-residue mod p, so the
    presentation is the same on every run.
    """

    _cache: dict[int, "Fp2"] = {}

    def __new__(cls, p: int) -> "Fp2":
        # one context per prime, so identity comparisons of fields are cheap
        try:
            return cls._cache[p]
        except KeyError:
            pass
        if p >= 10**6:
            raise ValueError(f"modulus {p} is too large for trial-division checks")
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if p <= 5:
            raise ValueError(f"characteristic must exceed 5, got {p}")
        self = super().__new__(cls)
        self.p = p
        self.r = next(a for a in range(2, p) if legendre_symbol(a, p) == -1)
        self.zero = FieldElement(self, 0, 0)
        self.one = FieldElement(self, 1, 0)
        self.t = FieldElement(self, 0, 1)
        cls._cache[p] = self
        return self

    def __getnewargs__(self):
        return (self.p,)

    def __repr__(self) -> str:
        return f"Fp2({self.p})"

    def __call__(self, a0, a1: int = 0) -> "FieldElement":
        if isinstance(a0, FieldElement):
            if a0.field is not self:
                raise ValueError("element belongs to a different field")
            return a0
        return FieldElement(self, a0 % self.p, a1 % self.p)

    @property
    def order(self) -> int:
        return self.p * self.p

    def from_code(self, code: int) -> "FieldElement":
        """Inverse of :attr:`FieldElement.code`."""
        return FieldElement(self, code // self.p, code % self.p)

    def elements(self) -> Iterator["FieldElement"]:
        """All p^2 elements in lexicographic order of (a0, a1)."""
        p = self.p
        for a0 in range(p):
            for a1 in range(p):
                yield FieldElement(self, a0, a1)

    def random_element(self, rng: random.Random | None = None) -> "FieldElement":
        rng = rng or random
        return FieldElement(self, rng.randrange(self.p), rng.randrange(self.p))

    def parse(self, text: str) -> "FieldElement":
        """Parse ``"a0"``, ``"a0+a1*t"``, ``"a1*t"`` or ``"t"`` (signs allowed)."""
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty field element")
        a0 = a1 = 0
        # split into signed terms
        terms = []
        start = 0
        for i in range(1, len(s)):
            if s[i] in "+-" and s[i - 1] != "*":
                terms.append(s[start:i])
                start = i
        terms.append(s[start:])
        for term in terms:
            sign = 1
            if term[0] in "+-":
                sign = -1 if term[0] == "-" else 1
                term = term[1:]
            if term.endswith("t"):
                body = term[:-1].rstrip("*")
                a1 += sign * (int(body) if body else 1)
            else:
                a0 += sign * int(term)
        return self(a0, a1)

    # -- square roots --------------------------------------------------------

    @cached_property
    def _sqrt_table(self) -> dict[int, int]:
        # codes run in lexicographic order, so the first root seen is the smaller
        p, r = self.p, self.r
        codes = np.arange(p * p, dtype=np.int64)
        a0, a1 = codes // p, codes % p
        s0 = (a0 * a0 + r * a1 % p * a1) % p
        s1 = (2 * a0 * a1) % p
        squares = s0 * p + s1
        uniq, first = np.unique(squares, return_index=True)
        return dict(zip(uniq.tolist(), first.tolist()))

    def sqrt(self, x: "FieldElement") -> "FieldElement | None":
        """A square root of ``x`` in F_{p^2}, or None.

        Of the two roots, the lexicographically smaller representation is
        returned.
        """
        code = self._sqrt_table.get(self(x).code)
        return None if code is None else self.from_code(code)

    # -- vectorised helpers ---------------------------------------------------

    def _all_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        p = self.p
        codes = np.arange(p * p, dtype=np.int64)
        return codes // p, codes % p


class FieldElement:
    """An element a0 + a1*t of F_{p^2}."""

    __slots__ = ("field", "a0", "a1")

    def __init__(self, field: Fp2, a0: int, a1: int):
        self.field = field
        self.a0 = a0
        self.a1 = a1

    def _coerce(self, other) -> "FieldElement | None":
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise ValueError("cannot mix elements of different fields")
            return other
        if isinstance(other, int):
            p = self.field.p
            return FieldElement(self.field, other % p, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.field.p
        return FieldElement(self.field, (self.a0 + o.a0) % p, (self.a1 + o.a1) % p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.field.p
        return FieldElement(self.field, (self.a0 - o.a0) % p, (self.a1 - o.a1) % p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        p = self.field.p
        return FieldElement(self.field, -self.a0 % p, -self.a1 % p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        f = self.field
        p = f.p
        x0, x1, y0, y1 = self.a0, self.a1, o.a0, o.a1
        return FieldElement(f, (x0 * y0 + f.r * x1 * y1) % p, (x0 * y1 + x1 * y0) % p)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        f = self.field
        p = f.p
        norm = (self.a0 * self.a0 - f.r * self.a1 * self.a1) % p
        if norm == 0:
            raise ZeroDivisionError("inverse of zero in F_p^2")
        n_inv = pow(norm, -1, p)
        return FieldElement(f, self.a0 * n_inv % p, -self.a1 * n_inv % p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field is other.field and self.a0 == other.a0 and self.a1 == other.a1
        if isinstance(other, int):
            return self.a1 == 0 and self.a0 == other % self.field.p
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.a0, self.a1))

    def __bool__(self):
        return self.a0 != 0 or self.a1 != 0

    def __lt__(self, other: "FieldElement") -> bool:
        return (self.a0, self.a1) < (other.a0, other.a1)

    @property
    def code(self) -> int:
        """Integer code a0*p + a1; ordering by code is lexicographic."""
        return self.a0 * self.field.p + self.a1

    @property
    def pair(self) -> tuple[int, int]:
        return (self.a0, self.a1)

    def in_base_field(self) -> bool:
        return self.a1 == 0

    def sqrt(self) -> "FieldElement | None":
        return self.field.sqrt(self)

    def is_square(self) -> bool:
        return self.field.sqrt(self) is not None

    def __str__(self) -> str:
        if self.a1 == 0:
            return str(self.a0)
        return f"{self.a0}+{self.a1}*t"

    def __repr__(self) -> str:
        return f"FieldElement({self}, p={self.field.p})"


def _trim(coeffs: list[FieldElement]) -> tuple[FieldElement, ...]:
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return tuple(coeffs)


class Poly:
    """Univariate polynomial over F_{p^2}; coefficients low degree first."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Fp2, coeffs: Iterable = ()):
        self.field = field
        self.coeffs = _trim([field(c) for c in coeffs])

    @classmethod
    def x(cls, field: Fp2) -> "Poly":
        return cls(field, [0, 1])

    @classmethod
    def from_roots(cls, field: Fp2, roots: Iterable, lead=1) -> "Poly":
        result = cls(field, [lead])
        for c in roots:
            result = result * cls(field, [-field(c), 1])
        return result

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lead(self) -> FieldElement:
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, i: int) -> FieldElement:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.field.zero

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.field is other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(c.code for c in self.coeffs))

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly(self.field, [other])

    def __add__(self, other):
        o = self._lift(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return Poly(self.field, [self[i] + o[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        if self.is_zero() or o.is_zero():
            return Poly(self.field, [])
        zero = self.field.zero
        out = [zero] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(self.field, out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Poly":
        return poly_pow(self, e)

    def __call__(self, x) -> FieldElement:
        return poly_eval(self, x)

    def derivative(self) -> "Poly":
        return Poly(self.field, [c * i for i, c in enumerate(self.coeffs)][1:])

    def monic(self) -> "Poly":
        inv = self.lead.inverse()
        return Poly(self.field, [c * inv for c in self.coeffs])

    def divmod_linear(self, c) -> tuple["Poly", FieldElement]:
        """Synthetic division by (x - c); returns (quotient, remainder)."""
        c = self.field(c)
        acc = self.field.zero
        out = []
        for a in reversed(self.coeffs):
            acc = acc * c + a
            out.append(acc)
        if not out:
            return Poly(self.field, []), self.field.zero
        rem = out.pop()
        return Poly(self.field, reversed(out)), rem

    def roots(self) -> list[FieldElement]:
        return poly_roots_in_fp2(self)

    def __repr__(self) -> str:
        if self.is_zero():
            return "Poly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"({c})*x^{i}" if i else f"({c})")
        return "Poly(" + " + ".join(terms) + ")"

    def serialize(self) -> str:
        """Comma-separated coefficients, low degree first."""
        return ",".join(str(c) for c in self.coeffs)

    @classmethod
    def parse(cls, field: Fp2, text: str) -> "Poly":
        parts = [s for s in text.split(",")]
        if any(not s.strip() for s in parts):
            raise ValueError(f"malformed coefficient list: {text!r}")
        return cls(field, [field.parse(s) for s in parts])

    # numpy views used by the fast paths below
    def _arrays(self) -> tuple[np.ndarray, np.ndarray]:
        a0 = np.array([c.a0 for c in self.coeffs], dtype=np.int64)
        a1 = np.array([c.a1 for c in self.coeffs], dtype=np.int64)
        return a0, a1


def poly_eval(f: Poly, x) -> FieldElement:
    """Horner evaluation."""
    x = f.field(x)
    acc = f.field.zero
    for c in reversed(f.coeffs):
        acc = acc * x + c
    return acc


def _conv(field: Fp2, a: tuple[np.ndarray, np.ndarray], b: tuple[np.ndarray, np.ndarray]):
    p, r = field.p, field.r
    x0, x1 = a
    y0, y1 = b
    c0 = (np.convolve(x0, y0) % p + r * (np.convolve(x1, y1) % p)) % p
    c1 = (np.convolve(x0, y1) + np.convolve(x1, y0)) % p
    return c0, c1


def poly_mul(f: Poly, g: Poly) -> Poly:
    return f * g


def poly_derivative(f: Poly) -> Poly:
    return f.derivative()


def poly_pow(f: Poly, e: int) -> Poly:
    """f**e by binary exponentiation (numpy convolutions underneath)."""
    if e < 0:
        raise ValueError("negative exponent")
    field = f.field
    if f.is_zero():
        return Poly(field, [1]) if e == 0 else Poly(field, [])
    result = (np.array([1], dtype=np.int64), np.array([0], dtype=np.int64))
    base = f._arrays()
    while e:
        if e & 1:
            result = _conv(field, result, base)
        e >>= 1
        if e:
            base = _conv(field, base, base)
    c0, c1 = result
    return Poly(field, [FieldElement(field, int(u), int(v)) for u, v in zip(c0, c1)])


def _eval_all(f: Poly) -> np.ndarray:
    """Codes of f(x) for every x in F_{p^2}, indexed by the code of x."""
    field = f.field
    p, r = field.p, field.r
    x0, x1 = field._all_arrays()
    v0 = np.zeros_like(x0)
    v1 = np.zeros_like(x0)
    for c in reversed(f.coeffs):
        n0 = (v0 * x0 + r * (v1 * x1 % p)) % p
        n1 = (v0 * x1 + v1 * x0) % p
        v0 = (n0 + c.a0) % p
        v1 = (n1 + c.a1) % p
    return v0 * p + v1


def poly_roots_in_fp2(f: Poly) -> list[FieldElement]:
    """All roots of f in F_{p^2} with multiplicity, sorted.

    Candidates come from an exhaustive scan of the p^2 field elements;
    multiplicities by repeated synthetic division.
    """
    if f.is_zero():
        raise ValueError("the zero polynomial has no well-defined root set")
    field = f.field
    hits = np.nonzero(_eval_all(f) == 0)[0]
    roots = []
    for code in hits.tolist():
        c = field.from_code(code)
        g = f
        while True:
            q, rem = g.divmod_linear(c)
            if rem:
                break
            roots.append(c)
            g = q
    return roots


def poly_from_ints(field: Fp2, coeffs: Sequence[int]) -> Poly:
    return Poly(field, coeffs)
