"""Richelot isogenies out of Jacobians and out of elliptic products.

Kernels are never represented as divisor classes.  On a Jacobian a kernel
is a pairing of the six branch points (a quadratic splitting); on a product
E_L x E_R it is a pairing of the six labelled 2-torsion points, labels 0-2
on E_L and 3-5 on E_R.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Sequence, Union

from .arith import FieldElement, Fp2, Poly
from .elliptic import EllipticCurve, supersingular_data
from .genus2 import (
    INF,
    MATCHINGS,
    Genus2Curve,
    MobiusMap,
    Point,
    ab_from_lambda_mu,
    curve_ab,
    is_isomorphic,
    point_key,
)

__all__ = [
    "Jacobian",
    "Product",
    "PPAS",
    "ProductSplitting",
    "QuadraticSplitting",
    "RichelotStep",
    "codomain",
    "delta",
    "dual_splitting",
    "glue",
    "orbit_decomposition",
    "orbit_signature",
    "product_is_decomposed",
    "product_shape",
    "product_splittings",
    "product_symmetries",
    "richelot_step",
    "splittings",
    "vertex_key",
]


# -- splittings -------------------------------------------------------------


def _canon_pairs(pairs: Iterable[Sequence], key) -> tuple:
    ordered = [tuple(sorted(pr, key=key)) for pr in pairs]
    return tuple(sorted(ordered, key=lambda pr: (key(pr[0]), key(pr[1]))))


@dataclass(frozen=True)
class QuadraticSplitting:
    """Partition of the six branch points into three unordered pairs."""

    pairs: tuple[tuple[Point, Point], ...]

    def __post_init__(self):
        object.__setattr__(self, "pairs", _canon_pairs(self.pairs, point_key))
        pts = [q for pr in self.pairs for q in pr]
        if len(pts) != 6 or len(set(pts)) != 6:
            raise ValueError("a splitting pairs up six distinct points")

    def quadratics(self, field: Fp2) -> list[Poly]:
        """Monic polynomials with the root pairs; degree 1 for a pair containing infinity."""
        return [Poly.from_roots(field, [q for q in pr if q is not INF]) for pr in self.pairs]

    def transform(self, m: MobiusMap) -> "QuadraticSplitting":
        return QuadraticSplitting(tuple((m(a), m(b)) for a, b in self.pairs))

    def index_pairs(self, curve: Genus2Curve) -> tuple[tuple[int, int], ...]:
        index = {q: i for i, q in enumerate(curve.branch)}
        return tuple(sorted(tuple(sorted((index[a], index[b]))) for a, b in self.pairs))


@dataclass(frozen=True)
class ProductSplitting:
    """Partition of the product's 2-torsion labels 0..5 into three pairs."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "pairs", _canon_pairs(self.pairs, lambda i: i))
        if sorted(i for pr in self.pairs for i in pr) != list(range(6)):
            raise ValueError("a product splitting pairs up labels 0..5")

    def mixed(self) -> list[tuple[int, int]]:
        return [pr for pr in self.pairs if pr[0] < 3 <= pr[1]]

    def bijection(self) -> tuple[int, int, int] | None:
        """Left label i -> right label (0..2) when every pair is mixed."""
        mixed = self.mixed()
        if len(mixed) != 3:
            return None
        out = [0, 0, 0]
        for left, right in mixed:
            out[left] = right - 3
        return tuple(out)

    def permuted(self, perm: Sequence[int]) -> "ProductSplitting":
        return ProductSplitting(tuple((perm[a], perm[b]) for a, b in self.pairs))


def splittings(curve: Genus2Curve) -> list[QuadraticSplitting]:
    """The 15 quadratic splittings of a genus-2 curve."""
    b = curve.branch
    return [QuadraticSplitting(tuple((b[i], b[j]) for i, j in m)) for m in MATCHINGS]


def product_splittings(left: EllipticCurve | None = None, right: EllipticCurve | None = None) -> list[ProductSplitting]:
    return [ProductSplitting(m) for m in MATCHINGS]


# -- vertices ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Jacobian:
    curve: Genus2Curve

    @property
    def key(self) -> str:
        return str(self.curve.igusa_key)

    @property
    def field(self) -> Fp2:
        return self.curve.field


@dataclass(frozen=True)
class Product:
    """E_L x E_R with the product polarization; unordered as a vertex."""

    left: EllipticCurve
    right: EllipticCurve

    @property
    def field(self) -> Fp2:
        return self.left.field

    @property
    def key(self) -> str:
        ja, jb = sorted((self.left.j, self.right.j))
        return f"P:{ja}|{jb}"

    def canonical(self) -> "Product":
        data = supersingular_data(self.field.p)
        a, b = sorted((self.left.j, self.right.j))
        return Product(data.canonical(a), data.canonical(b))


PPAS = Union[Jacobian, Product]


def vertex_key(v: PPAS) -> str:
    return v.key


def product_shape(v: Product) -> str:
    """Shape label: ExE', ExE, ExE2, ExE3, E2xE2, E3xE3 or E2xE3."""
    oa, ob = sorted((v.left.aut_order, v.right.aut_order))
    if (oa, ob) == (2, 2):
        return "ExE" if v.left.j == v.right.j else "ExE'"
    names = {2: "E", 4: "E2", 6: "E3"}
    return f"{names[oa]}x{names[ob]}"


# -- Jacobian side ----------------------------------------------------------


def _det3(rows: Sequence[Sequence[FieldElement]]) -> FieldElement:
    (a, b, c), (d, e, f), (g, h, i) = rows
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def delta(s: QuadraticSplitting, field: Fp2 | None = None) -> FieldElement:
    """Determinant of the coefficient matrix of the three quadratics.

    Rows are (constant, linear, quadratic) coefficients; a pair containing
    infinity contributes its degree-1 polynomial padded with a zero.
    """
    field = field or next(q.field for pr in s.pairs for q in pr if q is not INF)
    return _det3([[g[0], g[1], g[2]] for g in s.quadratics(field)])


def _quadratic_roots(c0: FieldElement, c1: FieldElement, c2: FieldElement) -> list[Point]:
    if not c2:
        if not c1:
            raise ArithmeticError("degenerate Richelot factor")
        return [INF, -c0 / c1]
    disc = c1 * c1 - 4 * c2 * c0
    s = disc.sqrt()
    if s is None:
        raise ArithmeticError("Richelot factor does not split over F_p^2")
    if not s:
        raise ArithmeticError("Richelot factor has a double root")
    two_a = 2 * c2
    return [(-c1 + s) / two_a, (-c1 - s) / two_a]


@dataclass(frozen=True, eq=False)
class RichelotStep:
    target: PPAS
    # candidate kernel of the dual isogeny, in the target's own labelling
    dual: QuadraticSplitting | ProductSplitting | None
    decomposed: bool


def _jacobian_step(curve: Genus2Curve, s: QuadraticSplitting) -> RichelotStep:
    field = curve.field
    if INF in curve.branch:
        sextic, m = curve.sextic_model()
        return _jacobian_step(sextic, s.transform(m))
    gs = s.quadratics(field)
    d = _det3([[g[0], g[1], g[2]] for g in gs])
    if not d:
        return _decomposed_step(field, s)
    hs = []
    for j, k in ((1, 2), (2, 0), (0, 1)):
        gj, gk = gs[j], gs[k]
        b, c = gj[1], gj[0]
        e, f = gk[1], gk[0]
        hs.append((b * f - c * e, 2 * (f - c), e - b))
    roots = [_quadratic_roots(*h) for h in hs]
    f_new = Poly(field, [d.inverse()])
    for h in hs:
        f_new = f_new * Poly(field, h)
    image = Genus2Curve(f_new, [q for pr in roots for q in pr])
    dual = QuadraticSplitting(tuple(tuple(pr) for pr in roots))
    return RichelotStep(Jacobian(image), dual, False)


def _decomposed_step(field: Fp2, s: QuadraticSplitting) -> RichelotStep:
    (q1, q2), (q3, q4), (q5, q6) = s.pairs
    sigma = MobiusMap.from_three_points((q1, q2, q3), (q2, q1, q4))
    if not (sigma(q4) == q3 and sigma(q5) == q6 and sigma(q6) == q5):
        raise ArithmeticError("vanishing determinant without a compatible involution")
    u, v = sigma.fixed_points()
    norm = MobiusMap.from_three_points((u, v, q1), (field.zero, INF, field.one))
    r3, r5 = norm(q3), norm(q5)
    if not (norm(q2) == -1 and norm(q4) == -r3 and norm(q6) == -r5):
        raise ArithmeticError("could not normalise the splitting to the +-x frame")
    a, b = r3 * r3, r5 * r5
    lam = (b - a) / (1 - a)
    mu = (b - a) / (b * (1 - a))
    # labels 0, 1, 2 on each factor come from the a-, 1- and b-pairs
    dual = ProductSplitting(((0, 3), (1, 4), (2, 5)))
    return RichelotStep(Product(EllipticCurve(lam), EllipticCurve(mu)), dual, True)


# -- product side -----------------------------------------------------------


def _bijection_mu(v: Product, beta: Sequence[int]) -> FieldElement:
    return v.right.relabel(tuple(beta)).lam


def product_is_decomposed(v: Product, s: ProductSplitting) -> bool:
    """One pair inside each factor, or a bijection induced by an isomorphism E_L -> E_R."""
    beta = s.bijection()
    if beta is None:
        return True
    return _bijection_mu(v, beta) == v.left.lam


def glue(v: Product, s: ProductSplitting) -> Jacobian:
    """Jacobian codomain of a non-decomposed Richelot isogeny out of E_L x E_R."""
    return _product_step(v, s, require_glue=True).target


def _product_step(v: Product, s: ProductSplitting, require_glue: bool = False) -> RichelotStep:
    beta = s.bijection()
    if beta is None:
        if require_glue:
            raise ValueError("splitting is decomposed: it has a pair inside a factor")
        (left, right), = s.mixed()
        target = Product(v.left.quotient(left), v.right.quotient(right - 3))
        dual = ProductSplitting(((0, 3), (1, 2), (4, 5)))
        return RichelotStep(target, dual, True)
    lam = v.left.lam
    mu = _bijection_mu(v, beta)
    if lam == mu:
        if require_glue:
            raise ValueError("splitting is the graph of an isomorphism: decomposed")
        return RichelotStep(Product(v.left, v.right), None, True)
    a, b = ab_from_lambda_mu(lam, mu)
    curve = curve_ab(v.field, a, b)
    one = v.field.one
    ra, rb = a.sqrt(), b.sqrt()
    dual = QuadraticSplitting(((one, -one), (ra, -ra), (rb, -rb)))
    return RichelotStep(Jacobian(curve), dual, False)


def richelot_step(v: PPAS, s) -> RichelotStep:
    if isinstance(v, Jacobian):
        return _jacobian_step(v.curve, s)
    return _product_step(v, s)


def codomain(v: PPAS | Genus2Curve, s) -> PPAS:
    """Codomain of the Richelot isogeny with kernel s."""
    if isinstance(v, Genus2Curve):
        v = Jacobian(v)
    return richelot_step(v, s).target


def _isomorphic_vertices(x: PPAS, y: PPAS) -> bool:
    if isinstance(x, Jacobian) and isinstance(y, Jacobian):
        return is_isomorphic(x.curve, y.curve)
    if isinstance(x, Product) and isinstance(y, Product):
        return x.key == y.key
    return False


def dual_splitting(v: PPAS | Genus2Curve, s, image: PPAS | None = None):
    """Kernel on the image whose Richelot codomain is isomorphic to the source.

    The candidate read off from the construction is tried first, then the
    remaining splittings of the image.
    """
    if isinstance(v, Genus2Curve):
        v = Jacobian(v)
    step = richelot_step(v, s)
    if image is None:
        image = step.target
    if isinstance(image, Jacobian):
        candidates = splittings(image.curve)
    else:
        candidates = product_splittings()
    if step.dual in candidates and image is step.target:
        candidates.remove(step.dual)
        candidates.insert(0, step.dual)
    for t in candidates:
        if _isomorphic_vertices(codomain(image, t), v):
            return t
    raise ArithmeticError("no dual Richelot isogeny found")


# -- orbits -----------------------------------------------------------------


def _closure(gens: list[tuple[int, ...]], n: int) -> list[tuple[int, ...]]:
    ident = tuple(range(n))
    group = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                gh = tuple(h[g[i]] for i in range(n))
                if gh not in group:
                    group.add(gh)
                    nxt.append(gh)
        frontier = nxt
    return sorted(group)


def _act(perm: Sequence[int], pairs) -> tuple:
    return tuple(sorted(tuple(sorted((perm[a], perm[b]))) for a, b in pairs))


def _orbits(perms: list[tuple[int, ...]], partitions: list[tuple]) -> list[list[tuple]]:
    seen = set()
    out = []
    for part in partitions:
        if part in seen:
            continue
        orbit = sorted({_act(g, part) for g in perms})
        seen.update(orbit)
        out.append(orbit)
    return out


def product_symmetries(v: Product) -> list[tuple[int, ...]]:
    """Permutations of labels 0..5 induced by polarised automorphisms of E_L x E_R."""
    gens = []
    for perm in v.left.two_torsion_symmetries():
        gens.append(tuple(perm) + (3, 4, 5))
    for perm in v.right.two_torsion_symmetries():
        gens.append((0, 1, 2) + tuple(3 + i for i in perm))
    if v.left.j == v.right.j:
        rho = next(r for r in permutations(range(3)) if v.right.relabel(r).lam == v.left.lam)
        swap = [0] * 6
        for i in range(3):
            swap[i] = 3 + rho[i]
            swap[3 + rho[i]] = i
        gens.append(tuple(swap))
    return _closure(gens, 6)


@dataclass(frozen=True)
class Orbit:
    splittings: tuple
    decomposed: bool

    @property
    def size(self) -> int:
        return len(self.splittings)


def orbit_decomposition(v: PPAS | Genus2Curve) -> list[Orbit]:
    """Orbits of the 15 kernels under the vertex's automorphisms."""
    if isinstance(v, Genus2Curve):
        v = Jacobian(v)
    if isinstance(v, Jacobian):
        curve = v.curve
        perms = sorted({curve.permutation(g) for g in curve.reduced_automorphisms})
        index_parts = [tuple(sorted(m)) for m in MATCHINGS]
        out = []
        b = curve.branch
        for orbit in _orbits(perms, index_parts):
            members = tuple(QuadraticSplitting(tuple((b[i], b[j]) for i, j in part)) for part in orbit)
            flags = {not delta(s, curve.field) for s in members}
            if len(flags) != 1:
                raise ArithmeticError("orbit mixes decomposed and non-decomposed kernels")
            out.append(Orbit(members, flags.pop()))
        return out
    perms = product_symmetries(v)
    out = []
    for orbit in _orbits(perms, [tuple(sorted(m)) for m in MATCHINGS]):
        members = tuple(ProductSplitting(part) for part in orbit)
        flags = {product_is_decomposed(v, s) for s in members}
        if len(flags) != 1:
            raise ArithmeticError("orbit mixes decomposed and non-decomposed kernels")
        out.append(Orbit(members, flags.pop()))
    return out


Signature = tuple[tuple[tuple[int, int], ...], tuple[tuple[int, int], ...]]


def orbit_signature(orbits: Iterable[Orbit]) -> Signature:
    """((size, count), ...) for non-decomposed orbits, then for decomposed ones."""
    orbits = list(orbits)
    nd = Counter(o.size for o in orbits if not o.decomposed)
    dc = Counter(o.size for o in orbits if o.decomposed)
    return tuple(sorted(nd.items())), tuple(sorted(dc.items()))


def format_signature(sig: Signature) -> str:
    def part(items):
        return "(" + ", ".join(f"{s}x{c}" for s, c in items) + ")" if items else "(0)"

    return part(sig[0]) + part(sig[1])
