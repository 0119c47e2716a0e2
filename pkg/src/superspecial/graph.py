"""The superspecial Richelot isogeny graph in genus 2.

Vertices are found by a closure walk: start from every product of
supersingular curves and from the explicit superspecial families, follow
all 15 Richelot isogenies out of each vertex, and stop when no new vertex
key shows up.  The per-type counts are then compared with the closed
formulas, which certifies that nothing was missed.
"""

from __future__ import annotations

import json
import logging
import os
from collections import Counter, deque
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

from . import __version__
from .arith import Fp2, is_prime
from .counting import n_counts, theorem_62, theorem_64
from .elliptic import EllipticCurve, class_numbers, supersingular_data
from .genus2 import Genus2Curve, RAType, superspecial_family_curves
from .richelot import (
    PPAS,
    Jacobian,
    Product,
    orbit_decomposition,
    product_shape,
    product_splittings,
    richelot_step,
    splittings,
)

log = logging.getLogger(__name__)

__all__ = [
    "Check",
    "CountVerification",
    "Edge",
    "EnumerationError",
    "IsogenyGraph",
    "Vertex",
    "build_graph",
    "clear_cache",
    "enumerate_vertices",
    "export_dot",
    "export_json",
    "verify_counts",
]

CACHE_ENV = "SUPERSPECIAL_CACHE_DIR"


class EnumerationError(ArithmeticError):
    """The closure walk produced vertex counts that disagree with the formulas."""


def _check_prime(p: int) -> None:
    if not is_prime(p) or p <= 5:
        raise ValueError(f"expected a prime p > 5, got {p}")


# -- vertices ---------------------------------------------------------------


@dataclass(frozen=True)
class Vertex:
    key: str
    ppas: PPAS
    label: str  # RA type label for Jacobians, shape for products

    @property
    def kind(self) -> str:
        return "jacobian" if isinstance(self.ppas, Jacobian) else "product"

    @property
    def ra_type(self) -> RAType | None:
        return self.ppas.curve.ra_type if isinstance(self.ppas, Jacobian) else None

    @property
    def model(self) -> str:
        if isinstance(self.ppas, Jacobian):
            return self.ppas.curve.serialize()
        return f"{self.ppas.left.lam},{self.ppas.right.lam}"

    @property
    def display(self) -> str:
        return f"J(C): {self.label}" if self.kind == "jacobian" else self.label


def _make_vertex(v: PPAS) -> Vertex:
    if isinstance(v, Jacobian):
        return Vertex(v.key, v, v.curve.ra_type.label)
    v = v.canonical()
    return Vertex(v.key, v, product_shape(v))


def _all_splittings(v: PPAS) -> list:
    return splittings(v.curve) if isinstance(v, Jacobian) else product_splittings()


def _targets(v: PPAS) -> dict:
    """Splitting -> codomain vertex for all 15 splittings of v."""
    out = {}
    for s in _all_splittings(v):
        target = richelot_step(v, s).target
        out[s] = target.canonical() if isinstance(target, Product) else target
    return out


def _products(p: int) -> list[Product]:
    curves = supersingular_data(p).curves()
    return [Product(a, b) for i, a in enumerate(curves) for b in curves[i:]]


def _closure(p: int) -> tuple[dict[str, PPAS], dict[str, dict]]:
    found: dict[str, PPAS] = {}
    targets: dict[str, dict] = {}
    queue: deque[PPAS] = deque()

    def visit(v: PPAS) -> None:
        if v.key not in found:
            found[v.key] = v
            queue.append(v)

    for prod in _products(p):
        visit(prod)
    for curve in superspecial_family_curves(p):
        visit(Jacobian(curve))
    while queue:
        v = queue.popleft()
        targets[v.key] = _targets(v)
        for t in targets[v.key].values():
            visit(t)
    log.debug("closure at p=%d reached %d vertices", p, len(found))
    return found, targets


def _certify(p: int, vertices: Mapping[str, Vertex]) -> None:
    expected = n_counts(p)
    by_type = Counter(v.ra_type for v in vertices.values() if v.kind == "jacobian")
    bad = [
        f"{t.label} (found {by_type.get(t, 0)}, expected {expected[t.index]})"
        for t in RAType
        if by_type.get(t, 0) != expected[t.index]
    ]
    h = class_numbers(p)[0]
    n_prod = sum(1 for v in vertices.values() if v.kind == "product")
    if n_prod != h * (h + 1) // 2:
        bad.append(f"products (found {n_prod}, expected {h * (h + 1) // 2})")
    if bad:
        raise EnumerationError(f"vertex count mismatch at p={p}: " + "; ".join(bad))


def enumerate_vertices(p: int) -> list[Vertex]:
    """All superspecial principally polarised surfaces over F_{p^2}, sorted by key."""
    return list(build_graph(p).vertices.values())


# -- graph ------------------------------------------------------------------


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    raw_multiplicity: int
    reduced_count: int
    decomposed: bool
    orbit_sizes: tuple[int, ...] = ()  # raw multiplicity of each reduced class


@dataclass(frozen=True)
class IsogenyGraph:
    p: int
    vertices: Mapping[str, Vertex]
    edges: Mapping[tuple[str, str], Edge]

    @property
    def raw_edges(self) -> dict[tuple[str, str], int]:
        return {k: e.raw_multiplicity for k, e in self.edges.items()}

    @property
    def reduced_edges(self) -> dict[tuple[str, str], int]:
        return {k: e.reduced_count for k, e in self.edges.items()}

    def jacobians(self) -> list[Vertex]:
        return [v for v in self.vertices.values() if v.kind == "jacobian"]

    def products(self) -> list[Vertex]:
        return [v for v in self.vertices.values() if v.kind == "product"]

    def out_edges(self, key: str) -> list[Edge]:
        return [e for (s, _), e in self.edges.items() if s == key]

    def ra_distribution(self) -> tuple[int, ...]:
        c = Counter(v.ra_type for v in self.jacobians())
        return tuple(c.get(t, 0) for t in RAType)

    def reduced_totals(self, kind: str) -> tuple[int, int]:
        """(non-decomposed, decomposed) reduced out-edges summed over vertices of one kind."""
        nd = dec = 0
        for (s, _), e in self.edges.items():
            if self.vertices[s].kind != kind:
                continue
            if e.decomposed:
                dec += e.reduced_count
            else:
                nd += e.reduced_count
        return nd, dec

    @classmethod
    def from_json(cls, text: str) -> "IsogenyGraph":
        data = json.loads(text)
        p = data["p"]
        field = Fp2(p)
        vertices = {}
        for item in data["vertices"]:
            if item["kind"] == "jacobian":
                ppas = Jacobian(Genus2Curve.parse(field, item["model"]))
                label = item["ra_type"]
            else:
                lams = [field.parse(s) for s in item["model"].split(",")]
                ppas = Product(EllipticCurve(lams[0]), EllipticCurve(lams[1]))
                label = item["shape"]
            vertices[item["key"]] = Vertex(item["key"], ppas, label)
        edges = {}
        for item in data["edges"]:
            e = Edge(
                item["from"],
                item["to"],
                item["raw_multiplicity"],
                item["reduced_count"],
                item["decomposed"],
                tuple(item["orbit_sizes"]),
            )
            edges[(e.source, e.target)] = e
        return cls(p, MappingProxyType(vertices), MappingProxyType(edges))


def _build(p: int) -> IsogenyGraph:
    found, targets = _closure(p)
    vertices = {k: _make_vertex(found[k]) for k in sorted(found)}
    _certify(p, vertices)
    raw: Counter = Counter()
    sizes: dict[tuple[str, str], list[int]] = {}
    for key in vertices:
        # closure representatives, not the re-canonicalised vertex, own the splittings
        v = found[key]
        tmap = targets[key]
        for t in tmap.values():
            raw[(key, t.key)] += 1
        for orbit in orbit_decomposition(v):
            keys = {tmap[s].key for s in orbit.splittings}
            if len(keys) != 1:
                raise ArithmeticError(f"orbit at {key} reaches several vertices: {sorted(keys)}")
            sizes.setdefault((key, keys.pop()), []).append(orbit.size)
    edges = {
        k: Edge(k[0], k[1], raw[k], len(sizes[k]), vertices[k[1]].kind == "product", tuple(sorted(sizes[k])))
        for k in sorted(raw)
    }
    return IsogenyGraph(p, MappingProxyType(vertices), MappingProxyType(edges))


def _cache_path(p: int, cache_dir: str | os.PathLike | None) -> Path | None:
    root = cache_dir if cache_dir is not None else os.environ.get(CACHE_ENV)
    if not root:
        return None
    return Path(root) / f"graph-p{p}-v{__version__}.json"


@lru_cache(maxsize=None)
def _build_cached(p: int, cache_dir: str | None) -> IsogenyGraph:
    path = _cache_path(p, cache_dir)
    if path is not None and path.exists():
        try:
            return IsogenyGraph.from_json(path.read_text())
        except (ValueError, KeyError) as exc:
            log.warning("ignoring unreadable graph cache %s: %s", path, exc)
    g = _build(p)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(export_json(g))
        tmp.replace(path)
    return g


def build_graph(p: int, cache_dir: str | os.PathLike | None = None) -> IsogenyGraph:
    """Raw and reduced Richelot isogeny graph for p.

    Results are memoised in-process.  A JSON copy is kept on disk when
    ``cache_dir`` or the SUPERSPECIAL_CACHE_DIR environment variable is set.
    """
    _check_prime(p)
    return _build_cached(p, None if cache_dir is None else str(cache_dir))


# -- verification -----------------------------------------------------------


@dataclass(frozen=True)
class Check:
    name: str
    expected: object
    actual: object

    @property
    def passed(self) -> bool:
        return self.expected == self.actual

    def __str__(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag}  {self.name}: expected {self.expected}, got {self.actual}"


@dataclass(frozen=True)
class CountVerification:
    p: int
    checks: tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __str__(self) -> str:
        return "\n".join(str(c) for c in self.checks)


def verify_counts(p: int, graph: IsogenyGraph | None = None) -> CountVerification:
    """Compare the built graph with the closed-form counts."""
    g = graph if graph is not None else build_graph(p)
    checks = []
    dist = g.ra_distribution()
    for t in RAType:
        checks.append(Check(f"curves with RA type {t.label}", n_counts(p)[t.index], dist[t.index]))
    h = class_numbers(p)[0]
    checks.append(Check("products", h * (h + 1) // 2, len(g.products())))
    jac_nd, jac_dec = g.reduced_totals("jacobian")
    prod_nd, prod_dec = g.reduced_totals("product")
    total62, dec62 = theorem_62(p)
    nd64, dec64 = theorem_64(p)
    checks += [
        Check("isogenies from Jacobians", total62, jac_nd + jac_dec),
        Check("decomposed isogenies from Jacobians", dec62, jac_dec),
        Check("non-decomposed isogenies from products", nd64, prod_nd),
        Check("decomposed isogenies from products", dec64, prod_dec),
        Check("decomposed from Jacobians = non-decomposed from products", jac_dec, prod_nd),
    ]
    out_raw = Counter()
    for (s, _), e in g.edges.items():
        out_raw[s] += e.raw_multiplicity
    checks.append(Check("vertices with raw out-degree 15", len(g.vertices), sum(1 for k in g.vertices if out_raw[k] == 15)))
    asym = sum(1 for (a, b) in g.edges if (b, a) not in g.edges)
    checks.append(Check("reduced edges without a reverse edge", 0, asym))
    return CountVerification(p, tuple(checks))


# -- export -----------------------------------------------------------------


def export_json(g: IsogenyGraph) -> str:
    vertices = []
    for v in g.vertices.values():
        item = {"key": v.key, "kind": v.kind, "model": v.model}
        if v.kind == "jacobian":
            item["ra_type"] = v.label
        else:
            item["shape"] = v.label
            item["aut_pair"] = sorted((v.ppas.left.aut_order, v.ppas.right.aut_order))
        vertices.append(item)
    edges = [
        {
            "from": e.source,
            "to": e.target,
            "raw_multiplicity": e.raw_multiplicity,
            "reduced_count": e.reduced_count,
            "decomposed": e.decomposed,
            "orbit_sizes": list(e.orbit_sizes),
        }
        for e in g.edges.values()
    ]
    doc = {"p": g.p, "version": __version__, "vertices": vertices, "edges": edges}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(g: IsogenyGraph) -> str:
    """Graphviz digraph; one edge per reduced class, labelled with its raw multiplicity."""
    field = Fp2(g.p)
    lines = [
        f"// superspecial Richelot isogeny graph, p = {g.p}, t^2 = r, r = {field.r}",
        "digraph superspecial {",
    ]
    names = {k: f"v{i}" for i, k in enumerate(g.vertices)}
    for k, v in g.vertices.items():
        shape = "ellipse" if v.kind == "jacobian" else "box"
        lines.append(f"  {names[k]} [label={_dot_quote(v.display)}, shape={shape}, tooltip={_dot_quote(k)}];")
    for (a, b), e in g.edges.items():
        style = "dashed" if e.decomposed else "solid"
        for size in e.orbit_sizes:
            lines.append(f"  {names[a]} -> {names[b]} [label={size}, style={style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def clear_cache() -> None:
    """Forget in-process graphs (the disk cache is left alone)."""
    _build_cached.cache_clear()
