"""Superspecial genus-2 curves and their Richelot isogeny graphs over F_{p^2}."""

__version__ = "0.1.0"

from .arith import Fp2, FieldElement, Poly  # noqa: E402
from .counting import CountReport, count_report, n_counts, theorem_62, theorem_64  # noqa: E402
from .elliptic import EllipticCurve, class_numbers, supersingular_data  # noqa: E402
from .genus2 import Genus2Curve, IgusaKey, MobiusMap, RAType  # noqa: E402
from .graph import IsogenyGraph, build_graph, enumerate_vertices, verify_counts  # noqa: E402
from .richelot import Jacobian, Product, codomain, orbit_decomposition, splittings  # noqa: E402

__all__ = [
    "CountReport",
    "EllipticCurve",
    "FieldElement",
    "Fp2",
    "Genus2Curve",
    "IgusaKey",
    "IsogenyGraph",
    "Jacobian",
    "MobiusMap",
    "Poly",
    "Product",
    "RAType",
    "build_graph",
    "class_numbers",
    "codomain",
    "count_report",
    "enumerate_vertices",
    "n_counts",
    "orbit_decomposition",
    "splittings",
    "supersingular_data",
    "theorem_62",
    "theorem_64",
    "verify_counts",
]
