"""Command-line interface: ``superspecial {graph,verify,count,enumerate,classify}``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence, TextIO

from . import __version__
from .arith import Fp2, Poly, is_prime
from .counting import count_report
from .genus2 import Genus2Curve
from .graph import build_graph, export_dot, export_json, verify_counts
from .richelot import delta, splittings

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _prime(text: str) -> int:
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if p <= 5 or not is_prime(p):
        raise argparse.ArgumentTypeError(f"expected a prime greater than 5, got {p}")
    return p


def parse_range(text: str) -> tuple[int, int]:
    """"7..13" -> (7, 13); a single number is a one-element range."""
    lo, sep, hi = text.partition("..")
    try:
        a = int(lo)
        b = int(hi) if sep else a
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed range {text!r}, expected e.g. 7..13") from None
    if a > b:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    if a <= 5:
        raise argparse.ArgumentTypeError(f"range must start above 5, got {a}")
    return a, b


def format_poly(f: Poly) -> str:
    """x^6 + (2+1*t)*x + 3 style, highest degree first."""
    terms = []
    for k in range(f.degree, -1, -1):
        c = f[k]
        if not c:
            continue
        mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
        coeff = str(c)
        if "t" in coeff:
            coeff = f"({coeff})"
        if not mono:
            terms.append(coeff)
        elif c == 1:
            terms.append(mono)
        else:
            terms.append(f"{coeff}*{mono}")
    return " + ".join(terms) or "0"


def _context(field: Fp2) -> str:
    return f"t^2 = r, r = {field.r}"


def _add_prime(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("prime_pos", nargs="?", type=_prime, metavar="P", help="prime p > 5")
    sub.add_argument("--prime", "-p", type=_prime, help="prime p > 5")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="superspecial",
        description="Superspecial genus-2 curves and Richelot isogeny graphs over F_{p^2}.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    cmds = parser.add_subparsers(dest="command", required=True)

    g = cmds.add_parser("graph", help="write the isogeny graph as DOT or JSON")
    _add_prime(g)
    g.add_argument("--format", choices=("dot", "json"), default="dot")
    g.add_argument("--output", "-o", type=Path, help="output file (default: stdout)")

    v = cmds.add_parser("verify", help="check graph counts against the closed formulas")
    v.add_argument("range", type=parse_range, help="prime range such as 7..13")

    c = cmds.add_parser("count", help="print the closed-form counts")
    _add_prime(c)

    e = cmds.add_parser("enumerate", help="list all superspecial vertices")
    _add_prime(e)

    k = cmds.add_parser("classify", help="classify the curve y^2 = f(x)")
    _add_prime(k)
    k.add_argument("--curve", required=True, help="coefficients of f, comma separated, low degree first")
    return parser


def _get_prime(args) -> int:
    if args.prime is not None and args.prime_pos is not None and args.prime != args.prime_pos:
        raise UsageError(f"conflicting primes {args.prime_pos} and {args.prime}")
    p = args.prime if args.prime is not None else args.prime_pos
    if p is None:
        raise UsageError("a prime is required (positional or --prime)")
    return p


def cmd_graph(args, out: TextIO) -> int:
    g = build_graph(_get_prime(args))
    text = export_dot(g) if args.format == "dot" else export_json(g)
    if args.output is None:
        out.write(text)
    else:
        args.output.write_text(text)
    return EXIT_OK


def cmd_verify(args, out: TextIO) -> int:
    lo, hi = args.range
    ok = True
    for p in range(lo, hi + 1):
        if not is_prime(p):
            out.write(f"skipping {p}: not prime\n")
            continue
        report = verify_counts(p)
        ok &= report.passed
        out.write(f"p = {p}: {'PASS' if report.passed else 'FAIL'}\n")
        for check in report.checks:
            out.write(f"  {check}\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_count(args, out: TextIO) -> int:
    out.write(str(count_report(_get_prime(args))) + "\n")
    return EXIT_OK


def cmd_enumerate(args, out: TextIO) -> int:
    p = _get_prime(args)
    g = build_graph(p)
    out.write(_context(Fp2(p)) + "\n")
    for v in g.vertices.values():
        if v.kind == "jacobian":
            out.write(f"{v.label:5} y^2 = {format_poly(v.ppas.curve.f)}\n")
        else:
            out.write(f"{v.label:5} lambda = {v.ppas.left.lam}, {v.ppas.right.lam}\n")
    out.write(f"{len(g.jacobians())} Jacobians, {len(g.products())} products\n")
    return EXIT_OK


def cmd_classify(args, out: TextIO) -> int:
    p = _get_prime(args)
    field = Fp2(p)
    try:
        curve = Genus2Curve.parse(field, args.curve)
    except (ValueError, ArithmeticError) as exc:
        raise UsageError(f"cannot read curve {args.curve!r}: {exc}") from None
    n_dec = sum(1 for s in splittings(curve) if not delta(s))
    out.write(_context(field) + "\n")
    out.write(
        f"RA = {curve.ra_type.label}, long involutions = {len(curve.long_involutions)}, "
        f"superspecial = {str(curve.is_superspecial()).lower()}, decomposed splittings = {n_dec}\n"
    )
    return EXIT_OK


COMMANDS = {
    "graph": cmd_graph,
    "verify": cmd_verify,
    "count": cmd_count,
    "enumerate": cmd_enumerate,
    "classify": cmd_classify,
}


def _attach_curve_values(argv: list[str]) -> list[str]:
    # "--curve -1,0,..." would otherwise be read as an unknown option
    out = []
    i = 0
    while i < len(argv):
        if argv[i] == "--curve" and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"--curve={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    argv = _attach_curve_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        err.write(f"superspecial: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
