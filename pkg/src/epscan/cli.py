"""Command-line front end.

Exit codes: 0 success, 2 input/parse error, 3 mathematical refusal
(ill-posed Jordan structure, degenerate family, ...), 4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from fractions import Fraction
from pathlib import Path

from .charpoly import DegenerateFamilyError, char_poly_family, discriminant_in_beta
from .core import AffineFamily, DimensionError, as_rational, paper_family
from .jordan import IllPosedJordanError, JordanStructureError, jordan_decomposition
from .report import critical_doc, family_doc, jordan_doc, render, spectral_doc, symmetry_doc
from .spectral import MAX_DIM, RESIDUAL_TOL, ConvergenceError, NumericalError, analyze
from .sweep import EmitError, critical_points, emit_csv, emit_svg, sweep
from .symmetry import check_eigenvector_symmetry, invariance_group

log = logging.getLogger("epscan")

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_MATH = 3
EXIT_IO = 4

PRESETS = {"paper": paper_family}


class InputError(ValueError):
    pass


# ----------------------------------------------------------------------------
# input parsing
# ----------------------------------------------------------------------------


def parse_rational(text: str) -> Fraction:
    """``-5/4``, ``0.25``, ``1e-3`` -> exact rational (decimals by digits)."""
    try:
        return as_rational(str(text))
    except (ValueError, TypeError) as exc:
        raise InputError(f"not a rational number: {text!r}") from exc


def parse_range(text: str) -> tuple[Fraction, Fraction]:
    parts = text.split(":")
    if len(parts) != 2:
        raise InputError(f"range must look like LO:HI, got {text!r}")
    lo, hi = parse_rational(parts[0]), parse_rational(parts[1])
    if not lo < hi:
        raise InputError(f"empty range {text!r}")
    return lo, hi


def _entry(x, where: str) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise InputError(f"{where}: entries must be integers or 'p/q' strings, got {x!r}")
    try:
        return as_rational(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{where}: {exc}") from exc


def _matrix(obj, n: int, key: str) -> list[list[Fraction]]:
    if not isinstance(obj, list) or len(obj) != n:
        raise InputError(f"{key}: expected {n} rows")
    rows = []
    for i, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != n:
            raise InputError(f"{key}[{i}]: expected {n} entries")
        rows.append([_entry(x, f"{key}[{i}][{j}]") for j, x in enumerate(row)])
    return rows


def family_from_json(text: str, source: str = "<input>") -> AffineFamily:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise InputError(f"{source}: expected a JSON object")
    n = obj.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or not 1 <= n <= MAX_DIM:
        raise InputError(f"{source}: 'n' must be an integer between 1 and {MAX_DIM}")
    if "A" not in obj:
        raise InputError(f"{source}: missing 'A'")
    A = _matrix(obj["A"], n, "A")
    B = _matrix(obj["B"], n, "B") if "B" in obj else None
    name = obj.get("name")
    if name is not None and not isinstance(name, str):
        raise InputError(f"{source}: 'name' must be a string")
    return AffineFamily(A, B, name=name or Path(source).stem)


def load_family(name: str) -> AffineFamily:
    """A preset name or a path to a family JSON file."""
    if name in PRESETS:
        return PRESETS[name]()
    path = Path(name)
    if not path.exists():
        raise InputError(f"unknown family {name!r} (not a preset, no such file)")
    try:
        text = path.read_text()
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror}") from exc
    return family_from_json(text, str(path))


# ----------------------------------------------------------------------------
# commands
# ----------------------------------------------------------------------------


def cmd_analyze(fam: AffineFamily, beta, tol: float = RESIDUAL_TOL, jordan: str = "auto") -> dict:
    """Spectral report at one parameter; Jordan data when defective (or always)."""
    beta = as_rational(beta)
    m = fam.at(beta)
    report = analyze(m, tol=tol)
    doc = {
        "command": "analyze",
        "family": family_doc(fam),
        "beta": str(beta),
        "matrix": [[str(x) for x in r] for r in m],
        "spectrum": spectral_doc(report),
    }
    if jordan == "always" or (jordan == "auto" and not report.diagonalizable):
        doc["jordan"] = jordan_doc(jordan_decomposition(m))
    return doc


def cmd_jordan(fam: AffineFamily, beta, tol: float = RESIDUAL_TOL) -> dict:
    # decompose first so an ill-posed cluster is reported as such
    jordan_decomposition(fam.at(as_rational(beta)))
    doc = cmd_analyze(fam, beta, tol, jordan="always")
    doc["command"] = "jordan"
    return doc


def cmd_critical(fam: AffineFamily) -> dict:
    disc = discriminant_in_beta(char_poly_family(fam))
    cps = critical_points(fam)
    doc = {"command": "critical", "family": family_doc(fam)}
    doc.update(critical_doc(cps, disc))
    return doc


def cmd_symmetry(fam: AffineFamily, beta) -> dict:
    beta = as_rational(beta)
    m = fam.at(beta)
    g = invariance_group(m)
    inv = check_eigenvector_symmetry(m, g, analyze(m))
    return {
        "command": "symmetry",
        "family": family_doc(fam),
        "beta": str(beta),
        "matrix": [[str(x) for x in r] for r in m],
        "symmetry": symmetry_doc(g, inv),
    }


def cmd_sweep(fam: AffineFamily, beta_min, beta_max, steps: int, out_csv=None,
              out_svg_re=None, out_svg_im=None, width: int = 640, height: int = 480) -> dict:
    branches = sweep(fam, beta_min, beta_max, steps)
    try:
        cps = critical_points(fam)
    except DegenerateFamilyError:
        cps = []
    if out_csv:
        emit_csv(branches, cps, out_csv)
    if out_svg_re:
        emit_svg(branches, cps, out_svg_re, "RE", width, height)
    if out_svg_im:
        emit_svg(branches, cps, out_svg_im, "IM", width, height)
    doc = {
        "command": "sweep",
        "family": family_doc(fam),
        "range": [str(as_rational(beta_min)), str(as_rational(beta_max))],
        "steps": steps,
        "outputs": {"csv": out_csv and str(out_csv), "svg_re": out_svg_re and str(out_svg_re),
                    "svg_im": out_svg_im and str(out_svg_im)},
    }
    doc.update(critical_doc(cps))
    return doc


# ----------------------------------------------------------------------------
# argument handling
# ----------------------------------------------------------------------------

_VALUE_FLAGS = ("--beta", "--range")
_NEGATIVE = re.compile(r"^-[\d.]")


def _join_negative_values(argv: list[str]) -> list[str]:
    # argparse treats "-5/4" as an option; glue such values to their flag
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) and _NEGATIVE.match(argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ep-scan",
        description="Locate and classify eigenvalue collisions in H(beta) = A + beta*B.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, beta: bool):
        p.add_argument("--family", default="paper", help="preset name or family JSON file")
        if beta:
            p.add_argument("--beta", required=True, help="parameter value, e.g. -5/4 or 0.25")
        p.add_argument("--json", metavar="PATH", help="also write the report as JSON")
        p.add_argument("--tol", type=float, default=RESIDUAL_TOL,
                       help="numeric residual tolerance (default %(default)g)")

    common(sub.add_parser("analyze", help="spectrum, multiplicities, diagonalizability"), True)
    common(sub.add_parser("jordan", help="Jordan decomposition at one parameter"), True)
    common(sub.add_parser("critical", help="all real critical parameters"), False)
    common(sub.add_parser("symmetry", help="permutation invariance group"), True)
    p = sub.add_parser("sweep", help="trace eigenvalue branches over a range")
    common(p, False)
    p.add_argument("--range", default="-2:2", help="LO:HI (default %(default)s)")
    p.add_argument("--steps", type=int, default=401)
    p.add_argument("--csv", metavar="PATH")
    p.add_argument("--svg-re", metavar="PATH")
    p.add_argument("--svg-im", metavar="PATH")
    p.add_argument("--width", type=int, default=640)
    p.add_argument("--height", type=int, default=480)
    return parser


def parse_args(argv: list[str]) -> argparse.Namespace:
    return build_parser().parse_args(_join_negative_values(list(argv)))


def run(args) -> dict:
    fam = load_family(args.family)
    if args.command == "analyze":
        return cmd_analyze(fam, parse_rational(args.beta), args.tol)
    if args.command == "jordan":
        return cmd_jordan(fam, parse_rational(args.beta), args.tol)
    if args.command == "critical":
        return cmd_critical(fam)
    if args.command == "symmetry":
        return cmd_symmetry(fam, parse_rational(args.beta))
    lo, hi = parse_range(args.range)
    if not 2 <= args.steps <= 10**6:
        raise InputError("--steps must be between 2 and 1000000")
    if args.width < 100 or args.height < 100:
        raise InputError("--width and --height must be at least 100")
    return cmd_sweep(fam, lo, hi, args.steps, args.csv, args.svg_re, args.svg_im,
                     args.width, args.height)


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        doc = run(args)
    except (InputError, DimensionError) as exc:
        print(f"ep-scan: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DegenerateFamilyError, IllPosedJordanError, JordanStructureError,
            ConvergenceError, NumericalError, ArithmeticError) as exc:
        print(f"ep-scan: refused: {exc}", file=sys.stderr)
        return EXIT_MATH
    except OSError as exc:
        print(f"ep-scan: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    print(render(doc))
    if args.json:
        try:
            Path(args.json).write_text(json.dumps(doc, indent=2) + "\n")
        except OSError as exc:
            print(f"ep-scan: I/O error: cannot write {args.json}: {exc.strerror}", file=sys.stderr)
            return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
