"""JSON-compatible report documents and their plain-text rendering.

Rationals are always serialized as ``"p/q"`` strings (integers as ``"p"``),
never as floats.  Numeric complex values become ``{"re": ..., "im": ...}``.
"""

from __future__ import annotations

from fractions import Fraction

from .charpoly import square_free_factorization
from .core import AffineFamily, Matrix, UniPoly, is_exact
from .jordan import JordanDecomposition
from .spectral import SpectralReport
from .sweep import CriticalPoint
from .symmetry import SymmetryGroup, perm_matrix

__all__ = [
    "scalar_doc",
    "parse_scalar",
    "family_doc",
    "spectral_doc",
    "jordan_doc",
    "critical_doc",
    "symmetry_doc",
    "fmt_scalar",
    "render",
]


def scalar_doc(x):
    if is_exact(x):
        return str(Fraction(x))
    z = complex(x)
    return {"re": z.real + 0.0, "im": z.imag + 0.0}


def parse_scalar(d):
    """Inverse of :func:`scalar_doc`."""
    if isinstance(d, str):
        return Fraction(d)
    return complex(d["re"], d["im"])


def _vec(v) -> list:
    return [scalar_doc(x) for x in v]


def _mat(m: Matrix) -> list:
    return [_vec(r) for r in m]


def _poly(p: UniPoly) -> list:
    return [scalar_doc(c) for c in p.coeffs]


def family_doc(fam: AffineFamily) -> dict:
    return {"n": fam.n, "A": _mat(fam.A), "B": _mat(fam.B), "name": fam.name}


def spectral_doc(report: SpectralReport) -> dict:
    return {
        "backend": report.backend,
        "diagonalizable": report.diagonalizable,
        "eigenvalues": [
            {
                "value": scalar_doc(e.value),
                "alg_mult": e.alg_mult,
                "geo_mult": e.geo_mult,
                "eigenspace": [_vec(v) for v in e.eigenspace],
            }
            for e in report.eigenvalues
        ],
    }


def jordan_doc(dec: JordanDecomposition) -> dict:
    return {
        "exact": dec.exact,
        "blocks": [{"eigenvalue": scalar_doc(v), "size": k} for v, k in dec.block_structure],
        "S": _mat(dec.S),
        "J": _mat(dec.J),
    }


def _beta_doc(c: CriticalPoint):
    if c.beta.is_exact:
        return scalar_doc(c.beta.value)
    return {"lo": str(c.beta.lo), "hi": str(c.beta.hi), "approx": float(c.beta.midpoint)}


def critical_doc(criticals, disc: UniPoly | None = None) -> dict:
    doc = {
        "critical_points": [
            {
                "beta": _beta_doc(c),
                "kind": c.kind,
                "lambda": scalar_doc(c.colliding_eigenvalue),
                "alg_mult": c.alg_mult,
                "geo_mult": c.geo_mult,
                "disc_mult": c.disc_multiplicity,
            }
            for c in criticals
        ]
    }
    if disc is not None:
        doc["discriminant"] = {
            "coeffs": _poly(disc),
            "factors": [
                {"coeffs": _poly(g), "multiplicity": k} for g, k in square_free_factorization(disc)
            ],
        }
    return doc


def symmetry_doc(g: SymmetryGroup, invariance: dict | None = None) -> dict:
    doc = {
        "order": g.order,
        "label": g.label,
        "elements": [p.one_line() for p in g.elements],
        "generators": [p.one_line() for p in g.generators],
    }
    if g.order <= 24:
        doc["matrices"] = [[[int(x) for x in r] for r in perm_matrix(p)] for p in g.elements]
        doc["cayley_table"] = [list(r) for r in g.cayley_table]
    if invariance is not None:
        doc["eigenspace_invariance"] = [
            {"eigenvalue": scalar_doc(k), "invariant": v} for k, v in invariance.items()
        ]
    return doc


# ----------------------------------------------------------------------------
# plain text
# ----------------------------------------------------------------------------


def fmt_scalar(x) -> str:
    """Exact rationals as ``p/q``; floats with 12 significant digits."""
    if isinstance(x, str):
        return x
    if isinstance(x, dict):
        x = parse_scalar(x)
    if is_exact(x):
        return str(Fraction(x))
    z = complex(x)
    if z.imag == 0:
        return format(z.real + 0.0, ".12g")
    sign = "+" if z.imag >= 0 else "-"
    return f"{z.real + 0.0:.12g}{sign}{abs(z.imag):.12g}i"


def _fmt_vec(v) -> str:
    return "(" + ", ".join(fmt_scalar(x) for x in v) + ")"


def _fmt_mat(rows, indent="    ") -> list[str]:
    cells = [[fmt_scalar(x) for x in r] for r in rows]
    w = max(len(c) for r in cells for c in r)
    return [indent + "[ " + "  ".join(c.rjust(w) for c in r) + " ]" for r in cells]


def render(doc: dict) -> str:
    """Human-readable text for any command document."""
    out = []
    if "family" in doc:
        name = doc["family"].get("name") or "custom"
        out.append(f"family: {name} (n={doc['family']['n']})")
    if "beta" in doc:
        out.append(f"beta: {doc['beta']}")
    if "matrix" in doc:
        out.append("H(beta) =")
        out.extend(_fmt_mat(doc["matrix"]))
    sp = doc.get("spectrum")
    if sp:
        out.append(f"eigenvalues ({sp['backend'].lower()}):")
        for e in sp["eigenvalues"]:
            out.append(
                f"  {fmt_scalar(e['value'])}  alg={e['alg_mult']} geo={e['geo_mult']}"
            )
            for v in e["eigenspace"]:
                out.append(f"      {_fmt_vec(v)}")
        verdict = "diagonalizable" if sp["diagonalizable"] else "defective (not diagonalizable)"
        out.append(f"verdict: {verdict}")
    jd = doc.get("jordan")
    if jd:
        blocks = ", ".join(f"({fmt_scalar(b['eigenvalue'])}, {b['size']})" for b in jd["blocks"])
        out.append(f"jordan blocks: [{blocks}]")
        out.append("S =")
        out.extend(_fmt_mat(jd["S"]))
        out.append("J = S^-1 H S =")
        out.extend(_fmt_mat(jd["J"]))
    if "critical_points" in doc:
        if "discriminant" in doc:
            coeffs = doc["discriminant"]["coeffs"]
            poly = UniPoly([parse_scalar(c) for c in coeffs]).format("b")
            out.append(f"discriminant: {poly}")
        cps = doc["critical_points"]
        if not cps:
            out.append("no real critical points")
        for c in cps:
            b = c["beta"]
            bs = b if isinstance(b, str) else f"~{b['approx']:.12g} in [{b['lo']}, {b['hi']}]"
            out.append(
                f"  beta={bs}  {c['kind']}  lambda={fmt_scalar(c['lambda'])}  "
                f"alg={c['alg_mult']} geo={c['geo_mult']} disc_mult={c['disc_mult']}"
            )
    sy = doc.get("symmetry")
    if sy:
        out.append(f"invariance group: order {sy['order']}, {sy['label']}")
        out.append("  elements: " + " ".join(sy["elements"]))
        out.append("  generators: " + (" ".join(sy["generators"]) or "(none)"))
        for item in sy.get("eigenspace_invariance", []):
            out.append(
                f"  eigenspace {fmt_scalar(item['eigenvalue'])}: "
                f"{'invariant' if item['invariant'] else 'NOT invariant'}"
            )
    for key in ("csv", "svg_re", "svg_im"):
        if doc.get("outputs", {}).get(key):
            out.append(f"wrote {doc['outputs'][key]}")
    return "\n".join(out)
