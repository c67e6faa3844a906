"""Parameter sweeps, branch tracking, critical points and trajectory output."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Sequence

import numpy as np

from .charpoly import (
    DEFAULT_WIDTH,
    DegenerateFamilyError,
    IsolatedRoot,
    char_poly_family,
    discriminant_in_beta,
    isolate_real_roots,
    refine_root,
    square_free_factorization,
    sturm_sequence,
)
from .core import AffineFamily, UniPoly, as_rational
from .spectral import analyze, eigenvalues, value_key

__all__ = [
    "DEGENERACY",
    "EXCEPTIONAL",
    "Branch",
    "CriticalPoint",
    "EmitError",
    "parameter_grid",
    "spectrum_at",
    "match_assignment",
    "sweep",
    "critical_points",
    "emit_csv",
    "read_csv",
    "emit_svg",
]

DEGENERACY = "DEGENERACY"
EXCEPTIONAL = "EXCEPTIONAL"
MAX_STEPS = 10**6

# rank threshold (relative to ||H||) when classifying at an irrational parameter
_CLASSIFY_TOL = 1e-8
_CLUSTER_TOL = 1e-3


class EmitError(OSError):
    pass


@dataclass
class Branch:
    id: int
    betas: np.ndarray
    values: np.ndarray

    @property
    def samples(self) -> list[tuple[float, complex]]:
        return list(zip(self.betas.tolist(), self.values.tolist()))

    def part(self, which: str) -> np.ndarray:
        return self.values.real if which.upper() == "RE" else self.values.imag


@dataclass(frozen=True)
class CriticalPoint:
    beta: IsolatedRoot
    kind: str
    colliding_eigenvalue: Fraction | complex
    disc_multiplicity: int
    alg_mult: int
    geo_mult: int

    @property
    def beta_value(self) -> Fraction:
        return self.beta.midpoint


# ----------------------------------------------------------------------------
# sweep
# ----------------------------------------------------------------------------


def _to_rational(x) -> Fraction:
    # floats go through their shortest repr so -0.1 means -1/10
    if isinstance(x, float):
        return Fraction(repr(x))
    return as_rational(x)


def parameter_grid(beta_min, beta_max, steps: int) -> list[Fraction]:
    lo, hi = _to_rational(beta_min), _to_rational(beta_max)
    if not lo < hi:
        raise ValueError(f"empty parameter range [{lo}, {hi}]")
    if not 2 <= steps <= MAX_STEPS:
        raise ValueError(f"steps must be between 2 and {MAX_STEPS}, got {steps}")
    h = (hi - lo) / (steps - 1)
    return [lo + k * h for k in range(steps)]


def spectrum_at(fam: AffineFamily, beta) -> np.ndarray:
    """Eigenvalues of ``H(beta)`` with multiplicity, sorted by (re, im)."""
    vals = []
    for e in eigenvalues(fam.at(beta)):
        vals.extend([complex(e.value)] * e.alg_mult)
    return np.array(vals, dtype=complex)


@lru_cache(maxsize=None)
def _perms(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.intp)


def match_assignment(target: np.ndarray, new: np.ndarray) -> np.ndarray:
    """Permutation ``p`` minimising ``sum |target[i] - new[p[i]]|``.

    Exhaustive over all ``n!`` assignments; ties go to the lexicographically
    first permutation, so coincident values keep branch-id order.
    """
    n = len(target)
    perms = _perms(n)
    cost = np.abs(target[:, None] - new[None, :])
    totals = cost[np.arange(n), perms].sum(axis=1)
    return perms[int(np.argmin(totals))]


def _prediction(history: list[np.ndarray]) -> np.ndarray:
    if len(history) < 2:
        return history[-1]
    return 2 * history[-1] - history[-2]


def sweep(fam: AffineFamily, beta_min, beta_max, steps: int) -> list[Branch]:
    """Sample the spectrum on a uniform grid and connect it into branches.

    Each new sample is matched to the branches by optimal assignment against
    a linear extrapolation of the previous two points, which keeps branches
    straight through crossings.
    """
    grid = parameter_grid(beta_min, beta_max, steps)
    samples = [spectrum_at(fam, b) for b in grid]
    history = [samples[0]]
    for new in samples[1:]:
        p = match_assignment(_prediction(history), new)
        history.append(new[p])
    values = np.array(history)
    betas = np.array([float(b) for b in grid])
    return [Branch(i, betas, values[:, i].copy()) for i in range(fam.n)]


# ----------------------------------------------------------------------------
# critical points
# ----------------------------------------------------------------------------


def _clusters(vals: np.ndarray, tau: float) -> list[list[int]]:
    n = len(vals)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(vals[i] - vals[j]) <= tau:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [g for g in groups.values() if len(g) > 1]


def _classify_interval(fam: AffineFamily, root: IsolatedRoot, disc: UniPoly) -> list[CriticalPoint]:
    sqf = next(g for g, i in square_free_factorization(disc) if i == root.multiplicity)
    seq = sturm_sequence(sqf)
    lo, hi = root.lo, root.hi
    width = DEFAULT_WIDTH
    for _ in range(4):
        mid = (lo + hi) / 2
        H = np.array([[complex(x) for x in r] for r in fam.at(mid)], dtype=complex)
        hnorm = max(np.max(np.abs(H).sum(axis=1)), 1e-300)
        vals = spectrum_at(fam, mid)
        out, stable = [], True
        for group in _clusters(vals, _CLUSTER_TOL * (1 + hnorm)):
            lam = complex(np.mean(vals[group]))
            if abs(lam.imag) <= _CLUSTER_TOL * (1 + hnorm) and all(v.imag == 0 for v in vals[group]):
                lam = complex(lam.real, 0.0)
            sv = np.linalg.svd(H - lam * np.eye(len(H)), compute_uv=False)
            counts = {int(np.sum(sv <= f * _CLASSIFY_TOL * hnorm)) for f in (0.1, 1.0, 10.0)}
            if len(counts) != 1:
                stable = False
                break
            geo = min(counts.pop(), len(group))
            alg = len(group)
            kind = DEGENERACY if geo == alg else EXCEPTIONAL
            out.append(CriticalPoint(root, kind, lam, root.multiplicity, alg, geo))
        if stable and out:
            return out
        width = width / 2**20
        value, lo, hi = refine_root(sqf, seq, lo, hi, width)
        if value is not None:
            raise AssertionError("irrational root refined to a rational value")
        root = IsolatedRoot(lo, hi, root.multiplicity, None)
    raise ArithmeticError(f"could not classify the critical point near {float(root.midpoint):.12g}")


def critical_points(fam: AffineFamily) -> list[CriticalPoint]:
    """Real parameters where eigenvalues collide, classified as degeneracy or EP."""
    disc = discriminant_in_beta(char_poly_family(fam))
    if disc.is_zero():
        raise DegenerateFamilyError("degenerate family everywhere: discriminant is identically zero")
    out = []
    for root in isolate_real_roots(disc):
        if root.is_exact:
            report = analyze(fam.at(root.value))
            for e in report.eigenvalues:
                if e.alg_mult >= 2:
                    kind = DEGENERACY if e.geo_mult == e.alg_mult else EXCEPTIONAL
                    out.append(CriticalPoint(root, kind, e.value, root.multiplicity, e.alg_mult, e.geo_mult))
        else:
            out.extend(_classify_interval(fam, root, disc))
    out.sort(key=lambda c: (c.beta.midpoint, value_key(c.colliding_eigenvalue)))
    return out


# ----------------------------------------------------------------------------
# output
# ----------------------------------------------------------------------------


def _f17(x: float) -> str:
    return format(float(x) + 0.0, ".17g")


def emit_csv(branches: Sequence[Branch], criticals: Sequence[CriticalPoint], path) -> Path:
    path = Path(path)
    lines = ["# ep-scan v1", "[branches]", "beta,branch_id,re,im"]
    if branches:
        betas = branches[0].betas
        for k in range(len(betas)):
            for br in sorted(branches, key=lambda b: b.id):
                z = br.values[k]
                lines.append(f"{_f17(br.betas[k])},{br.id},{_f17(z.real)},{_f17(z.imag)}")
    if criticals:
        lines.append("[criticals]")
        lines.append("beta,kind,lambda_re,lambda_im,alg_mult,geo_mult,disc_mult")
        for c in criticals:
            lam = complex(c.colliding_eigenvalue)
            lines.append(
                f"{_f17(float(c.beta.midpoint))},{c.kind},{_f17(lam.real)},{_f17(lam.imag)},"
                f"{c.alg_mult},{c.geo_mult},{c.disc_multiplicity}"
            )
    try:
        path.write_text("\n".join(lines) + "\n")
    except OSError as exc:
        raise EmitError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def read_csv(path) -> tuple[list[tuple[float, int, complex]], list[dict]]:
    """Parse a file written by :func:`emit_csv`."""
    rows, crits, section = [], [], None
    for line in Path(path).read_text().splitlines():
        if not line or line.startswith("#"):
            continue
        if line.startswith("["):
            section = line.strip("[]")
            continue
        fields = line.split(",")
        if fields[0] == "beta":
            continue
        if section == "branches":
            rows.append((float(fields[0]), int(fields[1]), complex(float(fields[2]), float(fields[3]))))
        elif section == "criticals":
            crits.append(
                {
                    "beta": float(fields[0]),
                    "kind": fields[1],
                    "lambda": complex(float(fields[2]), float(fields[3])),
                    "alg_mult": int(fields[4]),
                    "geo_mult": int(fields[5]),
                    "disc_mult": int(fields[6]),
                }
            )
    return rows, crits


_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"]


def _nice_ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    span = hi - lo
    raw = span / target
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 5, 10) if m * mag >= raw)
    first = math.ceil(lo / step - 1e-9) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(0.0 if abs(t) < 1e-12 * step else t)
        t += step
    return ticks


def emit_svg(branches: Sequence[Branch], criticals: Sequence[CriticalPoint], path,
             part: str = "RE", width: int = 640, height: int = 480) -> Path:
    """Write one part (``RE`` or ``IM``) of the branches as a standalone SVG."""
    part = part.upper()
    if part not in ("RE", "IM"):
        raise ValueError(f"part must be RE or IM, got {part!r}")
    if not branches:
        raise ValueError("nothing to plot: no branches")
    path = Path(path)
    ml, mr, mt, mb = 64, 20, 36, 48
    pw, ph = width - ml - mr, height - mt - mb
    xs = branches[0].betas
    x0, x1 = float(xs[0]), float(xs[-1])
    ys = np.concatenate([b.part(part) for b in branches])
    y0, y1 = float(ys.min()), float(ys.max())
    if y1 - y0 < 1e-12:
        y0, y1 = y0 - 1.0, y1 + 1.0
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad

    def px(x):
        return ml + (x - x0) / (x1 - x0) * pw

    def py(y):
        return mt + (y1 - y) / (y1 - y0) * ph

    title = "Real part of the eigenvalues" if part == "RE" else "Imaginary part of the eigenvalues"
    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="yes"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="22" text-anchor="middle" font-family="sans-serif" '
        f'font-size="15">{title}</text>',
        f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for t in _nice_ticks(x0, x1):
        X = px(t)
        out.append(f'<line x1="{X:.2f}" y1="{mt + ph}" x2="{X:.2f}" y2="{mt + ph + 5}" stroke="black"/>')
        out.append(
            f'<text x="{X:.2f}" y="{mt + ph + 18}" text-anchor="middle" font-family="sans-serif" '
            f'font-size="11">{t:g}</text>'
        )
    for t in _nice_ticks(y0, y1):
        Y = py(t)
        out.append(f'<line x1="{ml - 5}" y1="{Y:.2f}" x2="{ml}" y2="{Y:.2f}" stroke="black"/>')
        out.append(
            f'<text x="{ml - 8}" y="{Y + 4:.2f}" text-anchor="end" font-family="sans-serif" '
            f'font-size="11">{t:g}</text>'
        )
    out.append(
        f'<text x="{ml + pw / 2:.1f}" y="{height - 8}" text-anchor="middle" font-family="sans-serif" '
        f'font-size="13">beta</text>'
    )
    for br in sorted(branches, key=lambda b: b.id):
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(br.betas, br.part(part)))
        color = _COLORS[br.id % len(_COLORS)]
        out.append(
            f'<polyline id="branch-{br.id}" fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>'
        )
    for c in criticals:
        b = float(c.beta.midpoint)
        if not x0 <= b <= x1:
            continue
        lam = complex(c.colliding_eigenvalue)
        y = lam.real if part == "RE" else lam.imag
        X, Y = px(b), py(y)
        if c.kind == DEGENERACY and part == "RE":
            out.append(f'<circle class="degeneracy" cx="{X:.2f}" cy="{Y:.2f}" r="5" fill="none" stroke="black"/>')
        elif c.kind == EXCEPTIONAL:
            out.append(
                f'<g class="exceptional-point" stroke="black" stroke-width="1.5">'
                f'<line x1="{X - 5:.2f}" y1="{Y - 5:.2f}" x2="{X + 5:.2f}" y2="{Y + 5:.2f}"/>'
                f'<line x1="{X - 5:.2f}" y1="{Y + 5:.2f}" x2="{X + 5:.2f}" y2="{Y - 5:.2f}"/></g>'
            )
    out.append("</svg>")
    try:
        path.write_text("\n".join(out) + "\n")
    except OSError as exc:
        raise EmitError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path
