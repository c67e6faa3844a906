"""Eigenvalues, eigenspaces and the diagonalizability verdict for one matrix.

Eigenvalues come from the exact characteristic polynomial.  Rational roots
are extracted exactly; the remaining roots are computed numerically with the
Aberth-Ehrlich iteration on each square-free factor, so a repeated
eigenvalue is always recognised as repeated, whatever its type.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .charpoly import char_poly, isolate_squarefree, square_free_factorization
from .core import Matrix, UniPoly, is_exact, nullspace

__all__ = [
    "EXACT",
    "NUMERIC",
    "MAX_DIM",
    "RANK_TOL",
    "RESIDUAL_TOL",
    "Eigenvalue",
    "SpectralReport",
    "ConvergenceError",
    "NotAnEigenvalueError",
    "NumericalError",
    "aberth",
    "polynomial_roots",
    "eigenvalues",
    "eigenspace",
    "analyze",
    "eigenvector_overlap",
    "value_key",
]

EXACT = "EXACT"
NUMERIC = "NUMERIC"
MAX_DIM = 8
RANK_TOL = 1e-8
RESIDUAL_TOL = 1e-10

_REAL_WIDTH = Fraction(1, 2**56)


class ConvergenceError(ArithmeticError):
    pass


class NotAnEigenvalueError(ValueError):
    pass


class NumericalError(ArithmeticError):
    """A numeric consistency check failed (residual or multiplicity bound)."""


def value_key(v) -> tuple:
    """Sort key (real part, imaginary part) valid for rationals and complex."""
    if is_exact(v):
        return (v, 0)
    return (v.real, v.imag)


@dataclass(frozen=True)
class Eigenvalue:
    value: Fraction | complex
    alg_mult: int
    geo_mult: int | None = None
    eigenspace: tuple = ()

    @property
    def is_exact(self) -> bool:
        return is_exact(self.value)

    @property
    def is_real(self) -> bool:
        return self.is_exact or self.value.imag == 0.0

    def __complex__(self) -> complex:
        return complex(self.value)


@dataclass(frozen=True)
class SpectralReport:
    eigenvalues: tuple[Eigenvalue, ...]
    diagonalizable: bool
    backend: str

    def values(self) -> list:
        """Eigenvalues repeated according to algebraic multiplicity."""
        return [e.value for e in self.eigenvalues for _ in range(e.alg_mult)]

    def find(self, value, tol: float = 1e-9) -> Eigenvalue:
        return _find(self.eigenvalues, value, tol)


def _find(eigs, value, tol):
    if is_exact(value):
        for e in eigs:
            if e.is_exact and e.value == value:
                return e
    best, dist = None, math.inf
    for e in eigs:
        d = abs(complex(e.value) - complex(value))
        if d < dist:
            best, dist = e, d
    if best is None or dist > tol * (1 + abs(complex(value))):
        raise NotAnEigenvalueError(f"{value} is not an eigenvalue")
    return best


# ----------------------------------------------------------------------------
# polynomial roots
# ----------------------------------------------------------------------------


def _horner(c_desc: np.ndarray, z: np.ndarray) -> np.ndarray:
    acc = np.full_like(z, c_desc[0])
    for c in c_desc[1:]:
        acc = acc * z + c
    return acc


def aberth(coeffs, tol: float = 1e-15, max_iter: int = 500) -> np.ndarray:
    """All complex roots of a polynomial by Aberth-Ehrlich iteration.

    ``coeffs`` are ascending.  Raises :class:`ConvergenceError` when the
    correction does not fall below ``tol`` (relative) within ``max_iter``
    sweeps.
    """
    c = np.asarray(coeffs, dtype=complex)
    n = len(c) - 1
    if n < 1:
        return np.empty(0, dtype=complex)
    c = c / c[-1]
    desc = c[::-1]
    ddesc = (desc[:-1] * np.arange(n, 0, -1))
    radius = 1.0 + np.max(np.abs(c[:-1]))
    # start inside the Cauchy disc, off the real axis to break symmetry
    ang = 2 * np.pi * np.arange(n) / n + 0.4
    z = 0.5 * radius * np.exp(1j * ang)
    off = ~np.eye(n, dtype=bool)
    absdesc = np.abs(desc)
    eps = np.finfo(float).eps
    for _ in range(max_iter):
        pz = _horner(desc, z)
        dpz = _horner(ddesc, z) if n > 1 else np.full_like(z, ddesc[0])
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(dpz != 0, pz / dpz, 0)
            diff = z[:, None] - z[None, :]
            inv = np.zeros_like(diff)
            inv[off] = 1.0 / diff[off]
            s = inv.sum(axis=1)
            w = ratio / (1 - ratio * s)
        w = np.where(np.isfinite(w), w, 1e-3 * radius)
        # a root is done when its step is tiny or its residual is at the
        # rounding level of the evaluation (close roots stall the step test)
        noise = 8 * eps * _horner(absdesc, np.abs(z)).real
        done = (np.abs(w) <= tol * (1 + np.abs(z))) | (np.abs(pz) <= noise)
        if np.all(done):
            break
        z = z - np.where(done, 0, w)
    else:
        res = float(np.max(np.abs(_horner(desc, z))))
        raise ConvergenceError(
            f"Aberth iteration did not converge after {max_iter} sweeps (max residual {res:.3e})"
        )
    return _polish(desc, ddesc, z)


def _polish(desc, ddesc, z):
    for _ in range(3):
        pz = _horner(desc, z)
        dpz = _horner(ddesc, z) if len(ddesc) > 1 else np.full_like(z, ddesc[0])
        with np.errstate(divide="ignore", invalid="ignore"):
            cand = np.where(dpz != 0, z - pz / dpz, z)
        better = np.abs(_horner(desc, cand)) < np.abs(pz)
        z = np.where(better & np.isfinite(cand), cand, z)
    return z


def _squarefree_roots(g: UniPoly) -> list:
    exact, real = [], []
    for value, lo, hi in isolate_squarefree(g, _REAL_WIDTH, relative=True):
        if value is not None:
            exact.append(value)
        else:
            real.append(complex(float((lo + hi) / 2), 0.0))
    h = g
    for r in exact:
        h = h.exact_div(UniPoly([-r, Fraction(1)]))
    n_complex = h.degree - len(real)
    roots = list(exact) + real
    if n_complex <= 0:
        return roots
    z = list(aberth([complex(c) for c in h.coeffs]))
    for r in real:
        k = min(range(len(z)), key=lambda i: abs(z[i] - r))
        z.pop(k)
    z.sort(key=lambda w: -w.imag)
    upper = z[: n_complex // 2]
    for w in upper:
        w = complex(w.real, abs(w.imag))
        roots.append(w)
        roots.append(w.conjugate())
    return roots


def polynomial_roots(p: UniPoly) -> list[tuple[Fraction | complex, int]]:
    """Roots of a rational polynomial with multiplicities, sorted by (re, im)."""
    out = []
    for g, mult in square_free_factorization(p):
        out.extend((r, mult) for r in _squarefree_roots(g))
    out.sort(key=lambda t: value_key(t[0]))
    return out


# ----------------------------------------------------------------------------
# eigen-data
# ----------------------------------------------------------------------------


def _check_dim(m: Matrix):
    if m.n > MAX_DIM:
        raise ValueError(f"dimension {m.n} exceeds the supported maximum {MAX_DIM}")


def eigenvalues(m: Matrix) -> list[Eigenvalue]:
    """Distinct eigenvalues with algebraic multiplicities (no eigenspaces)."""
    _check_dim(m)
    return [Eigenvalue(v, k) for v, k in polynomial_roots(char_poly(m))]


def _normalize(v) -> tuple:
    v = np.asarray(v, dtype=complex)
    v = v / np.linalg.norm(v)
    k = int(np.argmax(np.abs(v) > 1e-12 * np.max(np.abs(v))))
    phase = v[k] / abs(v[k])
    v = v / phase
    v[k] = complex(v[k].real, 0.0)
    return tuple(complex(x) for x in v)


def eigenspace(m: Matrix, lam, tol: float | None = None) -> list[tuple]:
    """Basis of ``null(m - lam*I)``.

    Exact for a rational ``lam`` (integer-primitive vectors); otherwise by
    elimination in complex floats with rank threshold ``RANK_TOL * ||m - lam*I||``,
    returning unit vectors whose first nonzero entry is positive real.
    """
    if is_exact(lam) and m.is_exact():
        basis = nullspace(m.shift(Fraction(lam)).rows)
    else:
        shifted = m.to_complex().shift(complex(lam))
        thr = (RANK_TOL if tol is None else tol) * max(shifted.norm_inf(), 1e-300)
        basis = [_normalize(v) for v in nullspace(shifted.rows, tol=thr)]
    if not basis:
        raise NotAnEigenvalueError(f"{lam} is not an eigenvalue (m - lam*I is nonsingular)")
    return basis


def _residual_ok(m: Matrix, lam, v, tol: float) -> bool:
    if is_exact(lam) and all(is_exact(x) for x in v):
        return all(x == 0 for x in m.shift(lam).apply(v))
    mc = np.array([[complex(a) for a in r] for r in m], dtype=complex)
    vc = np.array([complex(x) for x in v])
    r = mc @ vc - complex(lam) * vc
    bound = tol * np.max(np.abs(mc).sum(axis=1)) * np.max(np.abs(vc))
    return float(np.max(np.abs(r))) <= bound


def analyze(m: Matrix, tol: float = RESIDUAL_TOL) -> SpectralReport:
    """Full spectral report for a rational matrix."""
    out = []
    for e in eigenvalues(m):
        space = tuple(eigenspace(m, e.value))
        if len(space) > e.alg_mult:
            raise NumericalError(
                f"geometric multiplicity {len(space)} exceeds algebraic {e.alg_mult} at {e.value}"
            )
        for v in space:
            if not _residual_ok(m, e.value, v, tol):
                raise NumericalError(f"eigenvector residual above tolerance at {e.value}")
        out.append(Eigenvalue(e.value, e.alg_mult, len(space), space))
    diag = all(e.geo_mult == e.alg_mult for e in out)
    backend = EXACT if all(e.is_exact for e in out) else NUMERIC
    return SpectralReport(tuple(out), diag, backend)


def eigenvector_overlap(m: Matrix, lam1, lam2) -> float:
    """``|<v1, v2>| / (|v1| |v2|)`` for the eigenvectors of two simple eigenvalues."""
    report = analyze(m)
    e1, e2 = report.find(lam1), report.find(lam2)
    if e1 is e2:
        raise ValueError("both values refer to the same eigenvalue")
    for e in (e1, e2):
        if e.alg_mult != 1:
            raise ValueError(f"eigenvalue {e.value} is not simple (alg_mult={e.alg_mult})")
    v1 = np.array([complex(x) for x in e1.eigenspace[0]])
    v2 = np.array([complex(x) for x in e2.eigenspace[0]])
    c = abs(np.vdot(v1, v2)) / (np.linalg.norm(v1) * np.linalg.norm(v2))
    return float(min(c, 1.0))
