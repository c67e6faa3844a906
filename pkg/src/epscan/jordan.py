"""Jordan chains and Jordan decompositions ``S^-1 H S = J``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import Matrix, as_rational, is_exact, rank, solve, nullspace
from .spectral import MAX_DIM, RANK_TOL, eigenvalues, value_key

__all__ = [
    "JordanChain",
    "JordanDecomposition",
    "IllPosedJordanError",
    "JordanStructureError",
    "CLUSTER_TOL",
    "jordan_chain",
    "jordan_decomposition",
    "jordan_matrix",
]

CLUSTER_TOL = 1e-6
SIMILARITY_TOL = 1e-8


class IllPosedJordanError(ArithmeticError):
    """Distinct numeric eigenvalues too close to decide the Jordan structure."""


class JordanStructureError(ArithmeticError):
    """Internal inconsistency while building chains (rank decision failure)."""


@dataclass(frozen=True)
class JordanChain:
    eigenvalue: Fraction | complex
    vectors: tuple[tuple, ...]

    def __len__(self) -> int:
        return len(self.vectors)


@dataclass(frozen=True)
class JordanDecomposition:
    S: Matrix
    J: Matrix
    block_structure: tuple[tuple[Fraction | complex, int], ...]
    chains: tuple[JordanChain, ...]
    exact: bool

    @property
    def diagonal(self) -> bool:
        return all(size == 1 for _, size in self.block_structure)


def _vec_exact(v) -> bool:
    return all(is_exact(x) for x in v)


def _shifted(m: Matrix, lam, exact: bool) -> Matrix:
    if exact:
        return m.shift(as_rational(lam))
    return m.to_complex().shift(complex(lam))


def jordan_chain(m: Matrix, lam, v, max_len: int | None = None, min_len: int = 1) -> JordanChain:
    """Extend the eigenvector ``v`` to a chain ``v, x2, x3, ...`` with
    ``(m - lam I) x_{k+1} = x_k``.

    Each step takes the particular solution with free variables set to zero and
    stops when the system becomes inconsistent, when ``max_len`` is reached,
    or when the new vector is dependent on the chain.  Raises
    :class:`JordanStructureError` if the chain ends up shorter than ``min_len``.
    """
    exact = is_exact(lam) and m.is_exact() and _vec_exact(v)
    N = _shifted(m, lam, exact)
    max_len = m.n if max_len is None else max_len
    if exact:
        v = tuple(as_rational(x) for x in v)
        if any(x != 0 for x in N.apply(v)):
            raise ValueError("v is not an eigenvector for lam")
        if all(x == 0 for x in v):
            raise ValueError("v must be nonzero")
        tol = None
    else:
        v = tuple(complex(x) for x in v)
        nv = max(abs(x) for x in v)
        if nv == 0:
            raise ValueError("v must be nonzero")
        tol = RANK_TOL * max(N.norm_inf(), 1e-300)
        if max(abs(x) for x in N.apply(v)) > tol * nv:
            raise ValueError("v is not an eigenvector for lam")
    chain = [v]
    while len(chain) < max_len:
        rhs_tol = None if tol is None else tol * max(abs(x) for x in chain[-1])
        x = solve(N.rows, chain[-1], rhs_tol)
        if x is None:
            break
        vtol = None if tol is None else RANK_TOL * max(max(abs(c) for c in w) for w in chain + [x])
        if rank(chain + [list(x)], vtol) <= len(chain):
            break
        chain.append(tuple(x))
    if len(chain) < min_len:
        raise JordanStructureError(
            f"chain at {lam} has length {len(chain)}, expected at least {min_len}"
        )
    return JordanChain(lam, tuple(chain))


def _scale_chain_exact(vectors):
    den = 1
    for v in vectors:
        for x in v:
            den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [[int(x * den) for x in v] for v in vectors]
    g = 0
    for v in ints:
        for k in v:
            g = math.gcd(g, k)
    head_first = next(k for k in ints[0] if k != 0)
    if head_first < 0:
        g = -g
    return tuple(tuple(Fraction(k // g) for k in v) for v in ints)


def _chains_for(m: Matrix, lam, alg: int) -> list[tuple]:
    # top-down construction from the kernels of (m - lam I)^j
    exact = is_exact(lam)
    N = _shifted(m, lam, exact)
    n = m.n

    def tol_for(mat):
        return None if exact else RANK_TOL * max(mat.norm_inf(), 1e-300)

    def vtol(vs):
        if exact or not vs:
            return None
        return RANK_TOL * max(max(abs(c) for c in v) for v in vs)

    kernels = [[]]
    power = N
    while True:
        kernels.append(nullspace(power.rows, tol_for(power)))
        if len(kernels[-1]) >= alg:
            break
        if len(kernels) > n:
            raise JordanStructureError(f"generalized eigenspace at {lam} never reaches dimension {alg}")
        power = power @ N
    if len(kernels[-1]) != alg:
        raise JordanStructureError(
            f"generalized eigenspace at {lam} has dimension {len(kernels[-1])}, expected {alg}"
        )
    depth = len(kernels) - 1

    def apply_pow(v, k):
        for _ in range(k):
            v = N.apply(v)
        return v

    tops: dict[int, list] = {}
    for level in range(depth, 0, -1):
        base = [list(v) for v in kernels[level - 1]]
        for upper, ys in tops.items():
            base.extend(list(apply_pow(y, upper - level)) for y in ys)
        r = rank(base, vtol(base)) if base else 0
        for x in kernels[level]:
            trial = base + [list(x)]
            if rank(trial, vtol(trial)) > r:
                tops.setdefault(level, []).append(x)
                base = trial
                r += 1
    chains = []
    for level in sorted(tops, reverse=True):
        for x in tops[level]:
            vecs = [tuple(apply_pow(x, level - 1 - k)) for k in range(level)]
            if exact:
                vecs = _scale_chain_exact(vecs)
            else:
                s = max(max(abs(c) for c in v) for v in vecs)
                vecs = [tuple(c / s for c in v) for v in vecs]
            chains.append(tuple(vecs))
    if sum(len(c) for c in chains) != alg:
        raise JordanStructureError(f"chains at {lam} span {sum(len(c) for c in chains)} of {alg} dimensions")
    return chains


def jordan_matrix(blocks, exact: bool = True) -> Matrix:
    """Block-diagonal Jordan matrix for ``[(eigenvalue, size), ...]``."""
    n = sum(size for _, size in blocks)
    zero, one = (Fraction(0), Fraction(1)) if exact else (0j, 1 + 0j)
    rows = [[zero] * n for _ in range(n)]
    k = 0
    for lam, size in blocks:
        lam = as_rational(lam) if exact else complex(lam)
        for i in range(size):
            rows[k + i][k + i] = lam
            if i + 1 < size:
                rows[k + i][k + i + 1] = one
        k += size
    return Matrix(rows)


def jordan_decomposition(m: Matrix) -> JordanDecomposition:
    """Jordan form of a rational matrix, verified by ``H S = S J`` before return."""
    if m.n > MAX_DIM:
        raise ValueError(f"dimension {m.n} exceeds the supported maximum {MAX_DIM}")
    eigs = eigenvalues(m)
    for i, a in enumerate(eigs):
        for b in eigs[i + 1 :]:
            if a.is_exact and b.is_exact:
                continue
            if abs(complex(a.value) - complex(b.value)) < CLUSTER_TOL:
                raise IllPosedJordanError(
                    f"ill-posed Jordan structure: distinct eigenvalues {a.value} and {b.value} "
                    f"closer than {CLUSTER_TOL}"
                )
    exact = all(e.is_exact for e in eigs)
    chains, blocks = [], []
    for e in sorted(eigs, key=lambda e: value_key(e.value)):
        for vecs in _chains_for(m, e.value, e.alg_mult):
            chains.append(JordanChain(e.value, vecs))
            blocks.append((e.value, len(vecs)))
    cols = [v for c in chains for v in c.vectors]
    if exact:
        S = Matrix.from_columns(cols)
        J = jordan_matrix(blocks, exact=True)
        if S.det() == 0:
            raise JordanStructureError("generalized eigenvectors are dependent")
        if m @ S != S @ J:
            raise JordanStructureError("verification H S = S J failed")
    else:
        S = Matrix.from_columns([[complex(x) for x in v] for v in cols])
        J = jordan_matrix(blocks, exact=False)
        Hc, Sc, Jc = (np.array(X.tolist(), dtype=complex) for X in (m.to_complex(), S, J))
        resid = np.max(np.abs(Hc @ Sc - Sc @ Jc).sum(axis=1))
        scale = np.max(np.abs(Hc).sum(axis=1)) * np.max(np.abs(Sc).sum(axis=1))
        if resid > SIMILARITY_TOL * max(scale, 1e-300):
            raise JordanStructureError(f"verification H S = S J failed (residual {resid:.3e})")
        if np.linalg.matrix_rank(Sc, tol=RANK_TOL * np.linalg.norm(Sc, 2)) < m.n:
            raise JordanStructureError("generalized eigenvectors are numerically dependent")
    return JordanDecomposition(S, J, tuple(blocks), tuple(chains), exact)
