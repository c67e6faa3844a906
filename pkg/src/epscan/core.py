"""Scalars, small dense matrices and univariate polynomials.

Two scalar backends are used throughout the package:

* exact rationals (:class:`fractions.Fraction`), and
* complex floats (builtin :class:`complex`, finite components only).

:class:`Matrix` and :class:`UniPoly` are immutable and generic over the scalar
type; the only requirement is that entries support ``+ - *`` and, where a
division is needed, exact ``/``.  ``UniPoly`` entries are themselves allowed
inside a ``Matrix``, which is how the symbolic characteristic polynomial of an
affine family is computed.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Callable, Iterable, Sequence

__all__ = [
    "Fraction",
    "as_rational",
    "cplx",
    "is_exact",
    "Matrix",
    "UniPoly",
    "AffineFamily",
    "family_at",
    "paper_family",
    "DimensionError",
    "rref",
    "nullspace",
    "solve",
    "rank",
    "primitive_vector",
    "bareiss_det",
]

# ----------------------------------------------------------------------------
# scalars
# ----------------------------------------------------------------------------


class DimensionError(ValueError):
    pass


def as_rational(x) -> Fraction:
    """Convert ``x`` to an exact :class:`Fraction`.

    Strings are parsed by digits, so ``"0.1"`` becomes ``1/10`` rather than the
    binary float nearest to it.  Floats are converted exactly.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational number: {x!r}") from exc
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x!r}")
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def cplx(re: float, im: float = 0.0) -> complex:
    """Complex float with finite components; NaN and infinities are rejected."""
    z = complex(re, im)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite complex value {z!r}")
    return z


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def _is_zero(x) -> bool:
    return x == 0


# ----------------------------------------------------------------------------
# matrices
# ----------------------------------------------------------------------------


class Matrix:
    """Immutable square matrix, row-major."""

    __slots__ = ("_rows", "n")

    def __init__(self, rows: Iterable[Iterable]):
        rows = tuple(tuple(r) for r in rows)
        n = len(rows)
        if n == 0:
            raise DimensionError("matrix dimension must be at least 1")
        if any(len(r) != n for r in rows):
            raise DimensionError("matrix must be square")
        self._rows = rows
        self.n = n

    # construction ------------------------------------------------------

    @classmethod
    def identity(cls, n: int, one=Fraction(1), zero=Fraction(0)) -> "Matrix":
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, n: int, zero=Fraction(0)) -> "Matrix":
        return cls([[zero] * n for _ in range(n)])

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence]) -> "Matrix":
        n = len(cols)
        return cls([[cols[j][i] for j in range(n)] for i in range(n)])

    @classmethod
    def rational(cls, rows) -> "Matrix":
        return cls([[as_rational(x) for x in r] for r in rows])

    # access ------------------------------------------------------------

    @property
    def rows(self) -> tuple:
        return self._rows

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self._rows)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.n)]

    def __iter__(self):
        return iter(self._rows)

    def tolist(self) -> list[list]:
        return [list(r) for r in self._rows]

    # arithmetic --------------------------------------------------------

    def _check(self, other: "Matrix"):
        if not isinstance(other, Matrix):
            raise TypeError(f"expected Matrix, got {type(other).__name__}")
        if other.n != self.n:
            raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)])

    def __neg__(self) -> "Matrix":
        return Matrix([[-a for a in r] for r in self._rows])

    def __mul__(self, c) -> "Matrix":
        if isinstance(c, Matrix):
            raise TypeError("use @ for matrix products")
        return Matrix([[a * c for a in r] for r in self._rows])

    def __rmul__(self, c) -> "Matrix":
        return Matrix([[c * a for a in r] for r in self._rows])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        cols = other.columns()
        out = []
        for r in self._rows:
            row = []
            for c in cols:
                acc = r[0] * c[0]
                for a, b in zip(r[1:], c[1:]):
                    acc = acc + a * b
                row.append(acc)
            out.append(row)
        return Matrix(out)

    def apply(self, v: Sequence) -> tuple:
        """Matrix-vector product."""
        if len(v) != self.n:
            raise DimensionError(f"vector of length {len(v)} for {self.n}x{self.n} matrix")
        out = []
        for r in self._rows:
            acc = r[0] * v[0]
            for a, b in zip(r[1:], v[1:]):
                acc = acc + a * b
            out.append(acc)
        return tuple(out)

    @property
    def T(self) -> "Matrix":
        return Matrix(zip(*self._rows))

    def transpose(self) -> "Matrix":
        return self.T

    def trace(self):
        acc = self._rows[0][0]
        for i in range(1, self.n):
            acc = acc + self._rows[i][i]
        return acc

    def map(self, f: Callable) -> "Matrix":
        return Matrix([[f(a) for a in r] for r in self._rows])

    def shift(self, lam) -> "Matrix":
        """``self - lam * I``."""
        return Matrix(
            [[a - lam if i == j else a for j, a in enumerate(r)] for i, r in enumerate(self._rows)]
        )

    def is_symmetric(self) -> bool:
        return self == self.T

    def is_exact(self) -> bool:
        return all(is_exact(a) for r in self._rows for a in r)

    def to_complex(self) -> "Matrix":
        return self.map(complex)

    def norm_inf(self) -> float:
        return max(sum(abs(complex(a)) for a in r) for r in self._rows)

    def det(self):
        """Determinant by fraction-free elimination (exact for rationals)."""
        return bareiss_det([list(r) for r in self._rows])

    # comparison ----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(_fmt(a) for a in r) + "]" for r in self._rows)
        return f"Matrix([{body}])"


def _fmt(a) -> str:
    if isinstance(a, Fraction):
        return str(a)
    return repr(a)


def bareiss_det(rows: list[list], exact_div: Callable | None = None):
    """Determinant of a square array over an integral domain.

    Fraction-free Bareiss elimination: every intermediate division is exact,
    so the routine works over ``Q``, over ``Q[x]`` (``UniPoly`` entries) and,
    with rounding, over the complex floats.
    """
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if exact_div is None:
        exact_div = _default_exact_div
    a = [list(r) for r in rows]
    sign = 1
    prev = None
    for k in range(n - 1):
        if _is_zero(a[k][k]):
            for i in range(k + 1, n):
                if not _is_zero(a[i][k]):
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return a[k][k] * 0
        p = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                t = a[i][j] * p - a[i][k] * a[k][j]
                a[i][j] = t if prev is None else exact_div(t, prev)
        prev = p
    d = a[n - 1][n - 1]
    return d if sign > 0 else -d


def _default_exact_div(a, b):
    if isinstance(a, UniPoly) or isinstance(b, UniPoly):
        return UniPoly.coerce(a).exact_div(UniPoly.coerce(b))
    return a / b


# ----------------------------------------------------------------------------
# elimination: exact (rationals) and numeric (complex, complete pivoting)
# ----------------------------------------------------------------------------


def rref(rows: Sequence[Sequence], tol: float | None = None, pivot_limit: int | None = None):
    """Reduced row echelon form.

    With ``tol is None`` the arithmetic is exact and the first nonzero entry of
    each column is used as pivot.  Otherwise entries are converted to complex
    and the largest remaining entry is chosen as pivot (complete pivoting);
    a pivot of magnitude ``<= tol`` ends the elimination.  Only the first
    ``pivot_limit`` columns are eligible as pivot columns.

    Returns ``(R, pivots)`` where ``pivots`` is the list of ``(row, column)``
    pairs, in row order.  ``R`` keeps the original column order.
    """
    m = len(rows)
    ncol = len(rows[0]) if m else 0
    limit = ncol if pivot_limit is None else pivot_limit
    if tol is None:
        a = [[as_rational(x) for x in r] for r in rows]
    else:
        a = [[complex(x) for x in r] for r in rows]
    pivots: list[tuple[int, int]] = []
    used: set[int] = set()
    r = 0
    while r < m:
        found = None
        if tol is None:
            for c in range(limit):
                if c in used:
                    continue
                for i in range(r, m):
                    if a[i][c] != 0:
                        found = (i, c)
                        break
                if found:
                    break
        else:
            best = -1.0
            for i in range(r, m):
                for c in range(limit):
                    if c in used:
                        continue
                    mag = abs(a[i][c])
                    if mag > best:
                        best, found = mag, (i, c)
            if best <= tol:
                found = None
        if found is None:
            break
        i, c = found
        a[r], a[i] = a[i], a[r]
        p = a[r][c]
        a[r] = [x / p for x in a[r]]
        for k in range(m):
            if k != r and a[k][c] != 0:
                f = a[k][c]
                a[k] = [x - f * y for x, y in zip(a[k], a[r])]
                if tol is not None:
                    a[k][c] = 0j
        pivots.append((r, c))
        used.add(c)
        r += 1
    return a, pivots


def rank(rows, tol: float | None = None) -> int:
    if not rows:
        return 0
    return len(rref(rows, tol)[1])


def nullspace(rows: Sequence[Sequence], tol: float | None = None) -> list[tuple]:
    """Basis of the right null space.

    Exact input gives integer-primitive vectors; numeric input gives raw
    back-substituted vectors (one free variable set to 1, the others to 0).
    """
    ncol = len(rows[0])
    R, pivots = rref(rows, tol)
    pivot_cols = {c: r for r, c in pivots}
    free = [c for c in range(ncol) if c not in pivot_cols]
    one = Fraction(1) if tol is None else 1.0 + 0j
    zero = Fraction(0) if tol is None else 0j
    basis = []
    for f in free:
        v = [zero] * ncol
        v[f] = one
        for c, r in pivot_cols.items():
            v[c] = -R[r][f]
        basis.append(primitive_vector(v) if tol is None else tuple(v))
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence, tol: float | None = None):
    """Particular solution of ``rows @ x = rhs`` with free variables set to 0.

    Returns ``None`` if the system is inconsistent.  In the numeric backend a
    reduced right-hand side entry larger than ``tol`` in a zero row counts as
    inconsistent.
    """
    ncol = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    R, pivots = rref(aug, tol, pivot_limit=ncol)
    pivot_rows = {r for r, _ in pivots}
    for r in range(len(R)):
        if r not in pivot_rows:
            val = R[r][ncol]
            if (tol is None and val != 0) or (tol is not None and abs(val) > tol):
                return None
    zero = Fraction(0) if tol is None else 0j
    x = [zero] * ncol
    for r, c in pivots:
        x[c] = R[r][ncol]
    return tuple(x)


def primitive_vector(v: Sequence) -> tuple:
    """Scale a rational vector to coprime integers, first nonzero entry positive."""
    v = [as_rational(x) for x in v]
    if all(x == 0 for x in v):
        return tuple(v)
    den = 1
    for x in v:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for k in ints:
        g = math.gcd(g, k)
    first = next(k for k in ints if k != 0)
    if first < 0:
        g = -g
    return tuple(Fraction(k // g) for k in ints)


# ----------------------------------------------------------------------------
# univariate polynomials
# ----------------------------------------------------------------------------


class UniPoly:
    """Univariate polynomial with ascending coefficients.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = list(coeffs)
        while c and _is_zero(c[-1]):
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def coerce(cls, x) -> "UniPoly":
        return x if isinstance(x, UniPoly) else cls([x])

    @classmethod
    def x(cls) -> "UniPoly":
        return cls([Fraction(0), Fraction(1)])

    @classmethod
    def from_roots(cls, roots: Iterable) -> "UniPoly":
        p = cls([Fraction(1)])
        for r in roots:
            p = p * cls([-r, Fraction(1)])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self):
        if not self.coeffs:
            return Fraction(0)
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def coeff(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    # arithmetic ----------------------------------------------------------

    def __add__(self, other) -> "UniPoly":
        other = UniPoly.coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return UniPoly([x + b[i] if i < len(b) else x for i, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self) -> "UniPoly":
        return UniPoly([-x for x in self.coeffs])

    def __sub__(self, other) -> "UniPoly":
        return self + (-UniPoly.coerce(other))

    def __rsub__(self, other) -> "UniPoly":
        return UniPoly.coerce(other) - self

    def __mul__(self, other) -> "UniPoly":
        if not isinstance(other, UniPoly):
            return UniPoly([x * other for x in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return UniPoly()
        out = [self.coeffs[0] * 0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if _is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return UniPoly(out)

    def __rmul__(self, other) -> "UniPoly":
        return UniPoly([other * x for x in self.coeffs])

    def __truediv__(self, c) -> "UniPoly":
        if isinstance(c, UniPoly):
            return self.exact_div(c)
        if c == 0:
            raise ZeroDivisionError("division of polynomial by zero scalar")
        if isinstance(c, int):
            c = Fraction(c)
        return UniPoly([x / c for x in self.coeffs])

    def __pow__(self, k: int) -> "UniPoly":
        if k < 0:
            raise ValueError("negative power")
        out = UniPoly([Fraction(1)])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __divmod__(self, other) -> tuple["UniPoly", "UniPoly"]:
        other = UniPoly.coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return UniPoly(), self
        lc = other.lead
        if isinstance(lc, int):
            lc = Fraction(lc)
        quot = [None] * (dq + 1)
        for k in range(dq, -1, -1):
            q = rem[k + other.degree] / lc
            quot[k] = q
            if not _is_zero(q):
                for j, b in enumerate(other.coeffs):
                    rem[k + j] = rem[k + j] - q * b
            rem[k + other.degree] = q * 0
        return UniPoly(quot), UniPoly(rem[: other.degree])

    def __floordiv__(self, other) -> "UniPoly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "UniPoly":
        return divmod(self, other)[1]

    def exact_div(self, other) -> "UniPoly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("polynomial division is not exact")
        return q

    def derivative(self) -> "UniPoly":
        return UniPoly([k * c for k, c in enumerate(self.coeffs)][1:])

    def __call__(self, x):
        """Horner evaluation."""
        if not self.coeffs:
            return x * 0
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    eval = __call__

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        return self / self.lead

    def integer_primitive(self) -> "UniPoly":
        """Same roots, coprime integer coefficients, positive leading term."""
        if self.is_zero():
            return self
        return UniPoly(reversed(primitive_vector(list(reversed(self.coeffs)))))

    @staticmethod
    def gcd(a: "UniPoly", b: "UniPoly") -> "UniPoly":
        """Monic gcd (zero if both inputs are zero)."""
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    # comparison / display ------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        try:
            return self.coeffs == UniPoly([other]).coeffs
        except TypeError:
            return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"UniPoly({[_fmt(c) for c in self.coeffs]})"

    def format(self, var: str = "x") -> str:
        if self.is_zero():
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if _is_zero(c):
                continue
            if isinstance(c, UniPoly):
                cs = "(" + c.format("b") + ")"
                neg = False
            else:
                neg = c < 0 if is_exact(c) else False
                cs = _fmt(abs(c) if neg else c)
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            if mono and cs == "1":
                body = mono
            elif mono:
                body = f"{cs}*{mono}"
            else:
                body = cs
            terms.append(("- " if neg else "+ ") + body)
        s = " ".join(terms)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    __str__ = format


# ----------------------------------------------------------------------------
# affine families
# ----------------------------------------------------------------------------


class AffineFamily:
    """The one-parameter matrix family ``H(beta) = A + beta * B``."""

    __slots__ = ("A", "B", "name")

    def __init__(self, A, B=None, name: str | None = None):
        A = A if isinstance(A, Matrix) else Matrix.rational(A)
        if B is None:
            B = Matrix.zeros(A.n)
        B = B if isinstance(B, Matrix) else Matrix.rational(B)
        if A.n != B.n:
            raise DimensionError(f"A is {A.n}x{A.n} but B is {B.n}x{B.n}")
        if not (A.is_exact() and B.is_exact()):
            raise TypeError("family matrices must be rational")
        self.A = A.map(as_rational)
        self.B = B.map(as_rational)
        self.name = name

    @property
    def n(self) -> int:
        return self.A.n

    def at(self, beta) -> Matrix:
        beta = as_rational(beta)
        return self.A + self.B * beta

    def at_float(self, beta: float) -> Matrix:
        return Matrix(
            [[float(a) + beta * float(b) for a, b in zip(ra, rb)] for ra, rb in zip(self.A, self.B)]
        )

    def symbolic(self) -> Matrix:
        """Entries as polynomials in the parameter."""
        return Matrix(
            [[UniPoly([a, b]) for a, b in zip(ra, rb)] for ra, rb in zip(self.A, self.B)]
        )

    def is_constant(self) -> bool:
        return all(b == 0 for r in self.B for b in r)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AffineFamily):
            return NotImplemented
        return self.A == other.A and self.B == other.B

    def __repr__(self) -> str:
        return f"AffineFamily(A={self.A!r}, B={self.B!r}, name={self.name!r})"


def family_at(fam: AffineFamily, beta) -> Matrix:
    return fam.at(beta)


def paper_family() -> AffineFamily:
    """The 3x3 model: all off-diagonal ones, with the (3,1) entry replaced by beta."""
    A = [[0, 1, 1], [1, 0, 1], [0, 1, 0]]
    B = [[0, 0, 0], [0, 0, 0], [1, 0, 0]]
    return AffineFamily(A, B, name="paper")
