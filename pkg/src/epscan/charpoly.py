"""Characteristic polynomials, discriminants and certified real-root isolation."""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import AffineFamily, Matrix, UniPoly, as_rational, bareiss_det, primitive_vector

__all__ = [
    "BiPoly",
    "IsolatedRoot",
    "DegenerateFamilyError",
    "char_poly",
    "char_poly_family",
    "sylvester_matrix",
    "resultant",
    "discriminant",
    "discriminant_in_beta",
    "square_free_factorization",
    "sturm_sequence",
    "sturm_count",
    "isolate_real_roots",
    "isolate_squarefree",
    "refine_root",
    "DEFAULT_WIDTH",
]

DEFAULT_WIDTH = Fraction(1, 2**40)


class DegenerateFamilyError(ArithmeticError):
    """The discriminant vanishes identically: eigenvalues collide for every parameter."""


# ----------------------------------------------------------------------------
# characteristic polynomials
# ----------------------------------------------------------------------------


def _faddeev_leverrier(m: list[list], n: int, add, mul, divk, zero, one) -> list:
    # M_k = A M_{k-1} + c_{n-k+1} I,  c_{n-k} = -tr(A M_k) / k
    coeffs = [zero] * (n + 1)
    coeffs[n] = one
    am = [[zero] * n for _ in range(n)]
    for k in range(1, n + 1):
        c = coeffs[n - k + 1]
        mk = [[add(am[i][j], c) if i == j else am[i][j] for j in range(n)] for i in range(n)]
        am = [[_dot(m[i], [mk[l][j] for l in range(n)], add, mul, zero) for j in range(n)]
              for i in range(n)]
        tr = zero
        for i in range(n):
            tr = add(tr, am[i][i])
        coeffs[n - k] = divk(tr, -k)
    return coeffs


def _dot(a, b, add, mul, zero):
    acc = zero
    for x, y in zip(a, b):
        acc = add(acc, mul(x, y))
    return acc


def _int_div(a: int, k: int) -> int:
    q, r = divmod(a, k)
    if r:
        raise ArithmeticError("inexact division in Faddeev-LeVerrier")
    return q


def _ip_add(a: tuple, b: tuple) -> tuple:
    if len(a) < len(b):
        a, b = b, a
    return tuple(x + y for x, y in zip(a, b)) + a[len(b):]


def _ip_mul(a: tuple, b: tuple) -> tuple:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(out)


def _ip_div(a: tuple, k: int) -> tuple:
    return tuple(_int_div(x, k) for x in a)


def _common_denominator(*mats) -> int:
    d = 1
    for m in mats:
        for row in m:
            for x in row:
                d = math.lcm(d, x.denominator)
    return d


def char_poly(m: Matrix) -> UniPoly:
    """``det(lambda*I - m)`` as a monic polynomial in ``lambda``.

    Runs over the integers on ``d*m`` (``d`` the common denominator), where
    every division in the recursion is exact, then rescales.
    """
    m = m.map(as_rational)
    n = m.n
    d = _common_denominator(m.rows)
    im = [[int(x * d) for x in row] for row in m.rows]
    c = _faddeev_leverrier(im, n, operator.add, operator.mul, _int_div, 0, 1)
    return UniPoly([Fraction(c[j], d ** (n - j)) for j in range(n + 1)])


@dataclass(frozen=True)
class BiPoly:
    """Polynomial in ``lambda`` whose coefficients are polynomials in ``beta``.

    ``coeffs[k]`` multiplies ``lambda**k``.
    """

    coeffs: tuple[UniPoly, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == UniPoly([Fraction(1)])

    def specialize(self, beta) -> UniPoly:
        beta = as_rational(beta)
        return UniPoly([c(beta) for c in self.coeffs])

    def derivative(self) -> "BiPoly":
        return BiPoly(tuple(c * k for k, c in enumerate(self.coeffs))[1:])

    def beta_degree(self) -> int:
        return max((c.degree for c in self.coeffs), default=-1)

    def __str__(self) -> str:
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c.is_zero():
                continue
            mono = "" if k == 0 else ("l" if k == 1 else f"l^{k}")
            cs = c.format("b")
            if mono and cs == "1":
                terms.append(mono)
            elif mono:
                terms.append(f"({cs})*{mono}")
            else:
                terms.append(f"({cs})")
        return " + ".join(terms) if terms else "0"


def char_poly_family(fam: AffineFamily) -> BiPoly:
    """Characteristic polynomial of ``A + beta*B``, symbolic in ``beta``."""
    n = fam.n
    d = _common_denominator(fam.A.rows, fam.B.rows)
    sym = [[(int(a * d), int(b * d)) for a, b in zip(ra, rb)] for ra, rb in zip(fam.A.rows, fam.B.rows)]
    c = _faddeev_leverrier(sym, n, _ip_add, _ip_mul, _ip_div, (), (1,))
    return BiPoly(tuple(UniPoly([Fraction(x, d ** (n - j)) for x in c[j]]) for j in range(n + 1)))


# ----------------------------------------------------------------------------
# resultants and discriminants
# ----------------------------------------------------------------------------


def sylvester_matrix(p: Sequence, q: Sequence) -> list[list]:
    """Sylvester matrix of two coefficient lists given in ascending order."""
    dp, dq = len(p) - 1, len(q) - 1
    size = dp + dq
    zero = p[0] * 0
    pd, qd = list(reversed(p)), list(reversed(q))
    rows = []
    for i in range(dq):
        rows.append([zero] * i + pd + [zero] * (size - dp - 1 - i))
    for i in range(dp):
        rows.append([zero] * i + qd + [zero] * (size - dq - 1 - i))
    return rows


def resultant(p: Sequence, q: Sequence):
    if len(p) + len(q) - 2 == 0:
        return p[0] ** 0
    return bareiss_det(sylvester_matrix(p, q))


def discriminant(p: UniPoly):
    """Discriminant of a univariate polynomial over the rationals."""
    n = p.degree
    if n < 1:
        raise ValueError("discriminant needs degree >= 1")
    res = resultant(list(p.coeffs), list(p.derivative().coeffs))
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * res / p.lead


def discriminant_in_beta(p: BiPoly) -> UniPoly:
    """Discriminant of ``p`` with respect to ``lambda``, a polynomial in ``beta``."""
    if not p.is_monic():
        raise ValueError("expected a polynomial monic in lambda")
    n = p.degree
    if n < 1:
        raise ValueError("discriminant needs degree >= 1")
    dp = p.derivative()
    res = UniPoly.coerce(resultant(list(p.coeffs), list(dp.coeffs)))
    return res if (n * (n - 1) // 2) % 2 == 0 else -res


# ----------------------------------------------------------------------------
# square-free factorization and Sturm sequences
# ----------------------------------------------------------------------------


def square_free_factorization(f: UniPoly) -> list[tuple[UniPoly, int]]:
    """Yun's algorithm over Q: ``f = c * prod(g_i ** i)`` with monic, coprime,
    square-free ``g_i``.  Only factors of positive degree are returned."""
    if f.is_zero():
        raise ValueError("zero polynomial has no square-free factorization")
    if f.degree < 1:
        return []
    f = f.monic()
    df = f.derivative()
    b = UniPoly.gcd(f, df)
    c = f.exact_div(b)
    d = df.exact_div(b) - c.derivative()
    out = []
    i = 1
    while c.degree > 0:
        a = UniPoly.gcd(c, d)
        if a.degree > 0:
            out.append((a, i))
        c = c.exact_div(a)
        d = d.exact_div(a) - c.derivative()
        i += 1
    return out


def _positive_primitive(p: UniPoly) -> UniPoly:
    # positive rescaling only: signs must survive for Sturm counting
    if p.is_zero():
        return p
    q = UniPoly(reversed(primitive_vector(list(reversed(p.coeffs)))))
    return q if p.lead > 0 else -q


def sturm_sequence(f: UniPoly) -> list[UniPoly]:
    seq = [_positive_primitive(f), _positive_primitive(f.derivative())]
    while not seq[-1].is_zero() and seq[-1].degree > 0:
        r = -(seq[-2] % seq[-1])
        if r.is_zero():
            break
        seq.append(_positive_primitive(r))
    return seq


def _variations(signs) -> int:
    v, last = 0, 0
    for s in signs:
        if s == 0:
            continue
        if last and s != last:
            v += 1
        last = s
    return v


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _ints(p: UniPoly) -> tuple[int, ...]:
    return tuple(int(c) for c in p.coeffs)


def _sign_at(c: tuple[int, ...], x: Fraction) -> int:
    return _sign_pq(c, x.numerator, x.denominator)


def _sign_pq(c: tuple[int, ...], p: int, q: int) -> int:
    # sign of sum c_i p^i q^(d-i) for x = p/q, q > 0: integer-only Horner
    if not c:
        return 0
    acc, qk = c[-1], q
    for coef in reversed(c[:-1]):
        acc = acc * p + coef * qk
        qk *= q
    return _sign(acc)


def _var_at(iseq, x) -> int:
    return _variations(_sign_at(c, x) for c in iseq)


def sturm_count(seq, lo, hi) -> int:
    """Number of distinct real roots of ``seq[0]`` in ``(lo, hi]``."""
    iseq = [_ints(p) for p in seq]
    return _var_at(iseq, as_rational(lo)) - _var_at(iseq, as_rational(hi))


def _root_bound(f: UniPoly) -> Fraction:
    lc = abs(f.lead)
    m = max(abs(c) for c in f.coeffs[:-1]) if f.degree > 0 else 0
    return Fraction(math.floor(1 + m / lc) + 1)


# ----------------------------------------------------------------------------
# isolation
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class IsolatedRoot:
    """A real root known exactly (``value``) or by an isolating interval."""

    lo: Fraction
    hi: Fraction
    multiplicity: int = 1
    value: Fraction | None = None

    @property
    def is_exact(self) -> bool:
        return self.value is not None

    @property
    def midpoint(self) -> Fraction:
        return self.value if self.value is not None else (self.lo + self.hi) / 2

    def __float__(self) -> float:
        return float(self.midpoint)

    def __str__(self) -> str:
        if self.value is not None:
            return str(self.value)
        return f"({float(self.lo):.12g}, {float(self.hi):.12g})"


def _rational_candidate(fc: tuple[int, ...], lo: Fraction, hi: Fraction):
    # any rational root p/q of an integer polynomial has q | lead, so lead*root
    # is an integer; returns (root, None) or (None, n_candidates)
    a = abs(fc[-1])
    k_lo = math.ceil(lo * a)
    k_hi = math.floor(hi * a)
    count = k_hi - k_lo + 1
    if count > 4:
        return None, count
    for k in range(k_lo, k_hi + 1):
        r = Fraction(k, a)
        if lo <= r <= hi and _sign_at(fc, r) == 0:
            return r, 0
    return None, 0


def refine_root(f: UniPoly, seq, lo: Fraction, hi: Fraction, width: Fraction,
                relative: bool = False):
    """Shrink ``(lo, hi]``, which holds exactly one root of square-free ``f``.

    ``seq`` is the Sturm sequence of ``f``.  Returns ``(value, lo, hi)`` with
    ``value`` the exact root if it is rational, else ``None`` and an interval
    of width ``< width`` (relative to ``max(1, |x|)`` if ``relative``) whose
    endpoints are not roots and where ``f`` changes sign.
    """
    fc = _ints(_positive_primitive(f))
    iseq = [_ints(p) for p in seq]
    if _sign_at(fc, hi) == 0:
        return hi, hi, hi
    # Sturm bisection until the left end is not a root, then sign bisection
    v_lo = _var_at(iseq, lo)
    while _sign_at(fc, lo) == 0:
        mid = (lo + hi) / 2
        s_mid = _sign_at(fc, mid)
        if s_mid == 0:
            return mid, mid, mid
        v_mid = _var_at(iseq, mid)
        if v_lo - v_mid == 1:
            hi = mid
        else:
            lo, v_lo = mid, v_mid
    # sign bisection on integer numerators over a common denominator
    den = lo.denominator * hi.denominator // math.gcd(lo.denominator, hi.denominator)
    a, b = int(lo * den), int(hi * den)
    s_lo = _sign_pq(fc, a, den)
    wn, wd = width.numerator, width.denominator
    while True:
        scale = max(abs(a), abs(b), den) if relative else den
        if (b - a) * wd < wn * scale:
            lo, hi = Fraction(a, den), Fraction(b, den)
            r, count = _rational_candidate(fc, lo, hi)
            if r is not None:
                return r, r, r
            if count == 0:
                return None, lo, hi
        a, b, den = 2 * a, 2 * b, 2 * den
        m = (a + b) // 2
        s_mid = _sign_pq(fc, m, den)
        if s_mid == 0:
            return Fraction(m, den), Fraction(m, den), Fraction(m, den)
        if s_mid != s_lo:
            b = m
        else:
            a = m


def isolate_squarefree(f: UniPoly, width: Fraction = DEFAULT_WIDTH, relative: bool = False):
    """Isolate the real roots of a square-free polynomial.

    Returns ``(value, lo, hi)`` triples in ascending order, as from
    :func:`refine_root`.
    """
    if f.degree < 1:
        return []
    f = _positive_primitive(f)
    seq = sturm_sequence(f)
    iseq = [_ints(p) for p in seq]
    B = _root_bound(f)
    out = []
    stack = [(-B, B, _var_at(iseq, -B), _var_at(iseq, B))]
    while stack:
        lo, hi, v_lo, v_hi = stack.pop()
        cnt = v_lo - v_hi
        if cnt == 0:
            continue
        if cnt == 1:
            out.append(refine_root(f, seq, lo, hi, width, relative))
            continue
        mid = (lo + hi) / 2
        v_mid = _var_at(iseq, mid)
        stack.append((mid, hi, v_mid, v_hi))
        stack.append((lo, mid, v_lo, v_mid))
    out.sort(key=lambda t: t[1])
    return out


def isolate_real_roots(q: UniPoly, width: Fraction = DEFAULT_WIDTH) -> list[IsolatedRoot]:
    """All distinct real roots of ``q`` with multiplicities, ascending.

    Rational roots are returned exactly; irrational ones as isolating
    intervals of width below ``width``.
    """
    if q.is_zero():
        raise DegenerateFamilyError("identically degenerate family: polynomial is zero")
    q = UniPoly([as_rational(c) for c in q.coeffs])
    factors = square_free_factorization(q)
    if not factors:
        return []
    sqf = UniPoly([Fraction(1)])
    for g, _ in factors:
        sqf = sqf * g
    roots = []
    for value, lo, hi in isolate_squarefree(sqf, width):
        if value is not None:
            mult = next(i for g, i in factors if g(value) == 0)
            roots.append(IsolatedRoot(value, value, mult, value))
        else:
            mult = next(i for g, i in factors if _sign(g(lo)) != _sign(g(hi)))
            roots.append(IsolatedRoot(lo, hi, mult, None))
    roots.sort(key=lambda r: r.midpoint)
    return roots
