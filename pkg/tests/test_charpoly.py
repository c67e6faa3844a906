from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from conftest import cofactor_det, families, small_rationals, square_matrices, sympy_charpoly
from epscan.charpoly import (
    BiPoly,
    DegenerateFamilyError,
    char_poly,
    char_poly_family,
    discriminant,
    discriminant_in_beta,
    isolate_real_roots,
    resultant,
    square_free_factorization,
    sturm_count,
    sturm_sequence,
)
from epscan.core import AffineFamily, Matrix, UniPoly, paper_family

F = Fraction
x = UniPoly.x()


def sym_poly(p: UniPoly, var):
    return sum(sympy.Rational(c.numerator, c.denominator) * var**k for k, c in enumerate(p.coeffs))


class TestCharPoly:
    def test_paper_values(self):
        fam = paper_family()
        assert char_poly(fam.at(1)) == x**3 - 3 * x - 2
        assert char_poly(fam.at(0)) == x**3 - 2 * x - 1
        assert char_poly(Matrix.identity(3)) == (x - 1) ** 3

    def test_paper_family_symbolic(self):
        P = char_poly_family(paper_family())
        beta = UniPoly.x()
        assert P.coeffs == (-(beta + 1), -(beta + 2), UniPoly([0]), UniPoly([1]))
        assert P.is_monic()

    def test_scalar_family(self):
        P = char_poly_family(AffineFamily([[0, 0], [0, 0]], [[1, 0], [0, 1]]))
        beta = UniPoly.x()
        assert P.coeffs == (beta**2, -2 * beta, UniPoly([1]))

    def test_constant_family_has_no_beta(self):
        P = char_poly_family(AffineFamily([[1, 2], [3, 4]]))
        assert P.beta_degree() == 0

    @given(square_matrices(1, 4))
    def test_matches_sympy(self, m):
        assert list(char_poly(m).coeffs) == sympy_charpoly(m)

    @given(square_matrices(1, 5))
    def test_trace_and_det_identities(self, m):
        p = char_poly(m)
        n = m.n
        assert p.degree == n and p.lead == 1
        assert p.coeff(n - 1) == -m.trace()
        assert p.coeff(0) == (-1) ** n * cofactor_det(m.tolist())

    @given(families(2, 4), st.lists(small_rationals(9, 7), min_size=5, max_size=5))
    def test_specialization_commutes(self, fam, betas):
        P = char_poly_family(fam)
        for b in betas:
            assert char_poly(fam.at(b)) == P.specialize(b)

    def test_specialization_commutes_fifty_betas(self):
        fam = AffineFamily([[F(1, 2), 3, 0], [-1, 0, F(2, 3)], [4, 1, -2]], [[0, 1, 1], [F(-1, 3), 2, 0], [1, 0, 5]])
        P = char_poly_family(fam)
        for k in range(50):
            b = F(k - 25, 7)
            assert char_poly(fam.at(b)) == P.specialize(b)


class TestDiscriminant:
    def test_paper_family(self):
        d = discriminant_in_beta(char_poly_family(paper_family()))
        beta = UniPoly.x()
        assert d == 4 * beta**3 - 3 * beta**2 - 6 * beta + 5
        assert d == (beta - 1) ** 2 * (4 * beta + 5)

    def test_cubic_formula(self):
        # disc(x^3 + p x + q) = -4p^3 - 27q^2
        for p, q in [(F(-3), F(-2)), (F(1, 2), F(5)), (F(-7, 3), F(1, 9))]:
            assert discriminant(x**3 + p * x + q) == -4 * p**3 - 27 * q**2

    def test_perfect_square_is_zero(self):
        P = char_poly_family(AffineFamily([[0, 0], [0, 0]], [[1, 0], [0, 1]]))
        assert discriminant_in_beta(P).is_zero()

    def test_constant_family_distinct_roots(self):
        d = discriminant_in_beta(char_poly_family(AffineFamily([[1, 0], [0, 2]])))
        assert d.degree == 0 and d.coeff(0) != 0

    @given(st.lists(small_rationals(), min_size=2, max_size=5).filter(lambda c: c[-1] != 0))
    def test_matches_sympy(self, coeffs):
        t = sympy.Symbol("t")
        p = UniPoly(coeffs)
        expected = sympy.discriminant(sym_poly(p, t), t)
        assert discriminant(p) == Fraction(int(expected.p), int(expected.q))

    def test_resultant_common_root(self):
        assert resultant([-1, 0, 1], [1, 1]) == 0
        assert resultant([-1, 0, 1], [2, 1]) != 0

    @given(families(2, 3))
    def test_vanishes_where_roots_repeat(self, fam):
        P = char_poly_family(fam)
        d = discriminant_in_beta(P)
        for b in (F(-1), F(0), F(1, 2), F(2)):
            p = P.specialize(b)
            repeated = UniPoly.gcd(p, p.derivative()).degree > 0
            assert (d(b) == 0) == repeated


class TestRootIsolation:
    def test_paper_discriminant_roots(self):
        roots = isolate_real_roots((x - 1) ** 2 * (4 * x + 5))
        assert [(r.value, r.multiplicity) for r in roots] == [(F(-5, 4), 1), (F(1), 2)]
        assert all(r.is_exact for r in roots)

    def test_no_real_roots(self):
        assert isolate_real_roots(x**2 + 1) == []

    def test_sqrt_two(self):
        roots = isolate_real_roots(x**2 - 2)
        assert len(roots) == 2
        for r, s in zip(roots, (-1, 1)):
            assert not r.is_exact and r.multiplicity == 1
            assert r.lo < r.hi and r.hi - r.lo < F(1, 2**40)
            assert (r.lo**2 - 2) * (r.hi**2 - 2) < 0
            assert r.lo <= s * sympy.sqrt(2) <= r.hi

    def test_zero_polynomial(self):
        with pytest.raises(DegenerateFamilyError, match="identically degenerate family"):
            isolate_real_roots(UniPoly())

    def test_square_free_factorization(self):
        f = (x - 1) ** 3 * (x + 2) ** 2 * (x**2 + 1)
        parts = square_free_factorization(f)
        prod = UniPoly([1])
        for g, k in parts:
            prod = prod * g**k
        assert prod == f.monic()
        assert {k for _, k in parts} == {1, 2, 3}

    @given(st.lists(st.integers(-5, 5), min_size=1, max_size=5), st.integers(0, 3))
    def test_against_sympy_real_roots(self, roots, extra_irr):
        f = UniPoly.from_roots(roots)
        if extra_irr:
            f = f * (x**2 - extra_irr - 1)  # irrational pair (except 4 -> +-2)
        t = sympy.Symbol("t")
        expected = sympy.Poly(sym_poly(f, t), t).real_roots()
        got = isolate_real_roots(f)
        assert sum(r.multiplicity for r in got) == len(expected)
        distinct = sorted(set(expected), key=lambda e: float(e))
        assert len(got) == len(distinct)
        for r, e in zip(got, distinct):
            assert r.multiplicity == expected.count(e)
            if r.is_exact:
                assert r.value == sympy.Rational(e)
            else:
                assert r.lo < e < r.hi

    @given(st.lists(small_rationals(), min_size=3, max_size=6).filter(lambda c: c[-1] != 0))
    def test_interval_certificates(self, coeffs):
        q = UniPoly(coeffs)
        for r in isolate_real_roots(q):
            if r.is_exact:
                assert q(r.value) == 0
                continue
            g = next(g for g, k in square_free_factorization(q) if k == r.multiplicity)
            assert g(r.lo) * g(r.hi) < 0
            assert sturm_count(sturm_sequence(g), r.lo, r.hi) == 1

    def test_sorted_ascending(self):
        f = (x - 3) * (x + 1) * (x**2 - 5) * (2 * x - 1)
        mids = [r.midpoint for r in isolate_real_roots(f)]
        assert mids == sorted(mids)


def test_bipoly_derivative_and_str():
    P = char_poly_family(paper_family())
    assert isinstance(P, BiPoly)
    assert P.derivative().specialize(2) == P.specialize(2).derivative()
    assert "l^3" in str(P)
