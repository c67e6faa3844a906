from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import cofactor_det, matrices, small_rationals, square_matrices
from epscan.core import (
    AffineFamily,
    DimensionError,
    Matrix,
    UniPoly,
    as_rational,
    bareiss_det,
    cplx,
    family_at,
    nullspace,
    paper_family,
    primitive_vector,
    rank,
    rref,
    solve,
)

F = Fraction


class TestScalars:
    def test_rational_parsing(self):
        assert as_rational("-5/4") == F(-5, 4)
        assert as_rational("0.1") == F(1, 10)
        assert as_rational("1e-3") == F(1, 1000)
        assert as_rational(3) == 3

    def test_float_is_exact_binary_value(self):
        assert as_rational(0.1) == F(0.1)
        assert as_rational(0.1) != F(1, 10)

    @pytest.mark.parametrize("bad", ["1/0", "abc", "", float("nan"), float("inf")])
    def test_rejects_garbage(self, bad):
        with pytest.raises(ValueError):
            as_rational(bad)

    def test_cplx_rejects_non_finite(self):
        assert cplx(1.0, -2.0) == complex(1, -2)
        with pytest.raises(ValueError):
            cplx(float("nan"))

    @given(small_rationals(), small_rationals())
    def test_rational_arithmetic_is_exact(self, a, b):
        assert (a + b) - b == a
        if b:
            assert (a * b) / b == a


class TestMatrix:
    def test_identity_product(self):
        I3 = Matrix.identity(3)
        assert I3 @ I3 == I3

    def test_paper_family_symmetric_only_at_one(self):
        fam = paper_family()
        assert fam.at(1).T == fam.at(1)
        assert fam.at(1).is_symmetric()
        assert not fam.at(0).is_symmetric()

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            Matrix.identity(3) @ Matrix.identity(2)
        with pytest.raises(DimensionError):
            Matrix.identity(3) + Matrix.identity(2)
        with pytest.raises(DimensionError):
            Matrix([[1, 2], [3]])

    def test_scalar_and_shift(self):
        m = Matrix([[1, 2], [3, 4]])
        assert 2 * m == Matrix([[2, 4], [6, 8]])
        assert m.shift(1) == Matrix([[0, 2], [3, 3]])
        assert m.trace() == 5
        assert m.det() == -2

    @given(matrices(3), matrices(3), matrices(3))
    def test_multiplication_associates(self, a, b, c):
        assert (a @ b) @ c == a @ (b @ c)

    @given(square_matrices())
    def test_transpose_involution(self, m):
        assert m.T.T == m

    @given(square_matrices(1, 4))
    def test_bareiss_matches_cofactor(self, m):
        assert bareiss_det(m.tolist()) == cofactor_det(m.tolist())

    @given(matrices(3), matrices(3))
    def test_det_multiplicative(self, a, b):
        assert (a @ b).det() == a.det() * b.det()


class TestElimination:
    def test_nullspace_primitive(self):
        assert nullspace([[1, 1], [2, 2]]) == [(1, -1)]
        assert nullspace([[1, 0], [0, 1]]) == []

    def test_solve_inconsistent(self):
        assert solve([[1, 1], [2, 2]], [1, 3]) is None
        assert solve([[1, 1], [2, 2]], [1, 2]) == (1, 0)

    def test_rank(self):
        assert rank([[1, 2], [2, 4]]) == 1
        assert rank([[1, 2], [3, 4]]) == 2

    def test_numeric_rank_tolerance(self):
        rows = [[1.0, 2.0], [2.0, 4.0 + 1e-14]]
        assert rank(rows, tol=1e-10) == 1
        assert rank(rows, tol=1e-16) == 2

    def test_primitive_vector(self):
        assert primitive_vector([F(-1, 2), F(1, 3), 0]) == (3, -2, 0)

    @given(square_matrices(1, 4))
    def test_nullspace_vectors_are_annihilated(self, m):
        basis = nullspace(m.tolist())
        assert len(basis) + rank(m.tolist()) == m.n
        for v in basis:
            assert all(x == 0 for x in m.apply(v))

    @given(square_matrices(1, 4))
    def test_rref_pivots(self, m):
        R, piv = rref(m.tolist())
        assert len(piv) == rank(m.tolist())
        for k, j in piv:
            assert R[k][j] == 1
            assert all(R[i][j] == 0 for i in range(len(R)) if i != k)
        assert all(x == 0 for row in R[len(piv):] for x in row)


class TestUniPoly:
    lam = UniPoly.x()

    def test_derivative(self):
        p = self.lam**3 - 2 * self.lam - 1
        assert p.derivative() == 3 * self.lam**2 - 2

    def test_eval(self):
        assert (self.lam**2 - self.lam - 2)(-1) == 0

    def test_division_by_root_factor(self):
        beta = F(7, 3)
        p = self.lam**3 - (beta + 2) * self.lam - (beta + 1)
        q, r = divmod(p, self.lam + 1)
        assert r.is_zero()
        assert q == self.lam**2 - self.lam - (beta + 1)

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            divmod(self.lam, UniPoly())

    def test_degree_and_zero(self):
        assert UniPoly().degree == -1
        assert UniPoly([0, 0, 0]).is_zero()
        assert UniPoly([1, 2, 0]).degree == 1

    def test_gcd_monic(self):
        a = UniPoly.from_roots([1, 2, 2])
        b = UniPoly.from_roots([2, 3])
        assert UniPoly.gcd(a, b) == UniPoly.from_roots([2])

    @given(st.lists(small_rationals(), min_size=1, max_size=6), small_rationals())
    def test_horner_equals_term_sum(self, coeffs, x):
        p = UniPoly(coeffs)
        assert p(x) == sum(c * x**k for k, c in enumerate(coeffs))

    @given(
        st.lists(small_rationals(), min_size=1, max_size=6),
        st.lists(small_rationals(), min_size=2, max_size=4).filter(lambda c: c[-1] != 0),
    )
    def test_divmod_identity(self, a, b):
        p, d = UniPoly(a), UniPoly(b)
        q, r = divmod(p, d)
        assert q * d + r == p
        assert r.degree < d.degree


class TestFamily:
    def test_paper_family_values(self):
        fam = paper_family()
        assert family_at(fam, 1) == Matrix([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
        assert fam.at(F(-5, 4)) == Matrix([[0, 1, 1], [1, 0, 1], [F(-5, 4), 1, 0]])

    @given(matrices(3), matrices(3))
    def test_zero_parameter_gives_a(self, a, b):
        fam = AffineFamily(a.tolist(), b.tolist())
        assert fam.at(0) == fam.A

    def test_b_defaults_to_zero(self):
        fam = AffineFamily([[1, 0], [0, 2]])
        assert fam.is_constant()
        assert fam.at(5) == fam.A

    def test_float_evaluation(self):
        fam = paper_family()
        assert fam.at_float(-2.0).tolist()[2][0] == -2.0
