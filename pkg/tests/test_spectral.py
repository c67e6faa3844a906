import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_families, square_matrices
from epscan.charpoly import char_poly
from epscan.core import Matrix, UniPoly, is_exact, paper_family, rank
from epscan.spectral import (
    EXACT,
    NUMERIC,
    ConvergenceError,
    NotAnEigenvalueError,
    aberth,
    analyze,
    eigenspace,
    eigenvalues,
    eigenvector_overlap,
    polynomial_roots,
)

F = Fraction


def in_span(basis, v) -> bool:
    return rank([list(b) for b in basis] + [list(v)]) == rank([list(b) for b in basis])


class TestEigenvalues:
    def test_degenerate_point(self, paper):
        ev = eigenvalues(paper.at(1))
        assert [(e.value, e.alg_mult) for e in ev] == [(-1, 2), (2, 1)]
        assert all(isinstance(e.value, Fraction) for e in ev)

    def test_exceptional_point(self, paper):
        ev = eigenvalues(paper.at(F(-5, 4)))
        assert [(e.value, e.alg_mult) for e in ev] == [(-1, 1), (F(1, 2), 2)]

    def test_complex_pair(self, paper):
        ev = eigenvalues(paper.at(-2))
        vals = [complex(e.value) for e in ev]
        expected = [-1, (1 - 1j * math.sqrt(3)) / 2, (1 + 1j * math.sqrt(3)) / 2]
        for v, w in zip(vals, expected):
            assert abs(v - w) <= 1e-12
        assert ev[1].value == ev[2].value.conjugate()

    def test_closed_form_at_zero(self, paper):
        vals = sorted(complex(e.value).real for e in eigenvalues(paper.at(0)))
        s5 = math.sqrt(5)
        assert np.allclose(vals, [-1, (1 - s5) / 2, (1 + s5) / 2], atol=1e-14, rtol=0)

    def test_aberth_simple(self):
        roots = sorted(aberth([-6, 11, -6, 1]), key=lambda z: z.real)
        assert np.allclose(roots, [1, 2, 3], atol=1e-13)

    def test_aberth_non_convergence(self):
        with pytest.raises(ConvergenceError, match="residual"):
            aberth([1, 0, 0, 0, 0, 0, 1e-3, 1], max_iter=1)

    def test_polynomial_roots_multiplicities(self):
        x = UniPoly.x()
        p = (x - F(1, 3)) ** 2 * (x**2 + 1) * (x**2 - 2)
        got = polynomial_roots(p)
        assert (F(1, 3), 2) in got
        mults = sorted(k for _, k in got)
        assert mults == [1, 1, 1, 1, 2]
        complex_roots = [complex(r) for r, _ in got if not is_exact(r) and complex(r).imag != 0]
        assert sorted(complex_roots, key=lambda z: z.imag) == [-1j, 1j]


class TestEigenspace:
    def test_degenerate_space_contains_orthonormal_vectors(self, paper):
        space = eigenspace(paper.at(1), -1)
        assert len(space) == 2
        # v1 = (1,1,-2)/sqrt6 and v2 = (1,-1,0)/sqrt2, tested up to scale
        assert in_span(space, (1, 1, -2))
        assert in_span(space, (1, -1, 0))
        assert not in_span(space, (1, 1, 1))

    def test_defective_space(self, paper):
        space = eigenspace(paper.at(F(-5, 4)), F(1, 2))
        assert space == [(2, 2, -1)]

    def test_identity(self):
        assert len(eigenspace(Matrix.identity(3), 1)) == 3

    def test_not_an_eigenvalue(self, paper):
        with pytest.raises(NotAnEigenvalueError):
            eigenspace(paper.at(1), 5)

    def test_numeric_normalisation(self, paper):
        m = paper.at(-2)
        lam = eigenvalues(m)[2].value
        (v,) = eigenspace(m, lam)
        assert abs(np.linalg.norm(v) - 1) < 1e-14
        first = next(c for c in v if abs(c) > 1e-12)
        assert first.imag == 0 and first.real > 0


class TestAnalyze:
    def test_diagonalizable_degeneracy(self, paper):
        r = analyze(paper.at(1))
        assert r.diagonalizable and r.backend == EXACT
        e = r.find(-1)
        assert (e.alg_mult, e.geo_mult) == (2, 2)

    def test_defective(self, paper):
        r = analyze(paper.at(F(-5, 4)))
        assert not r.diagonalizable
        e = r.find(F(1, 2))
        assert (e.alg_mult, e.geo_mult) == (2, 1)

    def test_generic_point(self, paper):
        r = analyze(paper.at(0))
        assert r.diagonalizable and r.backend == NUMERIC
        assert [e.alg_mult for e in r.eigenvalues] == [1, 1, 1]

    @given(square_matrices(2, 4))
    def test_trace_and_det(self, m):
        r = analyze(m)
        vals = r.values()
        tr, det = complex(m.trace()), complex(m.det())
        if r.backend == EXACT:
            assert sum(vals) == m.trace()
            assert math.prod(vals) == m.det()
        else:
            scale = 1 + sum(abs(complex(v)) for v in vals)
            assert abs(sum(complex(v) for v in vals) - tr) <= 1e-10 * scale
            assert abs(np.prod([complex(v) for v in vals]) - det) <= 1e-10 * scale ** len(vals)

    @given(square_matrices(2, 4))
    def test_residuals_and_multiplicities(self, m):
        r = analyze(m)
        H = np.array(m.to_complex().tolist())
        hn = np.max(np.abs(H).sum(axis=1))
        p = char_poly(m)
        for e in r.eigenvalues:
            assert 1 <= e.geo_mult <= e.alg_mult
            for v in e.eigenspace:
                if e.is_exact:
                    assert all(c == 0 for c in m.shift(e.value).apply(v))
                else:
                    vc = np.array(v, dtype=complex)
                    res = np.max(np.abs(H @ vc - complex(e.value) * vc))
                    assert res <= 1e-10 * hn * np.max(np.abs(vc))
            if not e.is_exact:
                lam = complex(e.value)
                pv = sum(complex(c) * lam**k for k, c in enumerate(p.coeffs))
                assert abs(pv) <= 1e-8 * (1 + abs(lam)) ** m.n

    @given(square_matrices(2, 4))
    def test_conjugate_closure(self, m):
        vals = [e.value for e in analyze(m).eigenvalues for _ in range(e.alg_mult)]
        numeric = [complex(v) for v in vals if not is_exact(v)]
        assert sorted(numeric, key=lambda z: (z.real, z.imag)) == sorted(
            (z.conjugate() for z in numeric), key=lambda z: (z.real, z.imag)
        )

    def test_random_families_geo_le_alg(self):
        for fam in random_families(60, seed=5):
            for b in (F(-1), F(1, 2)):
                for e in analyze(fam.at(b)).eigenvalues:
                    assert e.geo_mult <= e.alg_mult


class TestOverlap:
    def test_near_exceptional_point(self, paper):
        m = paper.at(F(-5, 4) + F(1, 10**4))
        r = analyze(m)
        lam2, lam3 = r.eigenvalues[1].value, r.eigenvalues[2].value
        assert eigenvector_overlap(m, lam2, lam3) > 0.99

    def test_generic(self, paper):
        m = paper.at(0)
        ov = eigenvector_overlap(m, -1, (1 + math.sqrt(5)) / 2)
        assert 0 <= ov < 1

    def test_degenerate_rejected(self, paper):
        with pytest.raises(ValueError):
            eigenvector_overlap(paper.at(1), -1, -1)
        with pytest.raises(ValueError, match="not simple"):
            eigenvector_overlap(paper.at(1), -1, 2)


@given(st.integers(-30, 30).map(lambda k: Fraction(k, 10)))
def test_closed_form_eigenvalues(beta):
    vals = analyze(paper_family().at(beta)).values()
    s = cmath.sqrt(4 * float(beta) + 5)
    expected = sorted([-1, (1 - s) / 2, (1 + s) / 2], key=lambda z: (complex(z).real, complex(z).imag))
    got = sorted((complex(v) for v in vals), key=lambda z: (z.real, z.imag))
    assert np.allclose(got, [complex(e) for e in expected], atol=1e-12, rtol=0)
