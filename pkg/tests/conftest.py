"""Shared oracles and hypothesis strategies."""

import random
import sys
from fractions import Fraction

import pytest
import sympy
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from epscan.core import AffineFamily, Matrix

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def small_rationals(max_num=6, max_den=4):
    return st.builds(
        Fraction, st.integers(-max_num, max_num), st.integers(1, max_den)
    )


def matrices(n, elements=None):
    elements = elements or small_rationals()
    return st.lists(
        st.lists(elements, min_size=n, max_size=n), min_size=n, max_size=n
    ).map(Matrix)


def square_matrices(min_n=1, max_n=4):
    return st.integers(min_n, max_n).flatmap(matrices)


def families(min_n=2, max_n=4):
    return st.integers(min_n, max_n).flatmap(
        lambda n: st.builds(AffineFamily, matrices(n).map(Matrix.tolist), matrices(n).map(Matrix.tolist))
    )


def random_family(rng: random.Random, n: int) -> AffineFamily:
    def q():
        return Fraction(rng.randint(-4, 4), rng.choice([1, 1, 2, 3]))

    return AffineFamily([[q() for _ in range(n)] for _ in range(n)], [[q() for _ in range(n)] for _ in range(n)])


def random_families(count=200, seed=2024):
    rng = random.Random(seed)
    return [random_family(rng, 3 if k % 2 == 0 else 4) for k in range(count)]


# ----------------------------------------------------------------------------
# independent oracles
# ----------------------------------------------------------------------------


def cofactor_det(rows):
    """Laplace expansion along the first row; no elimination, no division."""
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    total = 0
    for j in range(n):
        if rows[0][j] == 0:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        total += (-1) ** j * rows[0][j] * cofactor_det(minor)
    return total


def sym_matrix(m):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in m])


def sympy_charpoly(m) -> list[Fraction]:
    """Ascending coefficients of det(lambda I - m) computed by sympy."""
    lam = sympy.Symbol("lam")
    p = sympy.Poly((lam * sympy.eye(len(list(m))) - sym_matrix(m)).det(method="berkowitz"), lam)
    return [Fraction(int(c.p), int(c.q)) for c in reversed(p.all_coeffs())]


@pytest.fixture
def paper():
    from epscan.core import paper_family

    return paper_family()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
