"""Eigenvalue collisions in one-parameter matrix families H(beta) = A + beta*B.

Locates every real parameter where eigenvalues coincide, tells true
degeneracies (diagonalizable) from exceptional points (Jordan blocks), and
finds the permutation symmetries of a matrix.
"""

from .charpoly import (
    BiPoly,
    DegenerateFamilyError,
    IsolatedRoot,
    char_poly,
    char_poly_family,
    discriminant,
    discriminant_in_beta,
    isolate_real_roots,
    resultant,
    square_free_factorization,
    sturm_sequence,
)
from .core import AffineFamily, DimensionError, Matrix, UniPoly, as_rational, paper_family
from .jordan import (
    IllPosedJordanError,
    JordanChain,
    JordanDecomposition,
    jordan_chain,
    jordan_decomposition,
)
from .spectral import (
    ConvergenceError,
    Eigenvalue,
    NumericalError,
    SpectralReport,
    analyze,
    eigenspace,
    eigenvalues,
    eigenvector_overlap,
)
from .sweep import DEGENERACY, EXCEPTIONAL, Branch, CriticalPoint, critical_points, sweep
from .symmetry import Perm, SymmetryGroup, invariance_group, perm_matrix

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
