"""
Dense symmetric (possibly indefinite) solves for the projection step.
"""

import logging
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.linalg import LinAlgWarning, solve_triangular
from scipy.linalg.lapack import get_lapack_funcs

from indefinite_oga.config import CONDITION_WARNING, PIVOT_TOL, REFINEMENT_STEPS
from indefinite_oga.errors import SingularProjectionError

logger = logging.getLogger(__name__)

SYMMETRY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class GramSystem:
    """
    G_ij = a(g_i, g_j) and rhs_j = (f, g_j) for the selected neurons.
    """
    matrix: np.ndarray
    rhs: np.ndarray

    def __post_init__(self):
        matrix = np.atleast_2d(np.asarray(self.matrix, dtype=float)).reshape(len(self.rhs), len(self.rhs))
        rhs = np.asarray(self.rhs, dtype=float).reshape(-1)
        scale = np.abs(matrix).max() if matrix.size else 0.0
        if matrix.size and np.abs(matrix - matrix.T).max() > SYMMETRY_TOL * scale:
            raise ValueError("Gram matrix is not symmetric")
        object.__setattr__(self, 'matrix', matrix)
        object.__setattr__(self, 'rhs', rhs)

    @classmethod
    def empty(cls):
        return cls(np.zeros((0, 0)), np.zeros(0))

    @property
    def n(self):
        return len(self.rhs)

    def extended(self, column, rhs_entry):
        """
        Append one neuron: `column` holds a(g_new, g_j) for j = 1..n+1.
        """
        column = np.asarray(column, dtype=float)
        if column.shape != (self.n + 1,):
            raise ValueError(f"expected a column of length {self.n + 1}, got {column.shape}")
        matrix = np.zeros((self.n + 1, self.n + 1))
        matrix[:self.n, :self.n] = self.matrix
        matrix[-1, :] = column
        matrix[:, -1] = column
        return GramSystem(matrix, np.append(self.rhs, rhs_entry))

    def residual(self, coefficients):
        return self.matrix @ coefficients - self.rhs

    def orthogonality_defect(self, coefficients):
        """
        max_j |(G a - rhs)_j| / (||G|| ||a|| + ||rhs||), infinity norms.
        """
        if self.n == 0:
            return 0.0
        scale = (np.linalg.norm(self.matrix, np.inf) * np.linalg.norm(coefficients, np.inf)
                 + np.linalg.norm(self.rhs, np.inf))
        if scale == 0.0:
            return 0.0
        return float(np.abs(self.residual(coefficients)).max() / scale)


def solve_symmetric(system):
    """
    Solve G a = rhs with a row-pivoted LU factorization.

    The LU solution is followed by up to REFINEMENT_STEPS residual
    corrections, each kept only if it lowers the residual.

    Args:
        system: GramSystem, symmetric and possibly indefinite

    Returns:
        Tuple (coefficients, condition_estimate) where the estimate is the
        LAPACK 1-norm condition number estimate

    Raises:
        SingularProjectionError: If a pivot falls below PIVOT_TOL * ||G||_1
    """
    if system.n == 0:
        return np.zeros(0), 1.0

    matrix = system.matrix
    anorm = float(np.linalg.norm(matrix, 1))
    with warnings.catch_warnings():
        # Exact zero pivots are reported below with their index
        warnings.simplefilter('ignore', LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(matrix)

    pivots = np.abs(np.diag(lu))
    small = np.flatnonzero(~(pivots >= PIVOT_TOL * anorm))
    if small.size:
        raise SingularProjectionError(int(small[0]))

    coefficients = scipy.linalg.lu_solve((lu, piv), system.rhs)
    residual_norm = np.linalg.norm(system.residual(coefficients), np.inf)
    for _ in range(REFINEMENT_STEPS):
        corrected = coefficients - scipy.linalg.lu_solve((lu, piv), system.residual(coefficients))
        corrected_norm = np.linalg.norm(system.residual(corrected), np.inf)
        if not corrected_norm < residual_norm:
            break
        coefficients, residual_norm = corrected, corrected_norm

    gecon, = get_lapack_funcs(('gecon',), (lu,))
    rcond, info = gecon(lu, anorm, norm='1')
    condition = 1.0 / rcond if info == 0 and rcond > 0 else np.inf
    if condition > CONDITION_WARNING:
        logger.warning("projection system is ill-conditioned (estimate %.3e, n=%d)", condition, system.n)
    return coefficients, float(condition)


@dataclass(frozen=True, eq=False)
class SpanFactor:
    """
    Lower Cholesky factor L of a positive definite Gram matrix M = L L^T,
    grown by one column per admitted vector.

    Used to measure how far a new vector lies from the span of the admitted
    ones without forming or refactoring M.
    """
    lower: np.ndarray

    @classmethod
    def empty(cls):
        return cls(np.zeros((0, 0)))

    @property
    def n(self):
        return self.lower.shape[0]

    def schur_complement(self, column, diagonal):
        """
        Squared distance of a new vector from the span.

        Args:
            column: Inner products of the new vector with the admitted ones
            diagonal: Squared norm of the new vector

        Returns:
            Tuple (s, y) with y = L^{-1} column and s = diagonal - y . y
        """
        column = np.asarray(column, dtype=float).reshape(-1)
        if column.shape != (self.n,):
            raise ValueError(f"expected a column of length {self.n}, got {column.shape}")
        if self.n == 0:
            return float(diagonal), column
        y = solve_triangular(self.lower, column, lower=True, check_finite=False)
        return float(diagonal - y @ y), y

    def extended(self, y, s):
        """
        Factor with one more vector, from the output of schur_complement.
        """
        if not s > 0:
            raise ValueError(f"Schur complement must be positive, got {s}")
        lower = np.zeros((self.n + 1, self.n + 1))
        lower[:self.n, :self.n] = self.lower
        lower[-1, :self.n] = y
        lower[-1, -1] = np.sqrt(s)
        return SpanFactor(lower)
