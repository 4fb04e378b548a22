"""
Problem definitions for -div(A grad u) + c u = f with natural boundary
conditions, and the indefinite bilinear form a(u, v) = (A grad u, grad v) + (c u, v).
"""

from dataclasses import dataclass
from typing import Callable, Optional, Protocol

import numpy as np

from indefinite_oga.errors import ProblemError
from indefinite_oga.quadrature import BoxDomain


class Field(Protocol):
    """
    Anything with pointwise values and gradients on (N, d) point arrays.
    """

    def value(self, x): ...

    def gradient(self, x): ...


@dataclass(frozen=True)
class ExactSolution:
    """
    Closed-form solution u and its gradient, both vectorized over (N, d) points.
    """
    value_fn: Callable
    gradient_fn: Callable

    def value(self, x):
        return self.value_fn(np.atleast_2d(x))

    def gradient(self, x):
        return self.gradient_fn(np.atleast_2d(x))


@dataclass(frozen=True, eq=False)
class ProblemSpec:
    """
    Coefficients, source and (optional) exact solution of one problem.
    """
    domain: BoxDomain
    diffusion: np.ndarray
    reaction: float
    source: Callable
    exact: Optional[ExactSolution] = None
    name: str = 'custom'

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.diffusion, dtype=float))
        d = self.domain.dim
        if A.shape != (d, d):
            raise ProblemError(f"diffusion matrix must be {d}x{d}, got {A.shape}")
        if not np.array_equal(A, A.T):
            raise ProblemError("diffusion matrix is not symmetric")
        beta = float(np.linalg.eigvalsh(A)[0])
        if beta <= 0.0:
            raise ProblemError(f"diffusion matrix is not positive definite (smallest eigenvalue {beta})")
        A.flags.writeable = False
        object.__setattr__(self, 'diffusion', A)
        object.__setattr__(self, 'reaction', float(self.reaction))

    @property
    def dim(self):
        return self.domain.dim

    @property
    def ellipticity(self):
        """
        Smallest eigenvalue beta of A.
        """
        return float(np.linalg.eigvalsh(self.diffusion)[0])

    @property
    def garding_constant(self):
        """
        G = beta - c, the shift that restores coercivity.
        """
        return self.ellipticity - self.reaction

    def source_values(self, points):
        return np.asarray(self.source(np.atleast_2d(points)), dtype=float)

    def summary(self):
        return {
            'name': self.name,
            'dim': self.dim,
            'lower': list(self.domain.lower),
            'upper': list(self.domain.upper),
            'diffusion': self.diffusion.tolist(),
            'reaction': self.reaction,
            'ellipticity': self.ellipticity,
            'has_exact_solution': self.exact is not None,
        }


@dataclass(frozen=True, eq=False)
class FieldSample:
    """
    Values (N,) and gradients (N, d) of a field at the quadrature nodes.
    """
    values: np.ndarray
    gradients: np.ndarray

    @classmethod
    def zeros(cls, grid):
        return cls(np.zeros(grid.n_points), np.zeros((grid.n_points, grid.dim)))

    def __len__(self):
        return len(self.values)

    def combine(self, coefficient, other):
        """
        self + coefficient * other as a new sample.
        """
        return FieldSample(self.values + coefficient * other.values,
                           self.gradients + coefficient * other.gradients)


def sample_field(grid, field):
    """
    Sample a field at every quadrature node, in grid node order.

    Args:
        grid: QuadratureGrid
        field: Object exposing value(x) and gradient(x) on (N, d) arrays

    Returns:
        FieldSample
    """
    values = np.asarray(field.value(grid.nodes), dtype=float).reshape(grid.n_points)
    gradients = np.asarray(field.gradient(grid.nodes), dtype=float).reshape(grid.n_points, grid.dim)
    return FieldSample(values, gradients)


def _check_conforms(grid, *samples):
    for sample in samples:
        if len(sample) != grid.n_points:
            raise ProblemError(f"sample of length {len(sample)} does not match grid of {grid.n_points} nodes")


def bilinear_form(grid, problem, u, v):
    """
    a(u, v) = integral of grad u . A grad v + c u v.

    Args:
        grid: QuadratureGrid
        problem: ProblemSpec supplying A and c
        u, v: FieldSample on the grid

    Returns:
        Float
    """
    _check_conforms(grid, u, v)
    flux = v.gradients @ problem.diffusion
    integrand = np.einsum('ij,ij->i', u.gradients, flux) + problem.reaction * u.values * v.values
    return float(np.dot(integrand, grid.weights))


def source_pairing(grid, source_values, v):
    """
    (f, v) by quadrature, with f given at the nodes.
    """
    _check_conforms(grid, v)
    return float(np.dot(source_values * v.values, grid.weights))


def l2_norm_squared(grid, sample):
    return float(np.dot(sample.values ** 2, grid.weights))


def h1_inner(grid, u, v):
    """
    Full H1 inner product (u, v)_0 + (grad u, grad v)_0.
    """
    _check_conforms(grid, u, v)
    gradient_dot = np.einsum('ij,ij->i', u.gradients, v.gradients)
    return float(np.dot(u.values * v.values + gradient_dot, grid.weights))


def h1_norm_squared(grid, sample):
    """
    Full H1 norm squared: ||v||_0^2 + ||grad v||_0^2.
    """
    gradient_sq = np.einsum('ij,ij->i', sample.gradients, sample.gradients)
    return float(np.dot(sample.values ** 2 + gradient_sq, grid.weights))


def energy_functional(grid, problem, sample, source_values=None):
    """
    R(v) = a(v, v)/2 - (f, v).
    """
    if source_values is None:
        source_values = problem.source_values(grid.nodes)
    return 0.5 * bilinear_form(grid, problem, sample, sample) - source_pairing(grid, source_values, sample)


def garding_margin(grid, problem, sample):
    """
    a(v, v) + G ||v||_0^2 - beta ||v||_1^2 with G = beta - c.

    Nonnegative whenever Garding's inequality holds for v.
    """
    beta = problem.ellipticity
    return (bilinear_form(grid, problem, sample, sample)
            + problem.garding_constant * l2_norm_squared(grid, sample)
            - beta * h1_norm_squared(grid, sample))
