"""
Composite tensor-product Gauss-Legendre quadrature over box domains.

Every inner product, residual and error norm in the package is evaluated
with a QuadratureGrid built here.
"""

from dataclasses import dataclass

import numpy as np

from indefinite_oga.config import MAX_GRID_POINTS
from indefinite_oga.errors import QuadratureError

MAX_POINTS_PER_CELL = 8


@dataclass(frozen=True)
class BoxDomain:
    """
    Axis-aligned box (lower[0], upper[0]) x ... x (lower[d-1], upper[d-1]).
    """
    lower: tuple
    upper: tuple

    def __post_init__(self):
        lower = tuple(float(v) for v in np.atleast_1d(self.lower))
        upper = tuple(float(v) for v in np.atleast_1d(self.upper))
        if len(lower) != len(upper):
            raise QuadratureError("lower and upper corners differ in dimension")
        if len(lower) not in (1, 2, 3):
            raise QuadratureError(f"unsupported dimension {len(lower)}")
        if any(not lo < hi for lo, hi in zip(lower, upper)):
            raise QuadratureError(f"empty box: lower={lower}, upper={upper}")
        object.__setattr__(self, 'lower', lower)
        object.__setattr__(self, 'upper', upper)

    @classmethod
    def unit(cls, dim):
        """
        The unit box (0,1)^dim.
        """
        return cls((0.0,) * dim, (1.0,) * dim)

    @property
    def dim(self):
        return len(self.lower)

    @property
    def volume(self):
        return float(np.prod(np.subtract(self.upper, self.lower)))

    def corners(self):
        """
        All 2^d corners as a (2^d, d) array.
        """
        axes = [(lo, hi) for lo, hi in zip(self.lower, self.upper)]
        mesh = np.meshgrid(*axes, indexing='ij')
        return np.stack([m.ravel() for m in mesh], axis=1)

    def contains(self, points):
        """
        True for points strictly inside the box.
        """
        points = np.atleast_2d(points)
        return np.all((points > self.lower) & (points < self.upper), axis=1)


@dataclass(frozen=True, eq=False)
class QuadratureGrid:
    """
    Precomputed nodes (N, d) and positive weights (N,) of a composite rule.
    """
    domain: BoxDomain
    cells_per_dim: tuple
    points_per_cell: int
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def dim(self):
        return self.domain.dim

    @property
    def n_points(self):
        return len(self.weights)

    def refined(self, factor):
        """
        The same rule on a grid with `factor` times as many cells per axis.
        """
        if factor == 1:
            return self
        cells = tuple(int(c * factor) for c in self.cells_per_dim)
        return build_grid(self.domain, cells, self.points_per_cell)


def gauss_legendre_1d(t):
    """
    Gauss-Legendre rule with t points on [-1, 1].

    Args:
        t: Number of points, 1 <= t <= 8

    Returns:
        Tuple (nodes, weights) of ascending nodes and positive weights
    """
    if not isinstance(t, (int, np.integer)) or not 1 <= t <= MAX_POINTS_PER_CELL:
        raise QuadratureError(f"unsupported point count: {t}")
    nodes, weights = np.polynomial.legendre.leggauss(int(t))
    if t % 2 == 1:
        # The middle node is 0 exactly; leggauss leaves a rounding residue
        nodes[t // 2] = 0.0
    return nodes, weights


def _axis_rule(lower, upper, cells, ref_nodes, ref_weights):
    """
    Composite 1D rule on (lower, upper), cell-major then point-ascending.
    """
    edges = np.linspace(lower, upper, cells + 1)
    left = edges[:-1]
    half = 0.5 * np.diff(edges)
    nodes = (left[:, None] + half[:, None] * (ref_nodes[None, :] + 1.0)).ravel()
    weights = (half[:, None] * ref_weights[None, :]).ravel()
    return nodes, weights


def _normalize_cells(cells_per_dim, dim):
    cells = np.atleast_1d(np.asarray(cells_per_dim))
    if cells.size == 1:
        cells = np.repeat(cells, dim)
    if cells.size != dim:
        raise QuadratureError(f"expected {dim} cell counts, got {cells.size}")
    if np.any(cells < 1) or not np.all(np.equal(np.mod(cells, 1), 0)):
        raise QuadratureError(f"cell counts must be positive integers: {cells.tolist()}")
    return tuple(int(c) for c in cells)


def build_grid(domain, cells_per_dim, t, max_points=None):
    """
    Build the composite tensor-product Gauss-Legendre grid over a box.

    Args:
        domain: BoxDomain to integrate over
        cells_per_dim: Partition count per axis (int or one per axis)
        t: Gauss points per cell per axis
        max_points: Cap on the total node count (default: from config)

    Returns:
        QuadratureGrid with nodes in axis-major lexicographic order
    """
    if max_points is None:
        max_points = MAX_GRID_POINTS

    cells = _normalize_cells(cells_per_dim, domain.dim)
    ref_nodes, ref_weights = gauss_legendre_1d(t)

    n_points = t ** domain.dim * int(np.prod(cells, dtype=object))
    if n_points > max_points:
        raise QuadratureError(f"grid too large: {n_points} points exceeds cap {max_points}")

    axis_nodes = []
    axis_weights = []
    for lo, hi, count in zip(domain.lower, domain.upper, cells):
        nodes, weights = _axis_rule(lo, hi, count, ref_nodes, ref_weights)
        axis_nodes.append(nodes)
        axis_weights.append(weights)

    node_mesh = np.meshgrid(*axis_nodes, indexing='ij')
    weight_mesh = np.meshgrid(*axis_weights, indexing='ij')
    nodes = np.stack([m.ravel() for m in node_mesh], axis=1)
    weights = np.prod(np.stack([m.ravel() for m in weight_mesh], axis=1), axis=1)

    nodes.flags.writeable = False
    weights.flags.writeable = False
    return QuadratureGrid(domain, cells, int(t), nodes, weights)


def integrate(grid, f):
    """
    Apply the quadrature rule.

    Args:
        grid: QuadratureGrid
        f: Values at the grid nodes (N,) or a callable mapping (N, d) nodes to (N,)

    Returns:
        Sum of f(x_j) * w_j as a float
    """
    values = f(grid.nodes) if callable(f) else f
    values = np.asarray(values, dtype=float)
    if values.shape != grid.weights.shape:
        raise QuadratureError(
            f"expected {grid.n_points} samples, got array of shape {values.shape}"
        )
    return float(np.dot(values, grid.weights))
