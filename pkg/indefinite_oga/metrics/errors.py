"""
Error norms against exact solutions and convergence-order tabulation.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from indefinite_oga.errors import DegenerateOrderError
from indefinite_oga.problems import (
    FieldSample, bilinear_form, h1_norm_squared, l2_norm_squared, sample_field
)


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    dof: int
    l2_error: float
    l2_order: Optional[float]
    h1_error: float
    h1_order: Optional[float]


def _error_sample(grid, model, exact):
    """
    u_h - u at the nodes; an empty or missing model counts as u_h = 0.
    """
    target = sample_field(grid, exact)
    if model is None or len(model) == 0:
        return FieldSample(-target.values, -target.gradients)
    approx = sample_field(grid, model)
    return FieldSample(approx.values - target.values, approx.gradients - target.gradients)


def l2_error(grid, model, exact):
    """
    ||u_h - u||_0 by quadrature.
    """
    return math.sqrt(l2_norm_squared(grid, _error_sample(grid, model, exact)))


def h1_error(grid, model, exact):
    """
    Full H1 norm ||u_h - u||_1 (value and gradient terms).
    """
    return math.sqrt(h1_norm_squared(grid, _error_sample(grid, model, exact)))


def h1_seminorm_error(grid, model, exact):
    """
    |u_h - u|_1, the gradient part only.
    """
    error = _error_sample(grid, model, exact)
    gradient_sq = np.einsum('ij,ij->i', error.gradients, error.gradients)
    return math.sqrt(float(np.dot(gradient_sq, grid.weights)))


def energy_error(grid, problem, model, exact):
    """
    a(u_h - u, u_h - u); may be negative since a(.,.) is indefinite.
    """
    error = _error_sample(grid, model, exact)
    return bilinear_form(grid, problem, error, error)


def convergence_order(e_coarse, e_fine, ratio=2.0):
    """
    log(e_coarse / e_fine) / log(ratio).

    Args:
        e_coarse: Error at the smaller neuron count
        e_fine: Error at the larger neuron count
        ratio: Ratio of the neuron counts (> 1)

    Raises:
        DegenerateOrderError: If an error is not positive or ratio <= 1
    """
    if not (e_coarse > 0 and e_fine > 0):
        raise DegenerateOrderError(f"degenerate order: errors {e_coarse}, {e_fine}")
    if not ratio > 1:
        raise DegenerateOrderError(f"degenerate order: ratio {ratio}")
    return math.log(e_coarse / e_fine) / math.log(ratio)


def _order_or_none(previous, current, ratio):
    try:
        return convergence_order(previous, current, ratio)
    except DegenerateOrderError:
        return None


def convergence_table(checkpoints, dof_per_neuron):
    """
    Build ConvergenceRow entries from solver checkpoints.

    Args:
        checkpoints: Checkpoint list in ascending n, with errors filled in
        dof_per_neuron: Parameters counted per neuron for the dof column

    Returns:
        List of ConvergenceRow; the first row carries no orders
    """
    rows = []
    previous = None
    for point in checkpoints:
        l2_order = h1_order = None
        if previous is not None:
            ratio = point.n / previous.n
            l2_order = _order_or_none(previous.l2_error, point.l2_error, ratio)
            h1_order = _order_or_none(previous.h1_error, point.h1_error, ratio)
        rows.append(ConvergenceRow(point.n, point.n * dof_per_neuron,
                                   point.l2_error, l2_order, point.h1_error, h1_order))
        previous = point
    return rows


def mean_order(rows, column, last=3):
    """
    Mean of the last `last` available orders in a column ('l2_order' or 'h1_order').
    """
    orders = [getattr(row, column) for row in rows if getattr(row, column) is not None]
    if not orders:
        return None
    return float(np.mean(orders[-last:]))
