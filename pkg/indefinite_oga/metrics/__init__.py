from indefinite_oga.metrics.errors import (
    ConvergenceRow, l2_error, h1_error, h1_seminorm_error, energy_error,
    convergence_order, convergence_table, mean_order
)

__all__ = [
    'ConvergenceRow', 'l2_error', 'h1_error', 'h1_seminorm_error', 'energy_error',
    'convergence_order', 'convergence_table', 'mean_order',
]
