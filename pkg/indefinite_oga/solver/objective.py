"""
Evaluation of the greedy objective <g, u_{n-1} - u>_H for candidate neurons.

All routines work on the weighted caches of SolverState:
    J(omega, b) = sum_j sigma'(z_j) (flux_j . omega) + reaction_j sigma(z_j),
    z_j = omega . x_j + b.
"""

import numpy as np

from indefinite_oga.config import SCAN_CHUNK_ELEMENTS
from indefinite_oga.dictionary import relu_power, relu_power_derivative
from indefinite_oga.utils.parallel import ScanPool, shared_data


def scan_direction(item, nodes, flux, reaction, k, chunk_elements=SCAN_CHUNK_ELEMENTS):
    """
    Objective values for one direction and all of its offsets.

    Args:
        item: Tuple (omega, offsets)
        nodes, flux, reaction: Grid nodes and weighted caches
        k: Activation power
        chunk_elements: Bound on the node x offset block held in memory

    Returns:
        (len(offsets),) array of objective values
    """
    omega, offsets = item
    projection = nodes @ omega
    flux_along = flux @ omega
    scores = np.empty(len(offsets))
    step = max(1, chunk_elements // max(1, len(projection)))
    for start in range(0, len(offsets), step):
        z = projection[:, None] + offsets[None, start:start + step]
        scores[start:start + step] = (flux_along @ relu_power_derivative(z, k)
                                      + reaction @ relu_power(z, k))
    return scores


def _scan_block(item):
    directions, offsets, flux, reaction, k = item
    nodes = shared_data()['nodes']
    return np.concatenate([scan_direction((omega, offsets), nodes, flux, reaction, k) for omega in directions])


def scan_candidates(state, num_processes=1, pool=None):
    """
    Objective value of every candidate, in CandidateSet order.

    Directions are split into one block per process; each block carries the
    current weighted caches while the grid nodes stay in the pool workers.

    Args:
        state: SolverState
        num_processes: Used only when no pool is given
        pool: Open ScanPool whose shared data holds the grid nodes

    Returns:
        (len(candidates),) array
    """
    if pool is None:
        with ScanPool(num_processes, shared={'nodes': state.grid.nodes}) as pool:
            return scan_candidates(state, pool=pool)
    candidates = state.candidates
    blocks = [block for block in np.array_split(candidates.directions, pool.num_processes) if len(block)]
    items = [(block, candidates.offsets, state.flux, state.reaction, candidates.k) for block in blocks]
    return np.concatenate(pool.map(_scan_block, items))


def objective_with_gradient(state, omega, b, k, omega_perp=None):
    """
    J and its derivatives with respect to b and, if omega_perp is given,
    the direction angle theta (omega = (cos theta, sin theta)).

    The b-derivative of sigma_k' is k(k-1) sigma_{k-2}; for k = 1 it is a
    point mass that quadrature cannot see and is dropped.

    Returns:
        Tuple (J, gradient) with gradient = [dJ/db] or [dJ/dtheta, dJ/db]
    """
    nodes = state.grid.nodes
    z = nodes @ omega + b
    flux_along = state.flux @ omega
    s0 = relu_power(z, k)
    s1 = relu_power_derivative(z, k, 1)
    s2 = relu_power_derivative(z, k, 2)

    value = float(np.dot(flux_along, s1) + np.dot(state.reaction, s0))
    d_b = float(np.dot(flux_along, s2) + np.dot(state.reaction, s1))
    if omega_perp is None:
        return value, np.array([d_b])

    # dz/dtheta = omega_perp . x
    tangent = nodes @ omega_perp
    d_theta = float(np.dot(flux_along, s2 * tangent)
                    + np.dot(state.flux @ omega_perp, s1)
                    + np.dot(state.reaction, s1 * tangent))
    return value, np.array([d_theta, d_b])
