"""
Local refinement of the grid argmax by ascent on J^2 with backtracking.

Sign-vector candidates refine b only; angular candidates refine (theta, b).
"""

import math

import numpy as np

from indefinite_oga.dictionary import Neuron, SamplingMode
from indefinite_oga.solver.objective import objective_with_gradient

TWO_PI = 2.0 * math.pi


def _unpack(params, angular, fixed_omega):
    if angular:
        theta, b = params
        omega = np.array([math.cos(theta), math.sin(theta)])
        perp = np.array([-math.sin(theta), math.cos(theta)])
        return omega, perp, b
    return fixed_omega, None, params[0]


def refine_neuron(state, cfg, neuron, theta=None):
    """
    Locally maximize |<g, u_{n-1} - u>_H| starting from a grid candidate.

    Steps move along the gradient of J^2, scaled per parameter by the
    candidate grid spacing. A trial step is accepted only if it increases
    |J|, otherwise it is halved; the step length doubles again after every
    accepted move. Iteration stops after refine_max_iters moves or once the
    step falls below refine_step_tol.

    Args:
        state: SolverState with fresh caches
        cfg: SolverConfig
        neuron: Starting Neuron (the grid maximizer)
        theta: Starting angle, required for angular candidates

    Returns:
        Tuple (neuron, objective) with |objective| >= the starting |objective|
    """
    candidates = state.candidates
    angular = candidates.mode is SamplingMode.ANGULAR
    k = neuron.k
    b_lo, b_hi = candidates.b_lo, candidates.b_hi
    h_b = (b_hi - b_lo) / candidates.n_b

    if angular:
        if theta is None:
            theta = neuron.theta
        params = np.array([theta, neuron.b])
        scales = np.array([TWO_PI / len(candidates.directions), h_b])
    else:
        params = np.array([neuron.b])
        scales = np.array([h_b])

    def evaluate(p):
        omega, perp, b = _unpack(p, angular, neuron.direction)
        return objective_with_gradient(state, omega, b, k, omega_perp=perp)

    def clip(p):
        p = p.copy()
        p[-1] = min(max(p[-1], b_lo), b_hi)
        if angular:
            p[0] = p[0] % TWO_PI
        return p

    value, gradient = evaluate(params)
    start_value = value
    step = 0.5
    for _ in range(cfg.refine_max_iters):
        ascent = math.copysign(1.0, value) * gradient * scales
        norm = float(np.linalg.norm(ascent))
        if not norm > 0.0 or not math.isfinite(norm):
            break
        direction = ascent / norm * scales

        moved = 0.0
        while step * np.linalg.norm(direction) >= cfg.refine_step_tol:
            trial = clip(params + step * direction)
            trial_value, trial_gradient = evaluate(trial)
            if abs(trial_value) > abs(value):
                moved = float(np.linalg.norm(trial - params))
                params, value, gradient = trial, trial_value, trial_gradient
                break
            step *= 0.5

        if moved < cfg.refine_step_tol:
            break
        step = min(2.0 * step, 1.0)

    if not abs(value) > abs(start_value):
        return neuron, start_value

    omega, _, b = _unpack(params, angular, neuron.direction)
    return Neuron(tuple(omega), b, k), value
