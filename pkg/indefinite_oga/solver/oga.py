"""
The orthogonal greedy iteration:

    u_0 = 0,  g_n = argmax_g |<g, u_{n-1} - u>_H|,  u_n = Galerkin solution on span(g_1..g_n)

with <u, v>_H = a(u, v) the (indefinite) bilinear form of the problem.
Candidates numerically dependent on the current span are passed over for
the next-ranked one.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from tqdm import tqdm

from indefinite_oga.dictionary import SamplingMode, relu_power, relu_power_derivative
from indefinite_oga.errors import (
    DependentNeuronError, DictionaryExhaustedError, OGAError, SingularProjectionError, SolverError
)
from indefinite_oga.linalg import solve_symmetric
from indefinite_oga.metrics import energy_error, h1_error, l2_error
from indefinite_oga.problems import (
    FieldSample, bilinear_form, energy_functional, h1_inner, h1_norm_squared, sample_field, source_pairing
)
from indefinite_oga.solver.model import Model
from indefinite_oga.solver.objective import scan_candidates
from indefinite_oga.solver.refine import refine_neuron
from indefinite_oga.solver.state import SolverState
from indefinite_oga.utils.parallel import ScanPool

logger = logging.getLogger(__name__)


@dataclass
class Selection:
    """
    Outcome of one argmax: the chosen neuron and how it was found.
    """
    neuron: object
    candidate_index: int
    grid_objective: float
    objective: float
    refined: bool
    rejected: int = 0


@dataclass
class IterationRecord:
    n: int
    omega: tuple
    b: float
    grid_objective: float
    objective: float
    refined: bool
    orthogonality_defect: float
    condition: float
    rejected: int = 0


@dataclass
class Checkpoint:
    """
    Snapshot and error metrics after n greedy steps.
    """
    n: int
    model: Model
    l2_error: Optional[float] = None
    h1_error: Optional[float] = None
    energy_error: Optional[float] = None
    energy: Optional[float] = None


@dataclass
class SolveResult:
    checkpoints: list
    history: list = field(default_factory=list)
    model: Model = None
    n_candidates: int = 0


def residual_functional(state, g):
    """
    <g, u_{n-1} - u>_H = integral of grad g . A grad u_{n-1} + c g u_{n-1} - f g.

    Only g is evaluated; u_{n-1} and f come from the state caches.

    Args:
        state: SolverState
        g: Neuron

    Returns:
        Float
    """
    omega = g.direction
    z = state.grid.nodes @ omega + g.b
    return float(np.dot(state.flux @ omega, relu_power_derivative(z, g.k))
                 + np.dot(state.reaction, relu_power(z, g.k)))


def rank_candidates(scores):
    """
    Candidate indices by decreasing |score|; ties keep the lower index first.
    """
    magnitude = np.abs(np.asarray(scores, dtype=float))
    magnitude = np.where(np.isnan(magnitude), -np.inf, magnitude)
    return np.argsort(-magnitude, kind='stable')


def is_duplicate(neuron, model, tol):
    """
    True if the model already holds a neuron with the same direction and |b - b'| <= tol.
    """
    return any(
        existing.omega == neuron.omega and abs(existing.b - neuron.b) <= tol
        for existing in model.neurons
    )


def select_candidate(state, cfg, scores=None, excluded=()):
    """
    Grid argmax over the candidate set followed by optional refinement.

    Args:
        state: SolverState
        cfg: SolverConfig
        scores: Precomputed candidate objectives (default: scan now)
        excluded: Candidate indices rejected earlier in this step

    Returns:
        Selection

    Raises:
        DictionaryExhaustedError: If every candidate is excluded or duplicates a model neuron
    """
    candidates = state.candidates
    if scores is None:
        scores = scan_candidates(state, num_processes=cfg.num_processes)

    chosen = None
    for index in rank_candidates(scores):
        if int(index) in excluded:
            continue
        neuron = candidates.neuron(index)
        if not is_duplicate(neuron, state.model, cfg.duplicate_tol):
            chosen = int(index)
            break
    if chosen is None:
        raise DictionaryExhaustedError()

    neuron = candidates.neuron(chosen)
    grid_objective = float(scores[chosen])
    selection = Selection(neuron, chosen, grid_objective, grid_objective, False)
    if not cfg.refine or cfg.refine_max_iters == 0:
        return selection

    theta = candidates.theta(chosen) if candidates.mode is SamplingMode.ANGULAR else None
    refined, refined_objective = refine_neuron(state, cfg, neuron, theta=theta)
    if (refined is not neuron
            and abs(refined_objective) >= abs(grid_objective)
            and not is_duplicate(refined, state.model, cfg.duplicate_tol)):
        selection = Selection(refined, chosen, grid_objective, refined_objective, True)
    return selection


def select_neuron(state, cfg):
    """
    g_n = argmax over the dictionary of |<g, u_{n-1} - u>_H|.

    Returns:
        Neuron
    """
    return select_candidate(state, cfg).neuron


def _refresh_model_values(state):
    values = FieldSample.zeros(state.grid)
    for j, a in enumerate(state.model.coefficients):
        values = values.combine(a, state.neuron_sample(j))
    state.model_values = values
    state.refresh_weighted()


def project(state, sample=None):
    """
    Galerkin projection onto the span of the model neurons.

    Grows the Gram system by the newest neuron (if it is not yet part of
    it), solves for all coefficients and refreshes the cached iterate.
    Nothing is changed when the solve fails.

    Args:
        state: SolverState whose model holds at least one neuron
        sample: FieldSample of the newest neuron, if already evaluated

    Returns:
        The same state, updated in place

    Raises:
        SingularProjectionError: If the Gram system is numerically singular
    """
    n = state.model.n
    if n == 0:
        raise ValueError("projection needs at least one neuron")

    gram, new = state.gram, None
    if gram.n == n - 1:
        new = sample if sample is not None else sample_field(state.grid, state.model.neurons[-1])
        column = [bilinear_form(state.grid, state.problem, new, state.neuron_sample(j))
                  for j in range(n - 1)]
        column.append(bilinear_form(state.grid, state.problem, new, new))
        rhs_entry = source_pairing(state.grid, state.source_values, new)
        gram = gram.extended(column, rhs_entry)
    elif gram.n != n:
        raise ValueError(f"Gram system of size {gram.n} is out of step with {n} neurons")

    coefficients, condition = solve_symmetric(gram)
    state.gram = gram
    if new is not None:
        state.remember_sample(new)
    state.model.set_coefficients(coefficients)
    state.condition = condition
    _refresh_model_values(state)
    return state


def independence(state, sample):
    """
    Schur complement of a sampled neuron against the model in the H1 inner product.

    Returns:
        Tuple (ratio, s, y): s and y as from SpanFactor.schur_complement and
        ratio = s / ||g||_1^2, the relative squared distance from the model span
        (0 for a neuron that vanishes at every node)
    """
    column = [h1_inner(state.grid, sample, state.neuron_sample(j)) for j in range(state.model.n)]
    diagonal = h1_norm_squared(state.grid, sample)
    s, y = state.span.schur_complement(column, diagonal)
    ratio = s / diagonal if diagonal > 0 else 0.0
    return ratio, s, y


def admit(state, neuron, cfg):
    """
    Append a neuron and project, unless it is numerically dependent on the model.

    Raises:
        DependentNeuronError: If its relative squared H1 distance from the
            model span does not exceed cfg.dependence_tol
        SingularProjectionError: If the extended Gram system is singular;
            the model is left as it was
    """
    sample = sample_field(state.grid, neuron)
    ratio, s, y = independence(state, sample)
    if not ratio > cfg.dependence_tol:
        raise DependentNeuronError(ratio)

    state.model.append(neuron)
    try:
        project(state, sample=sample)
    except SingularProjectionError:
        state.model.discard_last()
        raise
    state.span = state.span.extended(y, s)
    return state


def advance(state, cfg, pool=None):
    """
    One greedy step: scan once, then admit the best acceptable candidate.

    A candidate rejected by `admit` is excluded and the next-ranked one is
    tried against the same scores.

    Args:
        state: SolverState
        cfg: SolverConfig
        pool: Open ScanPool for the candidate scan

    Returns:
        Selection of the admitted neuron

    Raises:
        DictionaryExhaustedError: If no acceptable candidate is left
    """
    scores = scan_candidates(state, num_processes=cfg.num_processes, pool=pool)
    excluded = set()
    while True:
        selection = select_candidate(state, cfg, scores=scores, excluded=excluded)
        try:
            admit(state, selection.neuron, cfg)
        except (DependentNeuronError, SingularProjectionError) as exc:
            logger.debug("rejected candidate %d: %s", selection.candidate_index, exc)
            excluded.add(selection.candidate_index)
            continue
        selection.rejected = len(excluded)
        return selection


def _checkpoint(n, state, error_grid):
    problem = state.problem
    model = state.model.snapshot()
    if problem.exact is None:
        return Checkpoint(n, model)
    sample = sample_field(error_grid, model) if model.n else FieldSample.zeros(error_grid)
    return Checkpoint(
        n, model,
        l2_error=l2_error(error_grid, model, problem.exact),
        h1_error=h1_error(error_grid, model, problem.exact),
        energy_error=energy_error(error_grid, problem, model, problem.exact),
        energy=energy_functional(error_grid, problem, sample),
    )


def run(problem, grid, cfg, error_grid=None, progress=False):
    """
    Run n_max greedy steps and record error metrics at the checkpoints.

    Args:
        problem: ProblemSpec
        grid: QuadratureGrid used for the solve
        cfg: SolverConfig
        error_grid: Grid for the error norms (default: the solve grid)
        progress: Show a tqdm bar over iterations

    Returns:
        SolveResult; with n_max = 0 it holds a single checkpoint at n = 0

    Raises:
        SolverError: Wrapping any failing step, with the iteration index
    """
    if error_grid is None:
        error_grid = grid
    state = SolverState.create(problem, grid, cfg)
    result = SolveResult(checkpoints=[], n_candidates=len(state.candidates))
    wanted = set(cfg.checkpoints)

    if cfg.n_max == 0:
        result.checkpoints.append(_checkpoint(0, state, error_grid))

    start_time = time.time()
    with ScanPool(cfg.num_processes, shared={'nodes': grid.nodes}) as pool:
        for n in tqdm(range(1, cfg.n_max + 1), desc=problem.name, disable=not progress):
            try:
                selection = advance(state, cfg, pool=pool)
            except OGAError as exc:
                raise SolverError(n, exc) from exc

            neuron = selection.neuron
            result.history.append(IterationRecord(
                n, neuron.omega, neuron.b, selection.grid_objective, selection.objective,
                selection.refined, state.gram.orthogonality_defect(state.model.coefficients),
                state.condition, selection.rejected,
            ))
            logger.debug("step %d: omega=%s b=%.6f objective=%.3e rejected=%d",
                         n, neuron.omega, neuron.b, selection.objective, selection.rejected)

            if n in wanted:
                result.checkpoints.append(_checkpoint(n, state, error_grid))

    logger.debug("ran %d steps in %.2f seconds", cfg.n_max, time.time() - start_time)
    result.model = state.model.snapshot()
    return result
