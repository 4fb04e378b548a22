"""
Solver configuration and the per-run iteration cache.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from indefinite_oga.config import (
    DEFAULT_CHECKPOINTS, DEFAULT_DEPENDENCE_TOL, DEFAULT_DUPLICATE_TOL, DEFAULT_N_B,
    DEFAULT_N_THETA, DEFAULT_REFINE_MAX_ITERS, DEFAULT_REFINE_STEP_TOL, NUM_PROCESSES
)
from indefinite_oga.dictionary import SamplingMode, sample_candidates
from indefinite_oga.errors import ConfigError
from indefinite_oga.linalg import GramSystem, SpanFactor
from indefinite_oga.problems import FieldSample, sample_field
from indefinite_oga.solver.model import Model


@dataclass
class SolverConfig:
    """
    Knobs of one greedy run.

    `checkpoints` defaults to the entries of DEFAULT_CHECKPOINTS not above n_max.
    """
    n_max: int = 256
    checkpoints: Optional[tuple] = None
    sampling: SamplingMode = SamplingMode.SIGN_VECTORS
    n_b: int = DEFAULT_N_B
    n_theta: int = DEFAULT_N_THETA
    b_margin: float = 0.0
    b_range: Optional[tuple] = None
    normalize_directions: bool = False
    refine: bool = True
    refine_max_iters: int = DEFAULT_REFINE_MAX_ITERS
    refine_step_tol: float = DEFAULT_REFINE_STEP_TOL
    duplicate_tol: float = DEFAULT_DUPLICATE_TOL
    dependence_tol: float = DEFAULT_DEPENDENCE_TOL
    k: int = 2
    num_processes: int = NUM_PROCESSES
    cache_samples: bool = True

    def __post_init__(self):
        self.sampling = SamplingMode(self.sampling)
        if self.checkpoints is None:
            self.checkpoints = tuple(n for n in DEFAULT_CHECKPOINTS if n <= self.n_max)
        self.checkpoints = tuple(int(n) for n in self.checkpoints)

        problems = []
        if self.n_max < 0:
            problems.append(f"field 'n_max': must be >= 0, got {self.n_max}")
        if any(n < 1 or n > self.n_max for n in self.checkpoints):
            problems.append(f"field 'checkpoints': entries must lie in [1, {self.n_max}]")
        if any(a >= b for a, b in zip(self.checkpoints, self.checkpoints[1:])):
            problems.append("field 'checkpoints': must be strictly ascending")
        if self.n_b < 1:
            problems.append(f"field 'n_b': must be >= 1, got {self.n_b}")
        if self.sampling is SamplingMode.ANGULAR and self.n_theta < 1:
            problems.append(f"field 'n_theta': must be >= 1, got {self.n_theta}")
        if self.refine_max_iters < 0:
            problems.append("field 'refine_max_iters': must be >= 0")
        if not self.refine_step_tol > 0:
            problems.append("field 'refine_step_tol': must be > 0")
        if self.duplicate_tol < 0:
            problems.append("field 'duplicate_tol': must be >= 0")
        if not 0 <= self.dependence_tol < 1:
            problems.append("field 'dependence_tol': must lie in [0, 1)")
        if problems:
            raise ConfigError(problems)

    def candidate_set(self, domain):
        return sample_candidates(
            domain, self.sampling, self.n_b, n_theta=self.n_theta, k=self.k,
            margin=self.b_margin, b_range=self.b_range, normalize=self.normalize_directions,
        )


@dataclass(eq=False)
class SolverState:
    """
    Mutable, single-owner cache of one run.

    model_values always equals the model sampled at the grid nodes, and the
    weighted arrays below are derived from it:
        flux     = w * (A grad u_{n-1})      (N, d)
        reaction = w * (c u_{n-1} - f)       (N,)
    so that <g, u_{n-1} - u>_H = sum(sigma'(z) flux . omega + reaction sigma(z)).
    span holds the Cholesky factor of the H1 Gram matrix of the model neurons.
    """
    model: Model
    grid: object
    problem: object
    candidates: object
    source_values: np.ndarray
    model_values: FieldSample = None
    gram: GramSystem = field(default_factory=GramSystem.empty)
    span: SpanFactor = field(default_factory=SpanFactor.empty)
    neuron_samples: list = field(default_factory=list)
    cache_samples: bool = True
    condition: float = 1.0
    flux: np.ndarray = None
    reaction: np.ndarray = None

    @classmethod
    def create(cls, problem, grid, cfg):
        """
        Initial state u_0 = 0 for a run of cfg over grid.
        """
        state = cls(
            model=Model(),
            grid=grid,
            problem=problem,
            candidates=cfg.candidate_set(problem.domain),
            source_values=problem.source_values(grid.nodes),
            model_values=FieldSample.zeros(grid),
            cache_samples=cfg.cache_samples,
        )
        state.refresh_weighted()
        return state

    def refresh_weighted(self):
        w = self.grid.weights
        self.flux = w[:, None] * (self.model_values.gradients @ self.problem.diffusion)
        self.reaction = w * (self.problem.reaction * self.model_values.values - self.source_values)

    def neuron_sample(self, j):
        """
        FieldSample of the j-th model neuron, from cache or freshly evaluated.
        """
        if j < len(self.neuron_samples):
            return self.neuron_samples[j]
        return sample_field(self.grid, self.model.neurons[j])

    def remember_sample(self, sample):
        if self.cache_samples:
            self.neuron_samples.append(sample)
