from indefinite_oga.solver.model import Model
from indefinite_oga.solver.state import SolverConfig, SolverState
from indefinite_oga.solver.oga import (
    Selection, IterationRecord, Checkpoint, SolveResult,
    residual_functional, rank_candidates, select_candidate, select_neuron, project,
    independence, admit, advance, run
)

__all__ = [
    'Model', 'SolverConfig', 'SolverState', 'Selection', 'IterationRecord', 'Checkpoint',
    'SolveResult', 'residual_functional', 'rank_candidates', 'select_candidate',
    'select_neuron', 'project', 'independence', 'admit', 'advance', 'run',
]
