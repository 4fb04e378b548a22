"""
Experiment runner: builds the problem, runs the greedy solver and writes
the convergence table together with its sidecar files.
"""

import json
import os
import time
from dataclasses import asdict, dataclass, field

import pandas as pd

from indefinite_oga import __version__
from indefinite_oga.config import MAX_GRID_POINTS
from indefinite_oga.metrics import convergence_table, mean_order
from indefinite_oga.problems import preset
from indefinite_oga.quadrature import build_grid
from indefinite_oga.solver import run

TABLE_COLUMNS = ['n', 'dof', 'l2_error', 'l2_order', 'h1_error', 'h1_order']


@dataclass
class ExperimentResult:
    rows: list
    metadata: dict
    paths: dict = field(default_factory=dict)


def _table_frame(rows, missing):
    records = []
    for row in rows:
        records.append({
            'n': str(row.n),
            'dof': str(row.dof),
            'l2_error': f"{row.l2_error:.3e}",
            'l2_order': missing if row.l2_order is None else f"{row.l2_order:.2f}",
            'h1_error': f"{row.h1_error:.3e}",
            'h1_order': missing if row.h1_order is None else f"{row.h1_order:.2f}",
        })
    return pd.DataFrame.from_records(records, columns=TABLE_COLUMNS)


def emit_table(rows, format='csv'):
    """
    Render convergence rows as CSV or a markdown table.

    Errors are printed with 4 significant digits and orders with 2 decimals.
    Absent orders are empty cells in CSV and '-' in markdown.

    Args:
        rows: Non-empty list of ConvergenceRow
        format: 'csv' or 'markdown'

    Returns:
        Table text ending in a newline
    """
    if not rows:
        raise ValueError("cannot emit an empty table")

    if format == 'csv':
        return _table_frame(rows, '').to_csv(index=False, lineterminator='\n')

    if format == 'markdown':
        frame = _table_frame(rows, '-')
        lines = ['| ' + ' | '.join(TABLE_COLUMNS) + ' |',
                 '|' + '|'.join('---' for _ in TABLE_COLUMNS) + '|']
        for record in frame.itertuples(index=False):
            lines.append('| ' + ' | '.join(record) + ' |')
        return '\n'.join(lines) + '\n'

    raise ValueError(f"unknown table format: {format!r}")


def _history_frame(history):
    records = []
    for record in history:
        data = asdict(record)
        data['omega'] = ' '.join(f"{w:.17g}" for w in record.omega)
        records.append(data)
    return pd.DataFrame.from_records(records, columns=[
        'n', 'omega', 'b', 'grid_objective', 'objective', 'refined',
        'orthogonality_defect', 'condition', 'rejected',
    ])


def _write_text(path, text):
    with open(path, 'w', encoding='utf-8', newline='') as handle:
        handle.write(text)
    return path


def write_outputs(cfg, rows, solve_result, metadata, output_dir=None):
    """
    Write the table, metadata, iteration history and final model.

    Returns:
        Dict of output kind -> path
    """
    output_dir = output_dir or cfg.output_dir
    if not os.path.exists(output_dir):
        os.makedirs(output_dir)

    base = os.path.join(output_dir, cfg.name)
    paths = {}
    if cfg.format in ('csv', 'both'):
        paths['csv'] = _write_text(f"{base}.csv", emit_table(rows, 'csv'))
    if cfg.format in ('markdown', 'both'):
        paths['markdown'] = _write_text(f"{base}.md", emit_table(rows, 'markdown'))

    paths['metadata'] = _write_text(f"{base}.meta.json", json.dumps(metadata, indent=2) + '\n')
    paths['history'] = _write_text(
        f"{base}.history.csv",
        _history_frame(solve_result.history).to_csv(index=False, lineterminator='\n', float_format='%.10e'),
    )
    paths['model'] = _write_text(f"{base}.model.json", json.dumps(solve_result.model.to_dict(), indent=2) + '\n')

    for path in paths.values():
        print(f"Saved {path}")
    return paths


def run_experiment(cfg, write=True, progress=True):
    """
    Run one experiment end to end.

    Args:
        cfg: Validated, resolved ExperimentConfig
        write: Write output files to cfg.output_dir
        progress: Show a progress bar over greedy steps

    Returns:
        ExperimentResult with the convergence rows and the metadata echo

    Raises:
        ProblemError, QuadratureError: On an invalid problem or grid
        SolverError: If a greedy step fails, with its iteration index
    """
    print(f"Running experiment {cfg.name}...")
    start_time = time.time()

    problem = preset(cfg.preset, cfg.parameter_value)
    grid = build_grid(problem.domain, tuple(cfg.cells), cfg.points_per_cell, max_points=MAX_GRID_POINTS)
    error_grid = grid.refined(cfg.verify_grid)
    print(f"Built quadrature grid with {grid.n_points} points in {time.time() - start_time:.2f} seconds.")

    solve_start = time.time()
    solve_result = run(problem, grid, cfg.solver_config(), error_grid=error_grid, progress=progress)
    print(f"Completed {cfg.n_max} greedy steps in {time.time() - solve_start:.2f} seconds.")

    rows = convergence_table(solve_result.checkpoints, cfg.dof_per_neuron)
    defects = [record.orthogonality_defect for record in solve_result.history]
    metadata = {
        'version': __version__,
        'config': cfg.to_dict(),
        'parameter_value': cfg.parameter_value,
        'problem': problem.summary(),
        'grid': {'n_points': grid.n_points, 'cells': list(grid.cells_per_dim),
                 'error_grid_points': error_grid.n_points},
        'n_candidates': solve_result.n_candidates,
        'checkpoints': [
            {'n': point.n, 'l2_error': point.l2_error, 'h1_error': point.h1_error,
             'energy_error': point.energy_error, 'energy': point.energy}
            for point in solve_result.checkpoints
        ],
        'mean_l2_order': mean_order(rows, 'l2_order'),
        'mean_h1_order': mean_order(rows, 'h1_order'),
        'max_orthogonality_defect': max(defects) if defects else 0.0,
        'rejected_candidates': sum(record.rejected for record in solve_result.history),
        'elapsed_seconds': time.time() - start_time,
    }

    result = ExperimentResult(rows, metadata)
    if write:
        result.paths = write_outputs(cfg, rows, solve_result, metadata)

    print(f"Experiment {cfg.name} finished in {time.time() - start_time:.2f} seconds!")
    return result
