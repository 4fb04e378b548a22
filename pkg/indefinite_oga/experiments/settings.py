"""
Experiment configuration: flat JSON files plus command-line overrides.
"""

import json
import re
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Optional

import numpy as np

from indefinite_oga.config import (
    DEFAULT_CHECKPOINTS, DEFAULT_DEPENDENCE_TOL, DEFAULT_DUPLICATE_TOL, DEFAULT_N_B, DEFAULT_N_THETA,
    DEFAULT_POINTS_PER_CELL, DEFAULT_REFINE_MAX_ITERS, DEFAULT_REFINE_STEP_TOL,
    NUM_PROCESSES, OUTPUT_DIR, PRESETS_DIR
)
from indefinite_oga.dictionary import SamplingMode
from indefinite_oga.errors import ConfigError, ProblemError
from indefinite_oga.problems import PresetName, check_wavenumber
from indefinite_oga.solver import SolverConfig

# Cells per axis used when a file does not set them
DEFAULT_CELLS = {1: 4000, 2: 400, 3: 50}
PRESET_DIMENSIONS = {
    PresetName.EX1_1D: 1,
    PresetName.EX2_2D: 2,
    PresetName.EX3_2D_ANISOTROPIC: 2,
    PresetName.EX4_3D: 3,
    PresetName.EX5_HELMHOLTZ: 2,
}
OUTPUT_FORMATS = ('csv', 'markdown', 'both')

_PI_MULTIPLE = re.compile(r'^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*\*?\s*pi\s*$')


def parse_parameter(value):
    """
    Read a reaction constant or wavenumber.

    Accepts numbers, numeric strings ('-1e6') and multiples of pi ('2pi', '10*pi').
    """
    if isinstance(value, bool):
        raise ValueError(f"not a number: {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    match = _PI_MULTIPLE.match(str(value))
    if match:
        factor = float(match.group(1)) if match.group(1) else 1.0
        return factor * np.pi
    return float(value)


@dataclass
class ExperimentConfig:
    """
    Everything that affects the results of one experiment.

    Fields left as None are resolved from the preset by `resolved()`.
    """
    preset: str
    parameter: object
    name: Optional[str] = None
    activation_power: int = 2
    cells: object = None
    points_per_cell: int = DEFAULT_POINTS_PER_CELL
    sampling: str = SamplingMode.SIGN_VECTORS.value
    n_b: int = DEFAULT_N_B
    n_theta: int = DEFAULT_N_THETA
    b_margin: float = 0.0
    b_range: Optional[list] = None
    normalize_directions: bool = False
    n_max: int = 256
    checkpoints: Optional[list] = None
    refine: bool = True
    refine_max_iters: int = DEFAULT_REFINE_MAX_ITERS
    refine_step_tol: float = DEFAULT_REFINE_STEP_TOL
    duplicate_tol: float = DEFAULT_DUPLICATE_TOL
    dependence_tol: float = DEFAULT_DEPENDENCE_TOL
    dof_per_neuron: Optional[int] = None
    verify_grid: int = 1
    output_dir: str = OUTPUT_DIR
    format: str = 'csv'
    num_processes: int = NUM_PROCESSES
    cache_samples: bool = True

    @property
    def dim(self):
        return PRESET_DIMENSIONS[PresetName(self.preset)]

    @property
    def parameter_value(self):
        return parse_parameter(self.parameter)

    def validate(self):
        """
        Check every field and raise one ConfigError listing all failures.

        Each value is type-checked before it is compared, so overrides such
        as refine_step_tol=abc are reported per field.
        """
        problems = []

        def check(condition, key, message):
            if not condition:
                problems.append(f"field '{key}': {message}")

        def is_int(value):
            return isinstance(value, (int, np.integer)) and not isinstance(value, bool)

        def is_number(value):
            return (isinstance(value, (int, float, np.integer, np.floating))
                    and not isinstance(value, bool) and np.isfinite(value))

        names = [p.value for p in PresetName]
        known_preset = isinstance(self.preset, str) and self.preset in names
        check(known_preset, 'preset', f"unknown preset {self.preset!r}, expected one of {names}")
        try:
            value = parse_parameter(self.parameter)
            check(np.isfinite(value), 'parameter', f"must be finite, got {value}")
            if known_preset and self.preset == PresetName.EX5_HELMHOLTZ.value:
                check_wavenumber(value)
        except ProblemError as exc:
            check(False, 'parameter', str(exc))
        except (TypeError, ValueError):
            check(False, 'parameter', f"not a number or multiple of pi: {self.parameter!r}")
        if self.name is not None:
            check(isinstance(self.name, str) and self.name, 'name', "must be a nonempty string")
        check(is_int(self.activation_power) and self.activation_power in (1, 2, 3, 4),
              'activation_power', "must be one of 1, 2, 3, 4")
        if self.cells is not None:
            cells = self.cells if isinstance(self.cells, list) else [self.cells]
            check(all(is_int(c) and c >= 1 for c in cells), 'cells', "must be positive integers")
            if known_preset and isinstance(self.cells, list):
                check(len(self.cells) == self.dim, 'cells', f"expected {self.dim} entries")
        check(is_int(self.points_per_cell) and 1 <= self.points_per_cell <= 8,
              'points_per_cell', "must be an integer in [1, 8]")
        modes = [m.value for m in SamplingMode]
        check(isinstance(self.sampling, str) and self.sampling in modes, 'sampling', f"expected one of {modes}")
        if self.sampling == SamplingMode.ANGULAR.value and known_preset:
            check(self.dim == 2, 'sampling', "angular sampling needs a 2D preset")
        check(is_int(self.n_b) and self.n_b >= 1, 'n_b', "must be an integer >= 1")
        check(is_int(self.n_theta) and self.n_theta >= 1, 'n_theta', "must be an integer >= 1")
        check(is_number(self.b_margin) and self.b_margin >= 0, 'b_margin', "must be a number >= 0")
        if self.b_range is not None:
            check(isinstance(self.b_range, list) and len(self.b_range) == 2
                  and all(is_number(b) for b in self.b_range)
                  and self.b_range[0] < self.b_range[1], 'b_range', "must be [lo, hi] with numbers lo < hi")
        for key in ('normalize_directions', 'refine', 'cache_samples'):
            check(isinstance(getattr(self, key), bool), key, "must be true or false")
        check(is_int(self.n_max) and self.n_max >= 0, 'n_max', "must be an integer >= 0")
        if self.checkpoints is not None:
            check(isinstance(self.checkpoints, list) and all(is_int(n) for n in self.checkpoints),
                  'checkpoints', "must be a list of integers")
            if (is_int(self.n_max) and isinstance(self.checkpoints, list)
                    and all(is_int(n) for n in self.checkpoints)):
                check(all(1 <= n <= self.n_max for n in self.checkpoints),
                      'checkpoints', f"entries must lie in [1, {self.n_max}]")
                check(all(a < b for a, b in zip(self.checkpoints, self.checkpoints[1:])),
                      'checkpoints', "must be strictly ascending")
        check(is_int(self.refine_max_iters) and self.refine_max_iters >= 0,
              'refine_max_iters', "must be an integer >= 0")
        check(is_number(self.refine_step_tol) and self.refine_step_tol > 0,
              'refine_step_tol', "must be a number > 0")
        check(is_number(self.duplicate_tol) and self.duplicate_tol >= 0,
              'duplicate_tol', "must be a number >= 0")
        check(is_number(self.dependence_tol) and 0 <= self.dependence_tol < 1,
              'dependence_tol', "must be a number in [0, 1)")
        if self.dof_per_neuron is not None:
            check(is_int(self.dof_per_neuron) and self.dof_per_neuron >= 1,
                  'dof_per_neuron', "must be an integer >= 1")
        check(is_int(self.verify_grid) and self.verify_grid >= 1, 'verify_grid', "must be an integer >= 1")
        check(isinstance(self.output_dir, str) and self.output_dir, 'output_dir', "must be a nonempty string")
        check(isinstance(self.format, str) and self.format in OUTPUT_FORMATS,
              'format', f"expected one of {list(OUTPUT_FORMATS)}")
        check(is_int(self.num_processes) and self.num_processes >= 1,
              'num_processes', "must be an integer >= 1")

        if problems:
            raise ConfigError(problems)
        return self

    def resolved(self):
        """
        Copy with every preset-dependent default materialized.
        """
        data = asdict(self)
        dim = self.dim
        if data['name'] is None:
            data['name'] = f"{self.preset}_{self.parameter}"
        if data['cells'] is None:
            data['cells'] = [DEFAULT_CELLS[dim]] * dim
        elif not isinstance(data['cells'], list):
            data['cells'] = [data['cells']] * dim
        if data['checkpoints'] is None:
            data['checkpoints'] = [n for n in DEFAULT_CHECKPOINTS if n <= self.n_max]
        if data['dof_per_neuron'] is None:
            # Free parameters per neuron: (theta, b) or (omega, b)
            data['dof_per_neuron'] = 2 if self.sampling == SamplingMode.ANGULAR.value else dim + 1
        return ExperimentConfig(**data)

    def solver_config(self):
        return SolverConfig(
            n_max=self.n_max,
            checkpoints=tuple(self.checkpoints) if self.checkpoints is not None else None,
            sampling=SamplingMode(self.sampling),
            n_b=self.n_b,
            n_theta=self.n_theta,
            b_margin=float(self.b_margin),
            b_range=tuple(self.b_range) if self.b_range is not None else None,
            normalize_directions=self.normalize_directions,
            refine=self.refine,
            refine_max_iters=self.refine_max_iters,
            refine_step_tol=float(self.refine_step_tol),
            duplicate_tol=float(self.duplicate_tol),
            dependence_tol=float(self.dependence_tol),
            k=self.activation_power,
            num_processes=self.num_processes,
            cache_samples=self.cache_samples,
        )

    def to_dict(self):
        return asdict(self)


FIELD_NAMES = tuple(f.name for f in fields(ExperimentConfig))


def parse_override(text):
    """
    Split 'key=value'; the value is decoded as JSON when possible.
    """
    if '=' not in text:
        raise ConfigError(f"override {text!r}: expected key=value")
    key, raw = text.split('=', 1)
    key = key.strip()
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw.strip()
    return key, value


def build_config(data, overrides=(), name=None):
    """
    Build and validate an ExperimentConfig from a dict plus overrides.

    Args:
        data: Mapping of config keys
        overrides: Iterable of 'key=value' strings
        name: Fallback experiment name

    Returns:
        Validated, resolved ExperimentConfig
    """
    data = dict(data)
    for text in overrides:
        key, value = parse_override(text)
        data[key] = value

    unknown = sorted(set(data) - set(FIELD_NAMES))
    missing = [key for key in ('preset', 'parameter') if key not in data]
    problems = [f"field '{key}': unknown key" for key in unknown]
    problems += [f"field '{key}': required" for key in missing]
    if problems:
        raise ConfigError(problems)

    if data.get('name') is None and name is not None:
        data['name'] = name
    return ExperimentConfig(**data).validate().resolved()


def find_config(path):
    """
    Resolve a config path, falling back to a shipped preset of that name.
    """
    candidate = Path(path)
    if candidate.exists():
        return candidate
    shipped = PRESETS_DIR / (candidate.name if candidate.suffix == '.json' else candidate.name + '.json')
    if shipped.exists():
        return shipped
    raise ConfigError(f"config file not found: {path}")


def load_config(path, overrides=()):
    """
    Load an experiment file and apply overrides.

    Args:
        path: Path to a JSON experiment file or the name of a shipped preset
        overrides: Iterable of 'key=value' strings

    Returns:
        Validated, resolved ExperimentConfig
    """
    path = find_config(path)
    try:
        with open(path, encoding='utf-8') as handle:
            data = json.load(handle)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a JSON object")
    return build_config(data, overrides, name=path.stem)


def list_shipped_configs():
    """
    Paths of every experiment file shipped with the package.
    """
    return sorted(PRESETS_DIR.glob('*.json'))
