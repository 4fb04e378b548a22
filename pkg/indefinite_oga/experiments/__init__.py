"""
Experiments module - configuration files and the table-producing runner.
"""

from indefinite_oga.experiments.settings import (
    ExperimentConfig, parse_parameter, parse_override, build_config, load_config,
    list_shipped_configs
)
from indefinite_oga.experiments.runner import (
    ExperimentResult, TABLE_COLUMNS, emit_table, run_experiment, write_outputs
)

__all__ = [
    'ExperimentConfig', 'parse_parameter', 'parse_override', 'build_config', 'load_config',
    'list_shipped_configs', 'ExperimentResult', 'TABLE_COLUMNS', 'emit_table',
    'run_experiment', 'write_outputs',
]
