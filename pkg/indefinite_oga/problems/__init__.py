"""
Problems module - indefinite elliptic problems and their manufactured presets.

Available presets:
    - example1: 1D, u = cos(pi x) on (-1, 1)
    - example2: 2D Laplacian, u = cos(10 pi x) cos(10 pi y)
    - example3: 2D anisotropic A = [2 1; 1 3]
    - example4: 3D Laplacian, u = cos(2 pi x) cos(2 pi y) cos(2 pi z)
    - example5: 2D Helmholtz with wavenumber k
"""

from indefinite_oga.problems.base import (
    Field, ExactSolution, ProblemSpec, FieldSample, sample_field, bilinear_form,
    source_pairing, l2_norm_squared, h1_inner, h1_norm_squared, energy_functional, garding_margin
)
from indefinite_oga.problems.presets import PresetName, PRESET_REGISTRY, check_wavenumber, preset, list_presets

__all__ = [
    'Field', 'ExactSolution', 'ProblemSpec', 'FieldSample', 'sample_field', 'bilinear_form',
    'source_pairing', 'l2_norm_squared', 'h1_inner', 'h1_norm_squared', 'energy_functional', 'garding_margin',
    'PresetName', 'PRESET_REGISTRY', 'check_wavenumber', 'preset', 'list_presets',
]
