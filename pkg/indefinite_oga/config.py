"""
Configuration settings for the indefinite OGA solver.
"""

import os
from pathlib import Path

# Base directory
BASE_DIR = Path(__file__).resolve().parent.parent

# Shipped experiment files
PRESETS_DIR = Path(__file__).resolve().parent / 'experiments' / 'presets'

# Output settings
OUTPUT_DIR = os.environ.get('OGA_OUTPUT_DIR', 'oga_results')

# Quadrature settings
DEFAULT_POINTS_PER_CELL = 2
MAX_GRID_POINTS = int(os.environ.get('OGA_MAX_GRID_POINTS', 10**8))

# Dictionary settings
DEFAULT_N_B = 200
DEFAULT_N_THETA = 64

# Solver settings
DEFAULT_CHECKPOINTS = (16, 32, 64, 128, 256)
DEFAULT_REFINE_MAX_ITERS = 20
DEFAULT_REFINE_STEP_TOL = 1e-10
DEFAULT_DUPLICATE_TOL = 1e-12
DEFAULT_DEPENDENCE_TOL = 1e-11  # Squared H1 distance from the model span, relative

# Linear algebra settings
PIVOT_TOL = 1e-14  # Relative to the 1-norm of the Gram matrix
CONDITION_WARNING = 1e14
REFINEMENT_STEPS = 2  # Residual corrections after the LU solve

# Processing settings
NUM_PROCESSES = int(os.environ.get('OGA_NUM_PROCESSES', 1))  # 1 runs the scan serially
SCAN_CHUNK_ELEMENTS = int(os.environ.get('OGA_SCAN_CHUNK_ELEMENTS', 2**22))
