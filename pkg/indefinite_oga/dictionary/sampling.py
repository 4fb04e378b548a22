"""
Candidate (omega, b) samples used to seed the greedy argmax.
"""

import itertools
from dataclasses import dataclass
from enum import Enum

import numpy as np

from indefinite_oga.dictionary.neurons import Neuron, SUPPORTED_POWERS
from indefinite_oga.errors import DictionaryError


class SamplingMode(Enum):
    SIGN_VECTORS = 'sign_vectors'
    ANGULAR = 'angular'


@dataclass(frozen=True, eq=False)
class CandidateSet:
    """
    Direction-major, b-ascending grid of candidate neurons.

    Candidate i corresponds to directions[i // len(offsets)] and
    offsets[i % len(offsets)].
    """
    mode: SamplingMode
    directions: np.ndarray
    offsets: np.ndarray
    k: int
    n_b: int
    b_lo: float
    b_hi: float
    thetas: np.ndarray = None

    def __len__(self):
        return len(self.directions) * len(self.offsets)

    @property
    def neurons(self):
        return [self.neuron(i) for i in range(len(self))]

    def neuron(self, index):
        i_dir, i_b = divmod(int(index), len(self.offsets))
        return Neuron(tuple(self.directions[i_dir]), self.offsets[i_b], self.k)

    def theta(self, index):
        """
        Angle of the candidate direction (angular mode only).
        """
        return float(self.thetas[int(index) // len(self.offsets)])


def sign_vectors(dim, normalize=False):
    """
    All 2^dim vectors (+-1, ..., +-1), ordered as itertools.product((1, -1)).
    """
    directions = np.array(list(itertools.product((1.0, -1.0), repeat=dim)))
    if normalize:
        directions = directions / np.sqrt(dim)
    return directions


def angular_directions(n_theta):
    """
    (cos theta_i, sin theta_i) for theta_i = 2*pi*i/n_theta, i = 0..n_theta-1.
    """
    thetas = 2.0 * np.pi * np.arange(n_theta) / n_theta
    return np.stack([np.cos(thetas), np.sin(thetas)], axis=1), thetas


def compute_b_range(domain, directions, margin=0.0):
    """
    Offsets for which every hyperplane omega . x + b = 0 can meet the box.

    Args:
        domain: BoxDomain
        directions: Nonempty list or (m, d) array of directions
        margin: Nonnegative widening on both ends

    Returns:
        Tuple (b_lo, b_hi)
    """
    directions = np.atleast_2d(np.asarray(directions, dtype=float))
    if directions.size == 0:
        raise DictionaryError("direction list is empty")
    if margin < 0:
        raise DictionaryError(f"b-range margin must be nonnegative, got {margin}")
    # omega . x is linear, so its extrema over the box sit at the corners
    projections = domain.corners() @ directions.T
    b_lo = -float(projections.max()) - margin
    b_hi = -float(projections.min()) + margin
    return b_lo, b_hi


def sample_candidates(domain, mode, n_b, n_theta=None, k=2, margin=0.0,
                      b_range=None, normalize=False):
    """
    Enumerate the candidate neurons for the greedy argmax.

    Args:
        domain: BoxDomain
        mode: SamplingMode (or its string value)
        n_b: b-grid resolution; n_b + 1 offsets are generated
        n_theta: Number of angles (angular mode only)
        k: Activation power
        margin: Widening passed to compute_b_range
        b_range: Explicit (b_lo, b_hi) overriding compute_b_range
        normalize: Scale sign vectors to unit length

    Returns:
        CandidateSet
    """
    mode = SamplingMode(mode)
    if n_b is None or n_b < 1:
        raise DictionaryError(f"n_b must be >= 1, got {n_b}")
    if k not in SUPPORTED_POWERS:
        raise DictionaryError(f"unsupported activation power {k}")

    thetas = None
    if mode is SamplingMode.SIGN_VECTORS:
        directions = sign_vectors(domain.dim, normalize=normalize)
    else:
        if domain.dim != 2:
            raise DictionaryError(f"angular sampling requires dimension 2, got {domain.dim}")
        if n_theta is None or n_theta < 1:
            raise DictionaryError(f"n_theta must be >= 1, got {n_theta}")
        directions, thetas = angular_directions(n_theta)

    if b_range is None:
        b_lo, b_hi = compute_b_range(domain, directions, margin)
    else:
        b_lo, b_hi = (float(v) for v in b_range)
        if not b_lo < b_hi:
            raise DictionaryError(f"empty b-range [{b_lo}, {b_hi}]")

    offsets = b_lo + (b_hi - b_lo) * np.arange(n_b + 1) / n_b
    directions.flags.writeable = False
    offsets.flags.writeable = False
    return CandidateSet(mode, directions, offsets, int(k), int(n_b), b_lo, b_hi, thetas)
