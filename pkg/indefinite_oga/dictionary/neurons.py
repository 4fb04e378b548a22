"""
ReLU^k neurons: the elements x -> max(0, omega . x + b)^k of the dictionary.
"""

import math
from dataclasses import dataclass

import numpy as np

from indefinite_oga.errors import DictionaryError

SUPPORTED_POWERS = (1, 2, 3, 4)


def relu_power(z, k):
    """
    sigma_k(z) = max(0, z)^k, elementwise.
    """
    return np.maximum(z, 0.0) ** k


def relu_power_derivative(z, k, order=1):
    """
    The `order`-th derivative of sigma_k, elementwise.

    Uses d^m/dz^m sigma_k = k!/(k-m)! sigma_{k-m} with sigma_0 the Heaviside
    step (zero at the kink). Derivatives past the power vanish.

    Args:
        z: Pre-activation values
        k: Activation power
        order: Derivative order m >= 0

    Returns:
        Array shaped like z
    """
    if order == 0:
        return relu_power(z, k)
    if order > k:
        return np.zeros_like(z, dtype=float)
    factor = math.factorial(k) // math.factorial(k - order)
    if order == k:
        return factor * (np.asarray(z) > 0.0).astype(float)
    return factor * np.maximum(z, 0.0) ** (k - order)


def _points(x, dim):
    """
    Coerce x to an (N, d) array; report whether a single point was given.
    """
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    points = np.atleast_2d(x)
    if points.shape[1] != dim:
        raise DictionaryError(f"point dimension {points.shape[1]} does not match neuron dimension {dim}")
    return points, single


@dataclass(frozen=True)
class Neuron:
    """
    One dictionary element sigma_k(omega . x + b).
    """
    omega: tuple
    b: float
    k: int = 2

    def __post_init__(self):
        omega = tuple(float(v) for v in np.atleast_1d(self.omega))
        if not omega or all(v == 0.0 for v in omega):
            raise DictionaryError("neuron direction must be nonzero")
        if self.k not in SUPPORTED_POWERS:
            raise DictionaryError(f"unsupported activation power {self.k}")
        object.__setattr__(self, 'omega', omega)
        object.__setattr__(self, 'b', float(self.b))
        object.__setattr__(self, 'k', int(self.k))

    @property
    def dim(self):
        return len(self.omega)

    @property
    def direction(self):
        return np.array(self.omega)

    @property
    def theta(self):
        """
        Polar angle of a 2D direction in [0, 2*pi).
        """
        return math.atan2(self.omega[1], self.omega[0]) % (2.0 * math.pi)

    def pre_activation(self, points):
        return points @ self.direction + self.b

    # Field interface, used by sample_field
    def value(self, x):
        return eval_neuron(self, x)

    def gradient(self, x):
        return grad_neuron(self, x)

    def to_dict(self):
        return {'omega': list(self.omega), 'b': self.b, 'k': self.k}


def eval_neuron(neuron, x):
    """
    Evaluate max(0, omega . x + b)^k.

    Args:
        neuron: Neuron
        x: A single d-vector or an (N, d) array of points

    Returns:
        Float for a single point, (N,) array otherwise
    """
    points, single = _points(x, neuron.dim)
    values = relu_power(neuron.pre_activation(points), neuron.k)
    return float(values[0]) if single else values


def grad_neuron(neuron, x):
    """
    Gradient k * max(0, omega . x + b)^(k-1) * omega.

    For k = 1 the kink uses the one-sided (zero) derivative.

    Args:
        neuron: Neuron
        x: A single d-vector or an (N, d) array of points

    Returns:
        (d,) array for a single point, (N, d) array otherwise
    """
    points, single = _points(x, neuron.dim)
    slope = relu_power_derivative(neuron.pre_activation(points), neuron.k)
    gradients = slope[:, None] * neuron.direction[None, :]
    return gradients[0] if single else gradients
