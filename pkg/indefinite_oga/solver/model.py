"""
The greedy iterate u_n = sum_i a_i g_i.
"""

import copy
from dataclasses import dataclass, field

import numpy as np

from indefinite_oga.dictionary import Neuron, eval_neuron, grad_neuron


@dataclass
class Model:
    """
    Neurons in selection order with their current coefficients.

    Neurons are append-only; coefficients are replaced by every projection.
    """
    neurons: list = field(default_factory=list)
    coefficients: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        self.coefficients = np.asarray(self.coefficients, dtype=float).reshape(-1)
        if len(self.neurons) != len(self.coefficients):
            raise ValueError(
                f"{len(self.neurons)} neurons but {len(self.coefficients)} coefficients"
            )

    def __len__(self):
        return len(self.neurons)

    @property
    def n(self):
        return len(self.neurons)

    def append(self, neuron, coefficient=0.0):
        self.neurons.append(neuron)
        self.coefficients = np.append(self.coefficients, coefficient)

    def discard_last(self):
        """
        Undo an append whose projection failed.
        """
        self.neurons.pop()
        self.coefficients = self.coefficients[:-1]

    def set_coefficients(self, coefficients):
        coefficients = np.asarray(coefficients, dtype=float).reshape(-1)
        if len(coefficients) != len(self.neurons):
            raise ValueError(f"expected {len(self.neurons)} coefficients, got {len(coefficients)}")
        self.coefficients = coefficients

    def snapshot(self):
        """
        Deep copy that later iterations cannot mutate.
        """
        return copy.deepcopy(self)

    # Field interface, used by sample_field
    def value(self, x):
        points = np.atleast_2d(x)
        values = np.zeros(len(points))
        for a, neuron in zip(self.coefficients, self.neurons):
            values += a * eval_neuron(neuron, points)
        return values

    def gradient(self, x):
        points = np.atleast_2d(x)
        gradients = np.zeros(points.shape)
        for a, neuron in zip(self.coefficients, self.neurons):
            gradients += a * grad_neuron(neuron, points)
        return gradients

    def to_dict(self):
        return {
            'neurons': [n.to_dict() for n in self.neurons],
            'coefficients': self.coefficients.tolist(),
        }

    @classmethod
    def from_dict(cls, data):
        neurons = [Neuron(tuple(n['omega']), n['b'], n['k']) for n in data['neurons']]
        return cls(neurons, np.array(data['coefficients'], dtype=float))
