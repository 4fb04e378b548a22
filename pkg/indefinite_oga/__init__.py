"""
Orthogonal greedy solver for indefinite elliptic problems over shallow
ReLU^k neuron dictionaries.
"""

__version__ = "0.1.0"
