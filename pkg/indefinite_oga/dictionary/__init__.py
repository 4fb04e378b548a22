from indefinite_oga.dictionary.neurons import (
    Neuron, eval_neuron, grad_neuron, relu_power, relu_power_derivative
)
from indefinite_oga.dictionary.sampling import (
    SamplingMode, CandidateSet, sample_candidates, compute_b_range, sign_vectors
)

__all__ = [
    'Neuron', 'eval_neuron', 'grad_neuron', 'relu_power', 'relu_power_derivative',
    'SamplingMode', 'CandidateSet', 'sample_candidates', 'compute_b_range', 'sign_vectors',
]
