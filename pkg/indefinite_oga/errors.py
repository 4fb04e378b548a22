"""
Exceptions raised by the solver library.
"""


class OGAError(Exception):
    """
    Base class for every error raised by this package.
    """


class QuadratureError(OGAError, ValueError):
    """
    Invalid domain, unsupported rule or an oversized grid.
    """


class DictionaryError(OGAError, ValueError):
    """
    Invalid neuron parameters or candidate sampling request.
    """


class ProblemError(OGAError, ValueError):
    """
    Invalid coefficients or unknown problem preset.
    """


class SingularProjectionError(OGAError):
    """
    The Gram system of the projection step is numerically singular.
    """

    def __init__(self, pivot, message="singular projection system"):
        super().__init__(f"{message} (pivot {pivot})")
        self.pivot = pivot


class DependentNeuronError(OGAError):
    """
    A selected neuron lies numerically in the span of the model.

    `ratio` is its squared H1 distance from the span relative to its squared H1 norm.
    """

    def __init__(self, ratio, message="neuron is numerically dependent on the model"):
        super().__init__(f"{message} (relative distance squared {ratio:.3e})")
        self.ratio = ratio


class DictionaryExhaustedError(OGAError):
    """
    Every candidate duplicates a model neuron or was rejected.
    """

    def __init__(self, message="dictionary exhausted"):
        super().__init__(message)


class SolverError(OGAError):
    """
    A greedy step failed; carries the 1-based iteration index.
    """

    def __init__(self, iteration, cause):
        super().__init__(f"iteration {iteration}: {cause}")
        self.iteration = iteration


class DegenerateOrderError(OGAError, ValueError):
    """
    A convergence order was requested from non-positive errors.
    """

    def __init__(self, message="degenerate order"):
        super().__init__(message)


class ConfigError(OGAError, ValueError):
    """
    Experiment configuration failed validation.

    The message lists one line per offending field.
    """

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("invalid experiment configuration:\n  " + "\n  ".join(self.problems))
