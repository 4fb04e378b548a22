"""
Manufactured-solution presets for the five benchmark problems.

Each source is derived by hand as f = -div(A grad u) + c u from the stated
exact solution, and every exact solution satisfies A grad u . n = 0 on the
boundary, so all presets are pure natural-boundary problems.
"""

from enum import Enum

import numpy as np

from indefinite_oga.errors import ProblemError
from indefinite_oga.problems.base import ExactSolution, ProblemSpec
from indefinite_oga.quadrature import BoxDomain

PI = np.pi
WAVENUMBER_TOL = 1e-9


class PresetName(Enum):
    EX1_1D = 'example1'
    EX2_2D = 'example2'
    EX3_2D_ANISOTROPIC = 'example3'
    EX4_3D = 'example4'
    EX5_HELMHOLTZ = 'example5'


def example1(c):
    """
    -u'' + c u = f on (-1, 1), u = cos(pi x).

    u'' = -pi^2 u, so f = (pi^2 + c) cos(pi x); u'(+-1) = -pi sin(+-pi) = 0.
    """
    def value(x):
        return np.cos(PI * x[:, 0])

    def gradient(x):
        return (-PI * np.sin(PI * x[:, 0]))[:, None]

    def source(x):
        return (PI ** 2 + c) * np.cos(PI * x[:, 0])

    return ProblemSpec(BoxDomain((-1.0,), (1.0,)), np.eye(1), c, source,
                       ExactSolution(value, gradient), name=f'example1(c={c:g})')


def example2(c):
    """
    -Laplace u + c u = f on (0,1)^2, u = cos(10 pi x) cos(10 pi y).

    -Laplace u = 200 pi^2 u, so f = (200 pi^2 + c) u.
    """
    w = 10.0 * PI

    def value(x):
        return np.cos(w * x[:, 0]) * np.cos(w * x[:, 1])

    def gradient(x):
        cx, cy = np.cos(w * x[:, 0]), np.cos(w * x[:, 1])
        sx, sy = np.sin(w * x[:, 0]), np.sin(w * x[:, 1])
        return np.stack([-w * sx * cy, -w * cx * sy], axis=1)

    def source(x):
        return (2.0 * w ** 2 + c) * value(x)

    return ProblemSpec(BoxDomain.unit(2), np.eye(2), c, source,
                       ExactSolution(value, gradient), name=f'example2(c={c:g})')


EXAMPLE3_DIFFUSION = np.array([[2.0, 1.0], [1.0, 3.0]])


def example3(c):
    """
    -div(A grad u) + c u = f on (0,1)^2 with A = [2 1; 1 3] and
    u = sin^2(2 pi x) sin^2(2 pi y) cos^2(2 pi x) cos^2(2 pi y).

    With S(t) = sin^2(4 pi t)/4 = (1 - cos(8 pi t))/8 we have u = S(x) S(y),
    S' = pi sin(8 pi t), S'' = 8 pi^2 cos(8 pi t), and
    -div(A grad u) = -(A11 S''(x) S(y) + 2 A12 S'(x) S'(y) + A22 S(x) S''(y)).
    S and S' vanish at t = 0 and t = 1, so grad u = 0 on the boundary.
    """
    A = EXAMPLE3_DIFFUSION

    def S(t):
        return (1.0 - np.cos(8.0 * PI * t)) / 8.0

    def dS(t):
        return PI * np.sin(8.0 * PI * t)

    def d2S(t):
        return 8.0 * PI ** 2 * np.cos(8.0 * PI * t)

    def value(x):
        return S(x[:, 0]) * S(x[:, 1])

    def gradient(x):
        return np.stack([dS(x[:, 0]) * S(x[:, 1]), S(x[:, 0]) * dS(x[:, 1])], axis=1)

    def source(x):
        sx, sy = S(x[:, 0]), S(x[:, 1])
        dsx, dsy = dS(x[:, 0]), dS(x[:, 1])
        divergence = (A[0, 0] * d2S(x[:, 0]) * sy
                      + 2.0 * A[0, 1] * dsx * dsy
                      + A[1, 1] * sx * d2S(x[:, 1]))
        return -divergence + c * sx * sy

    return ProblemSpec(BoxDomain.unit(2), A, c, source,
                       ExactSolution(value, gradient), name=f'example3(c={c:g})')


def example4(c):
    """
    -Laplace u + c u = f on (0,1)^3, u = cos(2 pi x) cos(2 pi y) cos(2 pi z).

    -Laplace u = 12 pi^2 u, so f = (12 pi^2 + c) u.
    """
    w = 2.0 * PI

    def value(x):
        return np.prod(np.cos(w * x), axis=1)

    def gradient(x):
        cos, sin = np.cos(w * x), np.sin(w * x)
        return np.stack([
            -w * sin[:, 0] * cos[:, 1] * cos[:, 2],
            -w * cos[:, 0] * sin[:, 1] * cos[:, 2],
            -w * cos[:, 0] * cos[:, 1] * sin[:, 2],
        ], axis=1)

    def source(x):
        return (3.0 * w ** 2 + c) * value(x)

    return ProblemSpec(BoxDomain.unit(3), np.eye(3), c, source,
                       ExactSolution(value, gradient), name=f'example4(c={c:g})')


def check_wavenumber(wavenumber):
    """
    Validate a Helmholtz wavenumber: k > 1 and k an integer multiple of pi.

    Returns:
        k as a float

    Raises:
        ProblemError: Otherwise
    """
    k = float(wavenumber)
    if not k > 1.0:
        raise ProblemError(f"wavenumber must exceed 1, got {k}")
    multiple = k / PI
    if abs(multiple - round(multiple)) > WAVENUMBER_TOL * multiple:
        raise ProblemError(f"wavenumber must be a multiple of pi, got {k} = {multiple:.6g} pi")
    return k


def example5(wavenumber):
    """
    Helmholtz -Laplace u - k^2 u = f on (0,1)^2, u = cos(kx) cos(ky) + 1.

    -Laplace u = 2 k^2 cos(kx) cos(ky), so f = k^2 cos(kx) cos(ky) - k^2.
    The normal derivative carries a factor sin(k) on the sides x = 1 and
    y = 1, so the natural condition holds only for k a multiple of pi.
    """
    k = check_wavenumber(wavenumber)

    def value(x):
        return np.cos(k * x[:, 0]) * np.cos(k * x[:, 1]) + 1.0

    def gradient(x):
        cx, cy = np.cos(k * x[:, 0]), np.cos(k * x[:, 1])
        sx, sy = np.sin(k * x[:, 0]), np.sin(k * x[:, 1])
        return np.stack([-k * sx * cy, -k * cx * sy], axis=1)

    def source(x):
        return k ** 2 * np.cos(k * x[:, 0]) * np.cos(k * x[:, 1]) - k ** 2

    return ProblemSpec(BoxDomain.unit(2), np.eye(2), -k ** 2, source,
                       ExactSolution(value, gradient), name=f'example5(k={k:g})')


# Registry of available presets for CLI/config selection
PRESET_REGISTRY = {
    PresetName.EX1_1D: example1,
    PresetName.EX2_2D: example2,
    PresetName.EX3_2D_ANISOTROPIC: example3,
    PresetName.EX4_3D: example4,
    PresetName.EX5_HELMHOLTZ: example5,
}


def preset(name, c_or_k):
    """
    Build a preset problem.

    Args:
        name: PresetName or its string value ('example1' .. 'example5')
        c_or_k: Reaction constant c (examples 1-4) or wavenumber k (example 5)

    Returns:
        ProblemSpec

    Raises:
        ProblemError: If the preset name is unknown
    """
    try:
        key = PresetName(name)
    except ValueError:
        available = ", ".join(p.value for p in PresetName)
        raise ProblemError(f"Unknown preset '{name}'. Available: {available}") from None
    return PRESET_REGISTRY[key](float(c_or_k))


def list_presets():
    """List available preset names."""
    return [p.value for p in PresetName]
