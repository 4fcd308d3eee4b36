"""Information-gain and disturbance fidelities.

``G`` compares the distribution of inferred values with the true quadrature
distribution (squared Bhattacharyya coefficient); ``F`` compares the
non-selective output state with the input (Uhlmann fidelity, which for a pure
input is the expectation value <psi|sigma|psi>).
"""

import math

import numpy as np

from .errors import NormalizationError
from .measurement import inferred_distribution, nonselective_output, projective_distribution
from .quad_grid import pure_mixed_fidelity

NORMALIZATION_TOL = 1e-6


def statistical_fidelity(p, q):
    """(sum_i sqrt(p_i q_i) dx)^2 for two densities on the same grid."""
    if p.grid != q.grid:
        raise ValueError(f"grid mismatch: {p.grid} vs {q.grid}")
    for name, d in (("p", p), ("q", q)):
        if abs(d.mass() - 1.0) > NORMALIZATION_TOL:
            raise NormalizationError(f"{name} has total mass {d.mass():.9f}, expected 1")
    bc = np.sum(np.sqrt(p.densities * q.densities)) * p.grid.dx
    return float(bc * bc)


def tradeoff_variable(sigma_p2, sigma_s2, phi):
    """x = sigma_p / (sigma_s tan(phi))."""
    x = math.sqrt(sigma_p2 / sigma_s2) / math.tan(phi)
    if not x > 0:
        raise ValueError("trade-off variable must be positive")
    return x


def gaussian_F(x):
    """Disturbance fidelity for Gaussian signals, sqrt(2) x / sqrt(1 + 2 x^2)."""
    x = np.asarray(x, dtype=np.float64)
    out = math.sqrt(2.0) * x / np.sqrt(1.0 + 2.0 * x * x)
    return float(out) if out.ndim == 0 else out


def gaussian_G(x):
    """Information fidelity for Gaussian signals, 2 sqrt(1 + x^2) / (2 + x^2)."""
    x = np.asarray(x, dtype=np.float64)
    out = 2.0 * np.sqrt(1.0 + x * x) / (2.0 + x * x)
    return float(out) if out.ndim == 0 else out


def grid_F(signal, sigma_eff2):
    return pure_mixed_fidelity(signal, nonselective_output(signal, sigma_eff2))


def grid_G(signal, sigma_eff2):
    p = inferred_distribution(signal, sigma_eff2)
    return statistical_fidelity(p, projective_distribution(signal, p.grid))
