"""The tunable QND measurement of the x quadrature.

Signal and squeezed-vacuum probe meet on a beam splitter with transmittivity
cos^2(phi); the probe is homodyned and the signal is displaced by feedback and
re-squeezed.  On the signal alone this amounts to a quadrature-diagonal
Gaussian measurement operator of variance sigma_p^2 / tan^2(phi), which is
what the single-mode functions here implement.  :func:`two_mode_oracle`
follows the optical chain literally on a two-mode grid and is used to check
the single-mode path.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import NormalizationError, SupportError, UnderResolvedKernelError
from .quad_grid import (
    VACUUM_VARIANCE,
    GridDensityMatrix,
    GridWavefunction,
    displace,
    gaussian_wavefunction,
    spectral_coefficients,
    squeeze,
)

# outcome grids extend the signal grid by this many kernel widths per side
OUTCOME_PAD_SIGMAS = 8.0
MIN_PROBABILITY = 1e-300


class ProbeDirection(enum.Enum):
    SQUEEZED = "squeezed"
    ANTI_SQUEEZED = "antisqueezed"


@dataclass(frozen=True)
class ProbeSpec:
    """Squeezed-vacuum probe.

    ``SQUEEZED`` reduces the variance of the measured quadrature,
    ``ANTI_SQUEEZED`` increases it.
    """

    r: float = 0.0
    direction: ProbeDirection = ProbeDirection.SQUEEZED

    def __post_init__(self):
        if not (np.isfinite(self.r) and self.r >= 0):
            raise ValueError(f"squeezing modulus must be finite and >= 0, got {self.r!r}")
        object.__setattr__(self, "direction", ProbeDirection(self.direction))

    @property
    def sigma_p2(self):
        sign = -1.0 if self.direction is ProbeDirection.SQUEEZED else 1.0
        return VACUUM_VARIANCE * math.exp(2.0 * sign * self.r)

    @property
    def photon_number(self):
        return math.sinh(self.r) ** 2


@dataclass(frozen=True)
class SetupParams:
    """Apparatus settings, parametrized by the beam-splitter angle phi."""

    phi: float

    def __post_init__(self):
        if not (0.0 < self.phi < 0.5 * math.pi):
            raise ValueError(f"phi must lie in (0, pi/2), got {self.phi!r}")

    @classmethod
    def from_tau1(cls, tau1):
        if not (0.0 < tau1 < 1.0):
            raise ValueError(f"tau1 must lie in (0, 1), got {tau1!r}")
        return cls(math.acos(math.sqrt(tau1)))

    @property
    def tau1(self):
        return math.cos(self.phi) ** 2

    @property
    def r_star(self):
        """Corrective squeeze, exp(r_star) = sqrt(tau1) = cos(phi)."""
        return math.log(math.cos(self.phi))

    @property
    def feedback_gain(self):
        """Displacement per unit inferred quadrature, tan(phi) sin(phi)."""
        return math.tan(self.phi) * math.sin(self.phi)


@dataclass(frozen=True)
class HomodyneOutcome:
    X: float
    inferred_x: float
    alpha_star: float


@dataclass(frozen=True, eq=False)
class Distribution:
    """Probability density sampled on a grid of inferred quadrature values."""

    grid: object
    densities: np.ndarray

    def __post_init__(self):
        d = np.array(self.densities, dtype=np.float64, copy=True)
        if d.shape != (self.grid.n_points,):
            raise ValueError(f"expected {self.grid.n_points} densities, got {d.shape}")
        if np.any(d < 0):
            raise ValueError("densities must be non-negative")
        d.setflags(write=False)
        object.__setattr__(self, "densities", d)

    def mass(self):
        return float(np.sum(self.densities) * self.grid.dx)

    def mean(self):
        return float(np.sum(self.densities * self.grid.nodes) * self.grid.dx / self.mass())

    def variance(self):
        y = self.grid.nodes
        m = self.mean()
        return float(np.sum(self.densities * (y - m) ** 2) * self.grid.dx / self.mass())

    def at(self, x):
        """Linear interpolation of the density at ``x``."""
        return np.interp(x, self.grid.nodes, self.densities, left=0.0, right=0.0)

    def cdf(self):
        """Cumulative trapezoid, normalized to end at 1."""
        d = self.densities
        c = np.concatenate([[0.0], np.cumsum(0.5 * (d[1:] + d[:-1]))]) * self.grid.dx
        return c / c[-1]


def gaussian_density(y, mean, variance):
    return np.exp(-((y - mean) ** 2) / (2.0 * variance)) / math.sqrt(2.0 * math.pi * variance)


def effective_sigma2(setup, probe):
    """Variance of the Gaussian measurement kernel, sigma_p^2 / tan^2(phi)."""
    return probe.sigma_p2 / math.tan(setup.phi) ** 2


def probe_wavefunction(grid, probe):
    return gaussian_wavefunction(grid, 0.0, probe.sigma_p2)


def measurement_operator(x, sigma_eff2, grid):
    """Diagonal of M_x in the quadrature basis, sqrt(G(y; x, sigma_eff2))."""
    if not sigma_eff2 > 0:
        raise ValueError(f"sigma_eff2 must be positive, got {sigma_eff2!r}")
    return np.sqrt(gaussian_density(grid.nodes, x, sigma_eff2))


def outcome_grid(grid, sigma_eff2):
    """Signal grid widened so the smeared outcome density fits."""
    pad = math.ceil(OUTCOME_PAD_SIGMAS * math.sqrt(sigma_eff2) / grid.dx)
    return grid.padded(pad)


def inferred_distribution(signal, sigma_eff2, grid=None):
    """Density of inferred values, |psi_s|^2 convolved with G(.; 0, sigma_eff2).

    Evaluated by direct quadrature on ``grid``, which defaults to the signal
    grid padded (same spacing) by eight kernel widths per side.
    """
    if not sigma_eff2 > 0:
        raise ValueError(f"sigma_eff2 must be positive, got {sigma_eff2!r}")
    dx = signal.grid.dx
    if math.sqrt(sigma_eff2) < dx:
        raise UnderResolvedKernelError(
            f"kernel width {math.sqrt(sigma_eff2):.3e} below grid spacing {dx:.3e}"
        )
    if grid is None:
        grid = outcome_grid(signal.grid, sigma_eff2)
    p = _kernels.gaussian_smear(
        np.ascontiguousarray(signal.probability),
        np.ascontiguousarray(signal.grid.nodes),
        np.ascontiguousarray(grid.nodes),
        float(sigma_eff2),
        dx,
    )
    return Distribution(grid, p)


def projective_distribution(signal, grid=None):
    """|psi_s(x)|^2, optionally zero-padded onto a wider grid of equal spacing."""
    if grid is None:
        grid = signal.grid
    pad = (grid.n_points - signal.grid.n_points) // 2
    if pad < 0 or not np.isclose(grid.dx, signal.grid.dx, rtol=1e-12, atol=0):
        raise ValueError("target grid must share the spacing and contain the signal grid")
    return Distribution(grid, np.pad(signal.probability, pad))


def outcome_probability(signal, x, sigma_eff2):
    """p(x) = sum_y |psi_s(y)|^2 G(y; x, sigma_eff2) dy."""
    g = gaussian_density(signal.grid.nodes, x, sigma_eff2)
    return float(np.sum(signal.probability * g) * signal.grid.dx)


def conditional_state(signal, x, sigma_eff2):
    """Post-measurement signal for inferred value ``x``.

    psi_x(y) = psi_s(y) sqrt(G(y; x, sigma_eff2) / p(x)), with a real positive
    envelope (no phase is imprinted by a real probe and real feedback).
    """
    m = measurement_operator(x, sigma_eff2, signal.grid)
    p = outcome_probability(signal, x, sigma_eff2)
    if not p > MIN_PROBABILITY:
        raise NormalizationError(f"outcome x={x!r} has vanishing probability {p:.3e}")
    return GridWavefunction(signal.grid, signal.amplitudes * m / math.sqrt(p))


def conditional_moments(signal, xs, sigma_eff2, chunk=2048):
    """Mean and variance of |psi_x|^2 for every outcome in ``xs``."""
    xs = np.asarray(xs, dtype=np.float64)
    y = signal.grid.nodes
    w = signal.probability
    means = np.empty_like(xs)
    variances = np.empty_like(xs)
    for start in range(0, xs.size, chunk):
        sl = slice(start, start + chunk)
        weights = w[None, :] * np.exp(-((y[None, :] - xs[sl, None]) ** 2) / (2 * sigma_eff2))
        total = weights.sum(axis=1)
        mu = weights @ y / total
        means[sl] = mu
        variances[sl] = weights @ (y * y) / total - mu * mu
    return means, variances


def nonselective_output(signal, sigma_eff2):
    """Average post-measurement state, sum_x M_x rho M_x.

    With Gaussian M_x the outcome average reduces to a dephasing of the
    input: rho(y, y') exp(-(y - y')^2 / (8 sigma_eff2)).
    """
    if not sigma_eff2 > 0:
        raise ValueError(f"sigma_eff2 must be positive, got {sigma_eff2!r}")
    y = signal.grid.nodes
    a = signal.amplitudes
    diff = y[:, None] - y[None, :]
    kernel = np.exp(-diff * diff / (8.0 * sigma_eff2))
    return GridDensityMatrix(signal.grid, np.outer(a, a.conj()) * kernel)


def sample_outcomes(signal, sigma_eff2, n, seed):
    """Seeded inferred-value samples by inverse-CDF with linear interpolation."""
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    dist = inferred_distribution(signal, sigma_eff2)
    cdf = dist.cdf()
    # drop flat stretches so the inverse is single-valued
    keep = np.concatenate([[True], np.diff(cdf) > 0])
    u = np.random.default_rng(seed).random(int(n))
    return np.interp(u, cdf[keep], dist.grid.nodes[keep])


def feedback_params(X, setup):
    """Inferred quadrature and feedback displacement from homodyne reading X."""
    s = math.sin(setup.phi)
    return HomodyneOutcome(X=X, inferred_x=-X / s, alpha_star=-X * math.tan(setup.phi))


def displacement_hardware(alpha_star, tau3):
    """Coherent pump amplitude z with alpha_star = z sqrt(1 - tau3)."""
    if not (0.0 < tau3 < 1.0):
        raise ValueError(f"tau3 must lie in (0, 1), got {tau3!r}")
    return complex(alpha_star / math.sqrt(1.0 - tau3))


# ---------------------------------------------------------------------------
# two-mode oracle
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class TwoModeState:
    """Psi(u, v) on grid x grid; axis 0 is the signal mode, axis 1 the probe."""

    grid: object
    elements: np.ndarray
    phi: float


def _rotated_factor(values, grid, c_u, c_v):
    """f(c_u * u_i + c_v * v_j) on the product grid, zero off the input grid."""
    coeffs, k = spectral_coefficients(values, grid)
    y = grid.nodes
    a = np.exp(1j * np.outer(c_u * y + grid.x_max, k)) * coeffs[None, :]
    b = np.exp(1j * np.outer(c_v * y, k))
    out = a @ b.T
    arg = c_u * y[:, None] + c_v * y[None, :]
    out[np.abs(arg) > grid.x_max] = 0.0
    return out


def beam_splitter(signal, probe_state, phi):
    """Apply V_phi to psi_s(y_s) psi_p(y_p).

    The beam splitter acts as a rotation of the quadrature arguments,
    Psi'(u, v) = Psi(u cos(phi) - v sin(phi), u sin(phi) + v cos(phi)),
    whose probe output reads v = y_p cos(phi) - y_s sin(phi).  Each factor
    is evaluated at the rotated points by band-limited interpolation.
    """
    if signal.grid != probe_state.grid:
        raise ValueError("signal and probe must share a grid")
    grid = signal.grid
    c, s = math.cos(phi), math.sin(phi)
    psi_s = _rotated_factor(signal.amplitudes, grid, c, -s)
    psi_p = _rotated_factor(probe_state.amplitudes, grid, s, c)
    return TwoModeState(grid, psi_s * psi_p, phi)


def homodyne_condition(state, setup, inferred_x):
    """Project the probe on |X = -x sin(phi)>, then displace and re-squeeze.

    Returns ``(p(x), psi_x)``.  The homodyne eigenket is unnormalized,
    <X|psi> = psi(X), so p(x) = sin(phi) * ||slice||^2 carries the Jacobian
    of X -> x.
    """
    grid = state.grid
    X = -inferred_x * math.sin(setup.phi)
    coeffs, k = spectral_coefficients(state.elements, grid, axis=1)
    if not (-grid.x_max <= X <= grid.x_max):
        raise SupportError(f"homodyne reading {X:.3f} outside the probe grid")
    slice_ = coeffs @ np.exp(1j * k * (X + grid.x_max))
    raw = GridWavefunction(grid, slice_)
    norm2 = raw.norm2()
    density = math.sin(setup.phi) * norm2
    if not norm2 > MIN_PROBABILITY:
        raise NormalizationError(f"homodyne slice at X={X:.3f} has vanishing norm")
    out = feedback_params(X, setup)
    psi = displace(raw.normalize(), out.alpha_star)
    # the slice is stretched by 1/cos(phi); contracting x by cos(phi) is
    # squeeze(-r_star) in this package's sign convention
    psi = squeeze(psi, -setup.r_star)
    return density, psi.normalize()


def two_mode_oracle(signal, probe, setup, inferred_x):
    """Full optical chain for one inferred value, on a two-mode grid.

    Returns ``(p(x), psi_x)``; see :func:`beam_splitter` and
    :func:`homodyne_condition`.
    """
    if signal.grid.n_points > 512:
        raise ValueError("two-mode oracle limited to 512 points per axis")
    state = beam_splitter(signal, probe_wavefunction(signal.grid, probe), setup.phi)
    return homodyne_condition(state, setup, inferred_x)
