"""Single-mode states on a uniform quadrature grid.

Convention: the measured quadrature is x = (a + a^dagger) / 2, so the vacuum
has quadrature variance 1/4.  Wavefunctions are sampled amplitudes psi(y_i)
and every integral is the trapezoidal rule on the grid (the end nodes carry
negligible weight by construction, so this is ``dx * sum``).

Translations and rescalings are done spectrally: a sampled state is treated
as the trigonometric interpolant through its nodes, which is exact for the
smooth, rapidly decaying states used here.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels
from .errors import GridError, NormalizationError, SupportError

DEFAULT_POINTS = 1024
DEFAULT_X_MAX = 8.0
VACUUM_VARIANCE = 0.25
LEAKAGE_TOL = 1e-10
SUPPORT_SIGMAS = 6.0
MAX_FOCK = 60


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid of ``n_points`` nodes spanning ``[-x_max, x_max]``."""

    n_points: int
    x_max: float

    @property
    def dx(self):
        return 2.0 * self.x_max / (self.n_points - 1)

    @cached_property
    def nodes(self):
        y = np.linspace(-self.x_max, self.x_max, self.n_points)
        y.setflags(write=False)
        return y

    def padded(self, extra):
        """Same spacing, ``extra`` additional nodes on each side."""
        extra = int(extra)
        if extra <= 0:
            return self
        return GridSpec(self.n_points + 2 * extra, self.x_max + extra * self.dx)


def make_grid(n_points=DEFAULT_POINTS, x_max=DEFAULT_X_MAX):
    if int(n_points) != n_points or n_points < 16:
        raise GridError(f"n_points must be an integer >= 16, got {n_points!r}")
    if not np.isfinite(x_max) or x_max <= 0:
        raise GridError(f"x_max must be finite and positive, got {x_max!r}")
    return GridSpec(int(n_points), float(x_max))


def _require_same_grid(a, b):
    if a != b:
        raise GridError(f"grid mismatch: {a} vs {b}")


def _frozen(array, dtype):
    out = np.array(array, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class GridWavefunction:
    """Complex amplitudes of a pure single-mode state on ``grid``."""

    grid: GridSpec
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen(self.amplitudes, np.complex128)
        if amps.shape != (self.grid.n_points,):
            raise GridError(
                f"expected {self.grid.n_points} amplitudes, got shape {amps.shape}"
            )
        object.__setattr__(self, "amplitudes", amps)

    @property
    def probability(self):
        return np.abs(self.amplitudes) ** 2

    def norm2(self):
        return float(np.sum(self.probability) * self.grid.dx)

    def normalize(self):
        n2 = self.norm2()
        if not n2 > 0:
            raise NormalizationError("cannot normalize a zero-norm state")
        return GridWavefunction(self.grid, self.amplitudes / np.sqrt(n2))

    def mean(self):
        w = self.probability
        return float(np.sum(w * self.grid.nodes) / np.sum(w))

    def variance(self):
        w = self.probability
        y = self.grid.nodes
        m = np.sum(w * y) / np.sum(w)
        return float(np.sum(w * (y - m) ** 2) / np.sum(w))

    def leakage(self):
        """Probability mass sitting on the two end nodes."""
        p = self.probability
        return float(max(p[0], p[-1]) * self.grid.dx)

    def __call__(self, points):
        """Band-limited interpolation at arbitrary quadrature values."""
        return band_limited_eval(self.amplitudes, self.grid, points)


@dataclass(frozen=True, eq=False)
class GridDensityMatrix:
    """Kernel rho(y_i, y_j) of a (possibly mixed) single-mode state."""

    grid: GridSpec
    elements: np.ndarray

    def __post_init__(self):
        rho = _frozen(self.elements, np.complex128)
        n = self.grid.n_points
        if rho.shape != (n, n):
            raise GridError(f"expected ({n}, {n}) density matrix, got {rho.shape}")
        object.__setattr__(self, "elements", rho)

    @classmethod
    def pure(cls, psi):
        a = psi.amplitudes
        return cls(psi.grid, np.outer(a, a.conj()))

    def trace(self):
        return complex(np.trace(self.elements) * self.grid.dx)

    def hermiticity_error(self):
        return float(np.max(np.abs(self.elements - self.elements.conj().T)))

    def min_eigenvalue(self):
        """Smallest eigenvalue of the operator (kernel times dx)."""
        h = 0.5 * (self.elements + self.elements.conj().T)
        return float(np.linalg.eigvalsh(h * self.grid.dx)[0])


# ---------------------------------------------------------------------------
# spectral helpers
# ---------------------------------------------------------------------------

def spectral_coefficients(values, grid, axis=-1):
    """Coefficients and wavenumbers of the trigonometric interpolant.

    Returns ``(coeffs, k)`` such that
    ``f(p) = sum_m coeffs[..., m] * exp(1j * k[m] * (p + grid.x_max))``
    reproduces ``values`` at the nodes.  For even ``n`` the Nyquist term is
    split evenly between +k and -k so the interpolant of a real sequence is
    real.
    """
    n = grid.n_points
    values = np.moveaxis(np.asarray(values, dtype=np.complex128), axis, -1)
    coeffs = np.fft.fft(values, axis=-1) / n
    k = 2.0 * np.pi * np.fft.fftfreq(n, d=grid.dx)
    if n % 2 == 0:
        half = coeffs[..., n // 2] / 2.0
        coeffs = np.concatenate([coeffs, half[..., None]], axis=-1)
        coeffs[..., n // 2] = half
        k = np.append(k, np.pi / grid.dx)
    return coeffs, k


def band_limited_eval(values, grid, points):
    """Evaluate the interpolant of nodal ``values`` at ``points``.

    Points outside ``[-x_max, x_max]`` evaluate to zero rather than to the
    periodic image, so a decayed state stays decayed.
    """
    coeffs, k = spectral_coefficients(values, grid)
    pts = np.ascontiguousarray(np.atleast_1d(points), dtype=np.float64).ravel()
    out = _kernels.trig_eval(
        np.ascontiguousarray(coeffs), k, -grid.x_max, -grid.x_max, grid.x_max, pts
    )
    return out.reshape(np.shape(points)) if np.ndim(points) else out[0]


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

def _check_built(psi):
    leak = psi.leakage()
    if leak >= LEAKAGE_TOL:
        raise SupportError(
            f"state reaches the grid edge (boundary mass {leak:.2e} >= {LEAKAGE_TOL:.0e});"
            " enlarge x_max"
        )
    return psi


def _check_window(grid, mean, sigma, what):
    lo, hi = mean - SUPPORT_SIGMAS * sigma, mean + SUPPORT_SIGMAS * sigma
    if lo < -grid.x_max or hi > grid.x_max:
        raise SupportError(
            f"{what}: 6-sigma window [{lo:.3f}, {hi:.3f}] exceeds grid "
            f"[-{grid.x_max}, {grid.x_max}]"
        )


def gaussian_wavefunction(grid, mean, variance):
    """Real, positive Gaussian amplitude with quadrature variance ``variance``."""
    if not variance > 0:
        raise ValueError(f"variance must be positive, got {variance!r}")
    _check_window(grid, mean, np.sqrt(variance), "gaussian_wavefunction")
    y = grid.nodes
    amps = (2.0 * np.pi * variance) ** -0.25 * np.exp(-((y - mean) ** 2) / (4.0 * variance))
    return _check_built(GridWavefunction(grid, amps).normalize())


def fock_wavefunction(grid, n):
    """Number state |n> via the stable three-term Hermite-function recurrence.

    In the scaled coordinate xi = sqrt(2) y the state is the n-th normalized
    Hermite function, so <n| x^2 |n> = (2n + 1) / 4.
    """
    if int(n) != n or n < 0:
        raise ValueError(f"n must be a non-negative integer, got {n!r}")
    n = int(n)
    if n > MAX_FOCK:
        raise SupportError(f"Fock index {n} above supported maximum {MAX_FOCK}")
    xi = np.sqrt(2.0) * grid.nodes
    prev = np.zeros_like(xi)
    cur = np.pi ** -0.25 * np.exp(-0.5 * xi * xi)
    for j in range(n):
        prev, cur = cur, np.sqrt(2.0 / (j + 1)) * xi * cur - np.sqrt(j / (j + 1)) * prev
    amps = 2.0 ** 0.25 * cur
    return _check_built(GridWavefunction(grid, amps).normalize())


def superpose(a, b, ca, cb):
    _require_same_grid(a.grid, b.grid)
    amps = ca * a.amplitudes + cb * b.amplitudes
    psi = GridWavefunction(a.grid, amps)
    scale = abs(ca) ** 2 * a.norm2() + abs(cb) ** 2 * b.norm2()
    if not psi.norm2() > 1e-12 * scale:
        raise NormalizationError("superposition cancels to zero norm")
    return psi.normalize()


def cat_wavefunction(grid, displacement, parity="even"):
    """Superposition of vacua displaced to +/- ``displacement``."""
    sign = {"even": 1.0, "odd": -1.0}[parity]
    plus = gaussian_wavefunction(grid, displacement, VACUUM_VARIANCE)
    minus = gaussian_wavefunction(grid, -displacement, VACUUM_VARIANCE)
    return _check_built(superpose(plus, minus, 1.0, sign))


# ---------------------------------------------------------------------------
# unitaries
# ---------------------------------------------------------------------------

def displace(psi, alpha):
    """Translate the wavefunction: psi(y) -> psi(y - alpha).

    For real alpha this is D(alpha) under the x = (a + a^dagger)/2 convention.
    Implemented as a Fourier phase ramp, so alpha need not be a multiple of dx.
    """
    if alpha == 0:
        return GridWavefunction(psi.grid, psi.amplitudes)
    grid = psi.grid
    _check_window(grid, psi.mean() + alpha, np.sqrt(psi.variance()), "displace")
    k = 2.0 * np.pi * np.fft.fftfreq(grid.n_points, d=grid.dx)
    ramp = np.exp(-1j * k * alpha)
    if grid.n_points % 2 == 0:
        # Nyquist mode: use the real part of the +/- pair
        ramp[grid.n_points // 2] = np.cos(np.pi / grid.dx * alpha)
    amps = np.fft.ifft(np.fft.fft(psi.amplitudes) * ramp)
    return GridWavefunction(grid, amps)


def squeeze(psi, r):
    """Rescale the quadrature: psi(y) -> e^{r/2} psi(e^r y).

    Quadrature variance is multiplied by e^{-2r}; r > 0 squeezes the measured
    quadrature.
    """
    if r == 0:
        return GridWavefunction(psi.grid, psi.amplitudes)
    grid = psi.grid
    scale = np.exp(-r)
    _check_window(grid, psi.mean() * scale, np.sqrt(psi.variance()) * scale, "squeeze")
    amps = np.exp(0.5 * r) * band_limited_eval(psi.amplitudes, grid, np.exp(r) * grid.nodes)
    return GridWavefunction(grid, amps)


# ---------------------------------------------------------------------------
# inner products
# ---------------------------------------------------------------------------

def overlap(a, b):
    """<a|b> by grid quadrature."""
    _require_same_grid(a.grid, b.grid)
    return complex(np.vdot(a.amplitudes, b.amplitudes) * a.grid.dx)


def pure_mixed_fidelity(psi, rho, trace_tol=1e-6):
    """Uhlmann fidelity of a pure state with a density matrix, <psi|rho|psi>."""
    _require_same_grid(psi.grid, rho.grid)
    tr = rho.trace()
    if abs(tr - 1.0) > trace_tol:
        raise NormalizationError(f"density matrix trace {tr.real:.9f} is not 1")
    dx = psi.grid.dx
    a = psi.amplitudes
    value = np.vdot(a, rho.elements @ a) * dx * dx
    # a Hermitian kernel gives a real quadratic form
    assert abs(value.imag) <= 1e-10 * max(1.0, abs(value.real)), value
    return float(value.real)
