"""Operating points on the information/disturbance trade-off."""

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import OptimizationError
from .fidelity import gaussian_F, gaussian_G, grid_F, grid_G
from .measurement import ProbeDirection, ProbeSpec, SetupParams
from .quad_grid import VACUUM_VARIANCE

DEFAULT_BRACKET = (0.05, 20.0)
INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
PLATEAU_TOL = 1e-12
UNIMODAL_SAMPLES = 33


class FidelityObjective(NamedTuple):
    F: Callable[[float], float]
    G: Callable[[float], float]


GAUSSIAN_OBJECTIVE = FidelityObjective(gaussian_F, gaussian_G)


def grid_objective(signal, sigma_s2):
    """F and G of ``signal`` as functions of x, via sigma_eff2 = (x sigma_s)^2."""
    return FidelityObjective(
        lambda x: grid_F(signal, x * x * sigma_s2),
        lambda x: grid_G(signal, x * x * sigma_s2),
    )


@dataclass(frozen=True)
class TradeoffPoint:
    x: float
    F: float
    G: float

    @property
    def sum(self):
        return self.F + self.G


def _point(objective, x):
    return TradeoffPoint(float(x), float(objective.F(x)), float(objective.G(x)))


def _check_bracket(bracket):
    lo, hi = bracket
    if not (0 < lo < hi and math.isfinite(hi)):
        raise ValueError(f"bracket must satisfy 0 < lo < hi, got {bracket!r}")
    return float(lo), float(hi)


def optimize_sum(objective, bracket=DEFAULT_BRACKET, tol=1e-6):
    """Maximize F + G by golden-section search in log(x).

    The objective is sampled first; a dip between two higher values means it
    is not unimodal and :class:`OptimizationError` is raised.  A flat
    objective returns the geometric midpoint of the bracket.
    """
    lo, hi = _check_bracket(bracket)
    a, b = math.log(lo), math.log(hi)

    def f(t):
        x = math.exp(t)
        return objective.F(x) + objective.G(x)

    ts = np.linspace(a, b, UNIMODAL_SAMPLES)
    vals = np.array([f(t) for t in ts])
    if np.ptp(vals) <= PLATEAU_TOL:
        return _point(objective, math.exp(0.5 * (a + b)))
    peak = int(np.argmax(vals))
    rising = np.diff(vals[: peak + 1])
    falling = np.diff(vals[peak:])
    if np.any(rising < -PLATEAU_TOL) or np.any(falling > PLATEAU_TOL):
        bad = int(np.argmin(rising)) if np.any(rising < -PLATEAU_TOL) else peak + int(np.argmax(falling))
        raise OptimizationError(
            "F+G is not unimodal on the bracket: samples at x="
            f"{math.exp(ts[bad]):.4g}, {math.exp(ts[bad + 1]):.4g} violate the single-peak shape"
        )
    # shrink to the two sample intervals around the peak
    a = ts[max(peak - 1, 0)]
    b = ts[min(peak + 1, ts.size - 1)]

    c = b - INV_GOLDEN * (b - a)
    d = a + INV_GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_GOLDEN * (b - a)
            fd = f(d)
    return _point(objective, math.exp(0.5 * (a + b)))


def equal_fidelity_point(objective, bracket=DEFAULT_BRACKET, tol=1e-10):
    """Bisection for F(x) = G(x)."""
    lo, hi = _check_bracket(bracket)

    def h(x):
        return objective.F(x) - objective.G(x)

    h_lo, h_hi = h(lo), h(hi)
    if h_lo == 0:
        return _point(objective, lo)
    if h_hi == 0:
        return _point(objective, hi)
    if np.sign(h_lo) == np.sign(h_hi):
        raise OptimizationError(
            f"F - G does not change sign on [{lo}, {hi}] ({h_lo:.3g}, {h_hi:.3g})"
        )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        h_mid = h(mid)
        if h_mid == 0:
            lo = hi = mid
            break
        if np.sign(h_mid) == np.sign(h_lo):
            lo, h_lo = mid, h_mid
        else:
            hi = mid
    return _point(objective, 0.5 * (lo + hi))


# ---------------------------------------------------------------------------
# physical realization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FixPhi:
    phi: float


@dataclass(frozen=True)
class FixProbe:
    r: float
    direction: ProbeDirection = ProbeDirection.SQUEEZED


@dataclass(frozen=True)
class PhysicalOperatingPoint:
    setup: SetupParams
    probe: ProbeSpec
    sigma_s2: float

    @property
    def x(self):
        return math.sqrt(self.probe.sigma_p2 / self.sigma_s2) / math.tan(self.setup.phi)

    @property
    def N_p(self):
        return self.probe.photon_number

    def as_dict(self):
        return {
            "phi": self.setup.phi,
            "tau1": self.setup.tau1,
            "r_star": self.setup.r_star,
            "probe_r": self.probe.r,
            "probe_direction": self.probe.direction.value,
            "sigma_p": math.sqrt(self.probe.sigma_p2),
            "sigma_p_over_sigma_s": math.sqrt(self.probe.sigma_p2 / self.sigma_s2),
            "x": self.x,
            "N_p": self.N_p,
        }


def probe_energy(r):
    """Mean probe photon number, sinh^2(r)."""
    if r < 0:
        raise ValueError(f"r must be non-negative, got {r!r}")
    return math.sinh(r) ** 2


def physical_from_x(x_target, sigma_s2, constraint):
    """Apparatus settings realizing ``x_target`` for a signal of variance ``sigma_s2``.

    ``FixPhi`` keeps the beam splitter and solves for the probe squeezing;
    ``FixProbe`` keeps the probe and solves for the beam-splitter angle.
    """
    if not (x_target > 0 and sigma_s2 > 0):
        raise ValueError("x_target and sigma_s2 must be positive")
    sigma_s = math.sqrt(sigma_s2)
    if isinstance(constraint, FixPhi):
        setup = SetupParams(constraint.phi)
        sigma_p2 = (x_target * sigma_s * math.tan(constraint.phi)) ** 2
        ratio = sigma_p2 / VACUUM_VARIANCE
        direction = ProbeDirection.ANTI_SQUEEZED if ratio > 1 else ProbeDirection.SQUEEZED
        probe = ProbeSpec(0.5 * abs(math.log(ratio)), direction)
    elif isinstance(constraint, FixProbe):
        probe = ProbeSpec(constraint.r, constraint.direction)
        setup = SetupParams(math.atan(math.sqrt(probe.sigma_p2) / (sigma_s * x_target)))
    else:
        raise TypeError(f"unknown constraint {constraint!r}")
    return PhysicalOperatingPoint(setup, probe, float(sigma_s2))


def numeric_frontier(signal, x_values, sigma_s2):
    """(x, grid F, grid G) for each x, using sigma_eff2 = (x sigma_s)^2."""
    xs = np.asarray(x_values, dtype=np.float64)
    if np.any(xs <= 0) or np.any(np.diff(xs) < 0):
        raise ValueError("x_values must be positive and sorted")
    objective = grid_objective(signal, sigma_s2)
    return [_point(objective, x) for x in xs]
