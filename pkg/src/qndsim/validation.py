"""Self-checks run by ``qnd validate``.

Each check recomputes a quantity along an independent route (closed form,
explicit outcome quadrature, the two-mode optical chain) and compares it with
the production path at a fixed tolerance.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from .errors import QNDError
from .fidelity import gaussian_F, gaussian_G, grid_F, grid_G
from .measurement import (
    ProbeSpec,
    SetupParams,
    beam_splitter,
    conditional_state,
    effective_sigma2,
    homodyne_condition,
    measurement_operator,
    nonselective_output,
    outcome_grid,
    outcome_probability,
    probe_wavefunction,
    sample_outcomes,
)
from .quad_grid import VACUUM_VARIANCE, fock_wavefunction, gaussian_wavefunction, make_grid
from .tradeoff import GAUSSIAN_OBJECTIVE, grid_objective, optimize_sum


@dataclass
class CheckResult:
    name: str
    value: float
    tolerance: float
    passed: bool
    detail: str = ""

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        text = f"[{status}] {self.name}: {self.value:.3e} (tol {self.tolerance:.0e})"
        return f"{text} {self.detail}".rstrip()


def povm_completeness(grid, sigma_eff2=0.25):
    """max over the central half-grid of |sum_x M_x(y)^2 dx - 1|."""
    y = grid.nodes
    central = np.abs(y) <= 0.5 * grid.x_max
    total = np.zeros(grid.n_points)
    for x in y:
        total += measurement_operator(x, sigma_eff2, grid) ** 2
    return float(np.max(np.abs(total[central] * grid.dx - 1.0)))


def total_probability_error(signal, sigma_eff2):
    """max_y |sum_x p(x) |psi_x(y)|^2 dx - |psi_s(y)|^2|."""
    xs = outcome_grid(signal.grid, sigma_eff2)
    acc = np.zeros(signal.grid.n_points)
    for x in xs.nodes:
        p = outcome_probability(signal, x, sigma_eff2)
        if p <= 1e-300:
            continue
        acc += p * conditional_state(signal, x, sigma_eff2).probability
    return float(np.max(np.abs(acc * xs.dx - signal.probability)))


def nonselective_by_quadrature(signal, sigma_eff2):
    """sum_x p(x) psi_x psi_x^dagger dx, accumulated over explicit outcomes."""
    xs = outcome_grid(signal.grid, sigma_eff2)
    rho = np.zeros((signal.grid.n_points,) * 2, dtype=np.complex128)
    for x in xs.nodes:
        p = outcome_probability(signal, x, sigma_eff2)
        if p <= 1e-300:
            continue
        a = conditional_state(signal, x, sigma_eff2).amplitudes
        rho += p * np.outer(a, a.conj())
    return rho * xs.dx


def decoherence_identity_error(signal, sigma_eff2):
    ref = nonselective_by_quadrature(signal, sigma_eff2)
    return float(np.max(np.abs(nonselective_output(signal, sigma_eff2).elements - ref)))


def oracle_equivalence_error(signal, probe, setup, xs):
    """Largest deviation between the optical chain and the single-mode path.

    Returns ``(max |p_oracle - p|, max L1 of moduli)`` over outcomes ``xs``.
    """
    s2 = effective_sigma2(setup, probe)
    state = beam_splitter(signal, probe_wavefunction(signal.grid, probe), setup.phi)
    p_err, psi_err = 0.0, 0.0
    for x in xs:
        p, psi = homodyne_condition(state, setup, x)
        ref = conditional_state(signal, x, s2)
        p_err = max(p_err, abs(p - outcome_probability(signal, x, s2)))
        l1 = np.sum(np.abs(np.abs(psi.amplitudes) - np.abs(ref.amplitudes))) * signal.grid.dx
        psi_err = max(psi_err, float(l1))
    return p_err, psi_err


def ks_statistic(samples, cdf):
    """Two-sided Kolmogorov-Smirnov distance to a continuous CDF."""
    s = np.sort(np.asarray(samples))
    n = s.size
    c = cdf(s)
    upper = np.arange(1, n + 1) / n - c
    lower = c - np.arange(0, n) / n
    return float(max(upper.max(), lower.max()))


def _guarded(name, tolerance, fn):
    try:
        value, detail = fn()
    except (QNDError, ValueError, FloatingPointError) as exc:
        return CheckResult(name, float("nan"), tolerance, False, f"error: {exc}")
    return CheckResult(name, value, tolerance, bool(value <= tolerance), detail)


def run_checks(config, log=None):
    """Run the validation suite on the configured grid; returns CheckResults."""
    n, x_max = config.grid_points, config.x_max
    results = []

    def add(name, tol, fn):
        res = _guarded(name, tol, fn)
        if log:
            log.info(res.line())
        results.append(res)

    def grid():
        return make_grid(n, x_max)

    add("vacuum variance", 1e-6,
        lambda: (abs(gaussian_wavefunction(grid(), 0.0, VACUUM_VARIANCE).variance() - 0.25), ""))
    add("POVM completeness", 1e-6, lambda: (povm_completeness(grid()), ""))

    def total_prob():
        g = grid()
        err = max(total_probability_error(gaussian_wavefunction(g, 0, 0.25), 0.25),
                  total_probability_error(fock_wavefunction(g, 1), 0.25))
        return err, "(vacuum, Fock-1)"

    add("total probability", 1e-7, total_prob)

    xs = np.geomspace(0.2, 5.0, 20)

    def closed_F():
        vac = gaussian_wavefunction(grid(), 0, 0.25)
        return max(abs(grid_F(vac, (x * 0.5) ** 2) - gaussian_F(x)) for x in xs), ""

    def closed_G():
        vac = gaussian_wavefunction(grid(), 0, 0.25)
        return max(abs(grid_G(vac, (x * 0.5) ** 2) - gaussian_G(x)) for x in xs), ""

    add("grid F vs closed form", 1e-4, closed_F)
    add("grid G vs closed form", 1e-5, closed_G)

    def oracle():
        g = make_grid(min(n, 512), x_max)
        sig = gaussian_wavefunction(g, 0, 0.25)
        setup = SetupParams(math.pi / 4)
        probe = ProbeSpec(0.0)
        p_err, psi_err = oracle_equivalence_error(sig, probe, setup, np.linspace(-1.5, 1.5, 7))
        return max(p_err, psi_err), f"(p {p_err:.1e}, moduli {psi_err:.1e})"

    add("two-mode oracle equivalence", 1e-6, oracle)

    def decoherence():
        g = make_grid(min(n, 256), x_max)
        return decoherence_identity_error(gaussian_wavefunction(g, 0, 0.25), 0.25), ""

    add("decoherence kernel identity", 1e-8, decoherence)

    def mc_samples():
        vac = gaussian_wavefunction(grid(), 0, 0.25)
        return sample_outcomes(vac, 0.25, 100_000, config.seed)

    add("Monte Carlo KS statistic", 0.01,
        lambda: (ks_statistic(mc_samples(), norm(0.0, math.sqrt(0.5)).cdf), ""))
    add("Monte Carlo variance (relative)", 0.03,
        lambda: (abs(np.var(mc_samples()) / 0.5 - 1.0), ""))

    def optimum():
        pt = optimize_sum(GAUSSIAN_OBJECTIVE, (0.1, 10.0))
        miss = max(0.0, abs(pt.x - 1.2) - 0.05)
        return miss, f"(x_m={pt.x:.6f}, F={pt.F:.6f}, G={pt.G:.6f})"

    add("closed-form optimum near x=1.2", 0.0, optimum)

    def grid_optimum():
        vac = gaussian_wavefunction(grid(), 0, 0.25)
        pt = optimize_sum(grid_objective(vac, 0.25))
        ref = optimize_sum(GAUSSIAN_OBJECTIVE)
        return abs(pt.x - ref.x), f"(grid x_m={pt.x:.6f})"

    add("grid optimum vs closed form", 2e-2, grid_optimum)
    return results


def optimum_line():
    pt = optimize_sum(GAUSSIAN_OBJECTIVE, (0.1, 10.0))
    return f"x_m = {pt.x:.9f}  F = {pt.F:.9f}  G = {pt.G:.9f}"
