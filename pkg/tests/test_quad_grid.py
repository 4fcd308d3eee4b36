import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qndsim import (
    GridDensityMatrix,
    GridError,
    NormalizationError,
    SupportError,
    displace,
    fock_wavefunction,
    gaussian_wavefunction,
    make_grid,
    overlap,
    pure_mixed_fidelity,
    squeeze,
    superpose,
)
from qndsim.quad_grid import band_limited_eval, cat_wavefunction


def second_moment(psi):
    return float(np.sum(psi.probability * psi.grid.nodes ** 2) * psi.grid.dx)


class TestMakeGrid:
    def test_spacing(self):
        assert make_grid(1024, 8.0).dx == pytest.approx(16 / 1023, rel=1e-15)
        assert make_grid(16, 1.0).dx == pytest.approx(2 / 15, rel=1e-15)

    @pytest.mark.parametrize("n, x_max", [(8, 8.0), (15, 1.0), (64, float("inf")), (64, -1.0)])
    def test_rejects(self, n, x_max):
        with pytest.raises(GridError):
            make_grid(n, x_max)

    def test_span(self):
        g = make_grid(100, 3.0)
        assert g.dx * (g.n_points - 1) == pytest.approx(2 * g.x_max, rel=1e-14)
        assert g.nodes[0] == -3.0 and g.nodes[-1] == 3.0


class TestBuilders:
    def test_vacuum_variance(self, vacuum):
        assert second_moment(vacuum) == pytest.approx(0.25, abs=1e-6)
        assert abs(overlap(vacuum, vacuum) - 1) < 1e-9

    def test_squeezed_probe_variance(self, grid):
        target = 0.25 * math.exp(-1.0)
        psi = gaussian_wavefunction(grid, 0.0, target)
        assert second_moment(psi) == pytest.approx(0.0919698602928606, abs=1e-6)

    def test_gaussian_support_violation(self, grid):
        with pytest.raises(SupportError):
            gaussian_wavefunction(grid, 6.0, 0.25)

    def test_fock_vacuum_is_gaussian(self, grid, vacuum):
        f0 = fock_wavefunction(grid, 0)
        assert np.max(np.abs(f0.amplitudes - vacuum.amplitudes)) < 1e-9

    @pytest.mark.parametrize("n", [0, 1, 2, 5, 10])
    def test_fock_second_moment(self, grid, n):
        # <n| x^2 |n> = (2n + 1) / 4 from [a, a^dagger] = 1 and x = (a + a^dagger)/2
        assert second_moment(fock_wavefunction(grid, n)) == pytest.approx((2 * n + 1) / 4, abs=1e-6)

    def test_fock_orthonormal_up_to_20(self, grid):
        states = np.array([fock_wavefunction(grid, n).amplitudes for n in range(21)])
        gram = states.conj() @ states.T * grid.dx
        assert np.max(np.abs(gram - np.eye(21))) < 1e-8

    def test_fock_rejects_large_n(self, grid):
        with pytest.raises(SupportError):
            fock_wavefunction(grid, 61)
        with pytest.raises(SupportError):
            fock_wavefunction(make_grid(256, 3.0), 20)

    def test_builders_leakage(self, grid):
        for psi in (gaussian_wavefunction(grid, 1.0, 0.4), fock_wavefunction(grid, 7),
                    cat_wavefunction(grid, 2.0, "odd")):
            assert psi.norm2() == pytest.approx(1.0, abs=1e-9)
            assert psi.leakage() < 1e-10


class TestSuperpose:
    def test_cancellation(self, vacuum):
        with pytest.raises(NormalizationError):
            superpose(vacuum, vacuum, 1, -1)

    def test_even_cat_normalized(self, grid):
        plus = gaussian_wavefunction(grid, 2.0, 0.25)
        minus = gaussian_wavefunction(grid, -2.0, 0.25)
        cat = superpose(plus, minus, 1, 1)
        assert cat.norm2() == pytest.approx(1.0, abs=1e-12)
        assert np.allclose(cat.amplitudes, cat.amplitudes[::-1], atol=1e-12)

    def test_identity_case(self, grid, vacuum):
        out = superpose(vacuum, fock_wavefunction(grid, 1), 1, 0)
        assert np.max(np.abs(out.amplitudes - vacuum.amplitudes)) < 1e-12

    def test_grid_mismatch(self, vacuum):
        other = gaussian_wavefunction(make_grid(512, 8.0), 0, 0.25)
        with pytest.raises(GridError):
            superpose(vacuum, other, 1, 1)


class TestDisplace:
    def test_zero(self, vacuum):
        assert np.max(np.abs(displace(vacuum, 0).amplitudes - vacuum.amplitudes)) < 1e-12

    def test_moments(self, vacuum):
        out = displace(vacuum, 1.0)
        assert out.mean() == pytest.approx(1.0, abs=1e-6)
        assert out.variance() == pytest.approx(0.25, abs=1e-6)
        assert out.norm2() == pytest.approx(1.0, abs=1e-9)

    def test_subgrid_shift_matches_analytic(self, grid, vacuum):
        alpha = 0.3 * grid.dx + 0.77
        ref = gaussian_wavefunction(grid, alpha, 0.25)
        assert np.max(np.abs(displace(vacuum, alpha).amplitudes - ref.amplitudes)) < 1e-10

    def test_support(self, vacuum):
        with pytest.raises(SupportError):
            displace(vacuum, 6.0)

    @settings(max_examples=25, deadline=None)
    @given(alpha=st.floats(-2.5, 2.5))
    def test_inverse(self, fock1, alpha):
        back = displace(displace(fock1, alpha), -alpha)
        assert np.max(np.abs(back.amplitudes - fock1.amplitudes)) < 1e-9

    def test_mean_shift_fock(self, fock1):
        assert displace(fock1, -1.3).mean() == pytest.approx(fock1.mean() - 1.3, abs=1e-6)


class TestSqueeze:
    def test_zero(self, vacuum):
        assert np.max(np.abs(squeeze(vacuum, 0).amplitudes - vacuum.amplitudes)) < 1e-12

    @pytest.mark.parametrize("r", [0.5, -0.5])
    def test_variance(self, vacuum, r):
        out = squeeze(vacuum, r)
        assert second_moment(out) == pytest.approx(0.25 * math.exp(-2 * r), rel=1e-5)
        assert out.norm2() == pytest.approx(1.0, abs=1e-8)

    def test_matches_gaussian_builder(self, grid, vacuum):
        ref = gaussian_wavefunction(grid, 0.0, 0.25 * math.exp(-0.8))
        assert np.max(np.abs(squeeze(vacuum, 0.4).amplitudes - ref.amplitudes)) < 1e-9

    def test_support(self, vacuum):
        with pytest.raises(SupportError):
            squeeze(vacuum, -1.5)

    @settings(max_examples=25, deadline=None)
    @given(r=st.floats(-0.4, 0.6))
    def test_inverse(self, fock1, r):
        back = squeeze(squeeze(fock1, r), -r)
        assert np.max(np.abs(back.amplitudes - fock1.amplitudes)) < 1e-7
        assert squeeze(fock1, r).norm2() == pytest.approx(1.0, abs=1e-8)


class TestOverlap:
    def test_self(self, fock1):
        assert abs(overlap(fock1, fock1) - 1) < 1e-9

    def test_orthogonal(self, grid):
        assert abs(overlap(fock_wavefunction(grid, 0), fock_wavefunction(grid, 2))) < 1e-8

    def test_displaced_vacuum(self, vacuum):
        # closed form exp(-d^2/2) under the 1/4-variance convention, d = 1
        value = overlap(vacuum, displace(vacuum, 1.0))
        assert value.real == pytest.approx(0.6065306597126334, abs=1e-6)
        assert abs(value.imag) < 1e-12

    def test_quadrature_oracle(self, grid):
        # independent route: scipy adaptive quadrature of the analytic amplitudes
        from scipy.integrate import quad

        def amp(y, m):
            return (2 * math.pi * 0.25) ** -0.25 * math.exp(-((y - m) ** 2))

        ref, _ = quad(lambda y: amp(y, 0.0) * amp(y, 1.0), -10, 10)
        a = gaussian_wavefunction(grid, 0.0, 0.25)
        b = gaussian_wavefunction(grid, 1.0, 0.25)
        assert overlap(a, b).real == pytest.approx(ref, abs=1e-10)


class TestBandLimitedEval:
    def test_interpolates_offgrid(self, grid, vacuum):
        pts = np.array([-1.2345, 0.0, 0.5 * grid.dx, 2.2])
        exact = (2 / math.pi) ** 0.25 * np.exp(-pts ** 2)
        assert np.max(np.abs(band_limited_eval(vacuum.amplitudes, grid, pts) - exact)) < 1e-12

    def test_outside_grid_is_zero(self, grid, vacuum):
        assert band_limited_eval(vacuum.amplitudes, grid, np.array([8.5, -20.0])).tolist() == [0, 0]


class TestPureMixedFidelity:
    def test_pure_self(self, fock1):
        assert pure_mixed_fidelity(fock1, GridDensityMatrix.pure(fock1)) == pytest.approx(1, abs=1e-8)

    def test_orthogonal(self, grid, fock1):
        f0 = fock_wavefunction(grid, 0)
        assert abs(pure_mixed_fidelity(f0, GridDensityMatrix.pure(fock1))) < 1e-8

    def test_trace_check(self, vacuum):
        rho = GridDensityMatrix(vacuum.grid, 2 * np.outer(vacuum.amplitudes, vacuum.amplitudes))
        with pytest.raises(NormalizationError):
            pure_mixed_fidelity(vacuum, rho)

    def test_grid_mismatch(self, vacuum):
        other = gaussian_wavefunction(make_grid(256, 8.0), 0, 0.25)
        with pytest.raises(GridError):
            pure_mixed_fidelity(vacuum, GridDensityMatrix.pure(other))

    def test_density_invariants(self, vacuum):
        rho = GridDensityMatrix.pure(superpose(vacuum, displace(vacuum, 1.0), 1, 1j))
        assert rho.hermiticity_error() < 1e-12
        assert abs(rho.trace() - 1) < 1e-9
        assert rho.min_eigenvalue() > -1e-9
