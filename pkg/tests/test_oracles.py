import math

import numpy as np
import pytest

from gapdecay.closed_half import amplitude_half
from gapdecay.errors import DomainError, GridResolutionError
from gapdecay.oracles import (ModeGrid, VolterraConfig, mode_discretize, mode_evolve,
                              mode_tail_bound, volterra_solve)
from gapdecay.reservoir import ReservoirParams, spectral_density, zero_lag


class TestVolterraConfig:
    def test_validation(self):
        with pytest.raises(DomainError):
            VolterraConfig(dt=0.0, t_max=1.0)
        with pytest.raises(DomainError):
            VolterraConfig(dt=2.0, t_max=1.0)
        with pytest.raises(DomainError):
            VolterraConfig(dt=0.1, t_max=1.0, scheme_order=3)


class TestVolterraSolve:
    def test_initial_condition(self):
        p = ReservoirParams(alpha=0.5, big_a=1.0)
        curve = volterra_solve(p, VolterraConfig(dt=1e-3, t_max=0.5))
        assert curve.c[0] == 1.0 + 0j

    def test_constant_kernel_gives_cosine(self):
        # f = c constant => C'' = -c C => C = cos(sqrt(c) t); rate-zero mode hook
        p = ReservoirParams(alpha=0.5, big_a=1.0)
        cfg = VolterraConfig(dt=math.pi / 4000, t_max=math.pi)
        curve = volterra_solve(p, cfg, modes=([0.0], [1.0]))
        assert abs(curve.c[-1] - math.cos(math.pi)) < 5e-6
        mid = len(curve.t) // 2
        assert abs(curve.c[mid] - math.cos(curve.t[mid])) < 5e-6

    def test_constant_kernel_rectangle_scheme(self):
        p = ReservoirParams(alpha=0.5, big_a=1.0)
        cfg = VolterraConfig(dt=math.pi / 8000, t_max=math.pi, scheme_order=1)
        curve = volterra_solve(p, cfg, modes=([0.0], [1.0]))
        assert abs(curve.c[-1] - math.cos(math.pi)) < 2e-3

    def test_matches_closed_form(self):
        p = ReservoirParams(alpha=0.5, big_a=1.0)
        curve = volterra_solve(p, VolterraConfig(dt=1e-4, t_max=2.0))
        idx = [1, 10, 1000, 10000, 20000]
        for i in idx:
            assert abs(curve.c[i] - amplitude_half(p, curve.t[i])) < 1e-6

    def test_richardson_halving_ratio(self):
        # order-2 scheme: halving dt cuts the closed-form deviation ~4x
        p = ReservoirParams(alpha=0.5, big_a=1.0)
        devs = []
        for n in (1250, 2500):
            curve = volterra_solve(p, VolterraConfig(dt=1.0 / n, t_max=1.0))
            sample = range(n // 10, n + 1, n // 10)
            devs.append(max(abs(curve.c[i] - amplitude_half(p, curve.t[i])) for i in sample))
        ratio = devs[0] / devs[1]
        assert 3.0 <= ratio <= 5.0

    def test_amplitude_bounded(self):
        for alpha in (0.25, 0.5, 0.75):
            p = ReservoirParams(alpha=alpha, big_a=1.0)
            curve = volterra_solve(p, VolterraConfig(dt=5e-4, t_max=2.0))
            assert np.max(np.abs(curve.c)) <= 1.0 + 1e-9

    def test_coarse_step_warns(self):
        p = ReservoirParams(alpha=0.5, big_a=100.0)
        with pytest.warns(UserWarning, match="too coarse"):
            volterra_solve(p, VolterraConfig(dt=0.05, t_max=0.5))


class TestModeDiscretize:
    def test_mass_conservation(self):
        import scipy.integrate

        p = ReservoirParams(alpha=0.5, big_a=1.0)
        grid = mode_discretize(p, count=4000, omega_cap=200.0)
        total = float(np.dot(grid.couplings, grid.couplings))
        want, _ = scipy.integrate.quad(
            lambda x: spectral_density(p, x), 0.0, 200.0, limit=400, points=[1.0])
        assert total == pytest.approx(want, rel=1e-6)

    def test_truncated_mass_is_the_analytic_tail(self):
        import scipy.integrate

        p = ReservoirParams(alpha=0.5, big_a=1.0)
        with pytest.warns(UserWarning, match="tail mass"):
            grid = mode_discretize(p, count=4000, omega_cap=200.0)
        f0 = zero_lag(p)
        total = float(np.dot(grid.couplings, grid.couplings))
        tail, _ = scipy.integrate.quad(lambda x: spectral_density(p, x), 200.0, np.inf, limit=300)
        assert f0 - total == pytest.approx(tail, rel=1e-6)

    def test_cap_too_small_warns(self):
        p = ReservoirParams(alpha=0.75, big_a=1.0)
        with pytest.warns(UserWarning, match="tail mass"):
            mode_discretize(p, count=500, omega_cap=5.0)

    def test_count_validation(self):
        with pytest.raises(DomainError):
            mode_discretize(ReservoirParams(alpha=0.5), count=5, omega_cap=10.0)


class TestModeEvolve:
    def test_initial_condition(self):
        grid = ModeGrid(frequencies=[0.0], couplings=[0.5])
        curve = mode_evolve(grid, t_max=1.0, dt=1e-3)
        assert curve.c[0] == 1.0 + 0j

    def test_single_mode_rabi(self):
        g = 0.7
        grid = ModeGrid(frequencies=[0.0], couplings=[g])
        curve = mode_evolve(grid, t_max=3.0, dt=1e-3)
        for i in (500, 1500, 3000):
            assert abs(curve.c[i] - math.cos(g * curve.t[i])) < 1e-10

    def test_unitarity_defect(self):
        p = ReservoirParams(alpha=0.5, big_a=1.0)
        grid = mode_discretize(p, count=2000, omega_cap=150.0)
        curve = mode_evolve(grid, t_max=2.0, dt=5e-4, sample_every=100, params=p)
        assert curve.meta["unitarity_defect"] <= 1e-8
        assert np.max(np.abs(curve.c)) <= 1.0 + 1e-12

    def test_step_resolution_enforced(self):
        grid = ModeGrid(frequencies=[50.0], couplings=[0.1])
        with pytest.raises(GridResolutionError):
            mode_evolve(grid, t_max=1.0, dt=0.01)

    @pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
    def test_cross_oracle_agreement(self, alpha):
        p = ReservoirParams(alpha=alpha, big_a=1.0)
        cap = 200.0
        grid = mode_discretize(p, count=4000, omega_cap=cap)
        modes = mode_evolve(grid, t_max=2.0, dt=5e-4, sample_every=200, params=p)
        volterra = volterra_solve(p, VolterraConfig(dt=5e-4, t_max=2.0))
        tol = max(1e-4, mode_tail_bound(p, cap, horizon=2.0))
        for t, c in zip(modes.t, modes.c):
            i = int(round(t / 5e-4))
            assert abs(c - volterra.c[i]) < tol

    def test_refinement_monotonicity(self):
        # with the cap high enough that the tail floor sits below the
        # discretization error, doubling the count cuts the deviation
        p = ReservoirParams(alpha=0.5, big_a=1.0)
        volterra = volterra_solve(p, VolterraConfig(dt=2.5e-4, t_max=1.0))
        devs = []
        for count in (500, 1000, 2000):
            grid = mode_discretize(p, count=count, omega_cap=400.0)
            curve = mode_evolve(grid, t_max=1.0, dt=2.5e-4, sample_every=10 ** 9, params=p)
            devs.append(abs(curve.c[-1] - volterra.c[-1]))
        assert devs[1] < 0.5 * devs[0]
        assert devs[2] < 0.5 * devs[1]
