import math

import numpy as np
import pytest
import scipy.integrate
from hypothesis import given, settings
from hypothesis import strategies as st

from gapdecay.errors import DomainError
from gapdecay.reservoir import (ReservoirParams, bound_state, correlation, correlation_direct,
                                correlation_rotated, derived_constants, dicke_scale,
                                relaxation_modes, special_amplitude, spectral_density,
                                spectral_peak, zero_lag)

params_st = st.builds(
    ReservoirParams,
    alpha=st.floats(min_value=0.1, max_value=0.9),
    big_a=st.floats(min_value=1e-3, max_value=1e2),
    a=st.floats(min_value=0.2, max_value=5.0),
)


class TestSpectralDensity:
    def test_direct_value(self):
        p = ReservoirParams(alpha=0.5, big_a=1.0, a=1.0)
        assert spectral_density(p, 1.0) == pytest.approx(1.0, rel=1e-14)

    def test_gap_region(self):
        p = ReservoirParams(alpha=0.3, big_a=2.0, a=1.0, omega0=5.0)
        assert spectral_density(p, 5.0) == 0.0
        assert spectral_density(p, 2.0) == 0.0

    def test_negative_frequency_rejected(self):
        p = ReservoirParams(alpha=0.5)
        with pytest.raises(DomainError):
            spectral_density(p, -1.0)

    @given(params_st, st.floats(min_value=0.0, max_value=100.0))
    @settings(max_examples=60, deadline=None)
    def test_gap_property(self, p, offset):
        omega = p.omega0 + offset
        val = spectral_density(p, omega)
        if offset <= 0.0:
            assert val == 0.0
        else:
            assert val > 0.0

    def test_peak_matches_grid_maximum(self):
        p = ReservoirParams(alpha=0.5, big_a=1.0, a=1.0)
        peak = spectral_peak(p)
        assert peak.omega_alpha == pytest.approx(1.0 / math.sqrt(3.0), rel=1e-12)
        assert peak.m_alpha == pytest.approx(1.13975, rel=1e-4)
        omegas = np.linspace(1e-6, 20.0, 400001)
        dens = spectral_density(p, omegas)
        i = np.argmax(dens)
        assert omegas[i] == pytest.approx(peak.omega_alpha, abs=5e-5)
        assert dens[i] <= peak.m_alpha * (1 + 1e-9)

    @pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
    def test_edge_and_tail_asymptotics(self, alpha):
        p = ReservoirParams(alpha=alpha, big_a=0.7, a=1.3)
        x = 1e-3 * p.a
        near = spectral_density(p, p.omega0 + x)
        assert near / (2 * p.big_a / p.a ** 2 * x ** alpha) == pytest.approx(1.0, rel=0.01)
        omega_far = p.omega0 + 1e3 * p.a
        far = spectral_density(p, omega_far)
        assert far / (2 * p.big_a * (omega_far - p.omega0) ** (alpha - 2)) == pytest.approx(1.0, rel=0.01)


class TestDerivedConstants:
    def test_reference_values(self):
        p = ReservoirParams(alpha=0.5, big_a=1e-4, a=1.0)
        dc = derived_constants(p)
        assert dc.z0 == pytest.approx(4.442882938158366e-4j, rel=1e-12)
        assert dc.z1.real == pytest.approx(math.pi * 1e-4 * math.sqrt(2.0) - 1.0, rel=1e-12)
        assert dc.z1.imag == 0.0
        assert dc.z_alpha == pytest.approx(-4.442882938158366e-4 * (1 + 1j), rel=1e-12)

    def test_zero_lag_identity(self):
        p = ReservoirParams(alpha=0.5, big_a=1e-4, a=1.0)
        dc = derived_constants(p)
        assert dc.f0 == pytest.approx(dc.z1.real + p.a ** 2, rel=1e-14)

    def test_special_amplitude_kills_z1(self):
        for alpha in (0.25, 0.5, 0.75):
            p = ReservoirParams(alpha=alpha, big_a=special_amplitude(alpha, a=2.0), a=2.0)
            assert abs(derived_constants(p).z1) < 1e-12 * p.a ** 2

    @given(params_st)
    @settings(max_examples=30, deadline=None)
    def test_z_alpha_modulus(self, p):
        dc = derived_constants(p)
        want = 2.0 * math.pi * p.coupling / math.sin(math.pi * p.alpha)
        assert abs(dc.z_alpha) == pytest.approx(want, rel=1e-12)

    @pytest.mark.parametrize("alpha,n", [(0.25, 1), (0.5, 3), (0.75, 2)])
    def test_moment_integral_matches_f0(self, alpha, n):
        p = ReservoirParams(alpha=alpha, big_a=0.3, a=1.4, n_atoms=n)
        moment, _ = scipy.integrate.quad(
            lambda x: p.n_atoms * spectral_density(p, p.omega0 + x), 0.0, np.inf, limit=400)
        assert moment == pytest.approx(zero_lag(p), rel=1e-8)


class TestDickeScale:
    def test_identity(self):
        p = ReservoirParams(alpha=0.5, big_a=1.0)
        assert dicke_scale(p, 1) == p

    def test_equivalent_to_amplitude_scaling(self):
        p = ReservoirParams(alpha=0.4, big_a=0.2, a=1.1)
        scaled = dicke_scale(p, 7)
        direct = ReservoirParams(alpha=0.4, big_a=1.4, a=1.1)
        dc_a = derived_constants(scaled)
        dc_b = derived_constants(direct)
        assert dc_a.z0 == pytest.approx(dc_b.z0, rel=1e-14)
        assert dc_a.z1 == pytest.approx(dc_b.z1, rel=1e-14)
        assert dc_a.z_alpha == pytest.approx(dc_b.z_alpha, rel=1e-14)


class TestCorrelation:
    def test_zero_lag(self):
        p = ReservoirParams(alpha=0.5, big_a=1e-4, a=1.0)
        assert correlation(p, 0.0) == pytest.approx(
            math.pi * 1e-4 * math.sqrt(2.0), rel=1e-13)

    def test_modulus_bound(self):
        p = ReservoirParams(alpha=0.35, big_a=2.0, a=0.8)
        f0 = zero_lag(p)
        for tau in (0.1, 0.7, 2.0, 9.0):
            assert abs(correlation(p, tau)) <= f0 * (1 + 1e-12)

    @pytest.mark.parametrize("tau", [0.3, 1.0, 1.9])
    def test_two_quadrature_routes_agree(self, tau):
        p = ReservoirParams(alpha=0.5, big_a=1.0, a=1.0)
        assert abs(correlation_direct(p, tau) - correlation_rotated(p, tau)) < 1e-9

    def test_smoothness_regression(self):
        p = ReservoirParams(alpha=0.5, big_a=1.0, a=1.0)
        dtau = 1e-6
        f0 = zero_lag(p)
        prev = correlation(p, 0.5)
        for k in range(1, 5):
            cur = correlation(p, 0.5 + k * dtau)
            assert abs(cur - prev) < 50.0 * f0 * dtau
            prev = cur

    def test_negative_lag_rejected(self):
        with pytest.raises(DomainError):
            correlation(ReservoirParams(alpha=0.5), -1.0)


class TestRelaxationModes:
    @pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
    def test_reproduces_correlation(self, alpha):
        p = ReservoirParams(alpha=alpha, big_a=1.0, a=1.0)
        rates, amps = relaxation_modes(p, t_min=1e-3)
        f0 = zero_lag(p)
        for tau in (1e-3, 0.05, 0.4, 2.0, 10.0):
            approx = np.dot(amps, np.exp(-np.minimum(rates * tau, 700.0)))
            exact = correlation(p, tau)
            assert abs(approx - exact) < 1e-8 * f0

    def test_static_weight_matches_resolvent_origin(self):
        # sum v_j / y_j tends to the Laplace transform of f at s = 0; the 1/y
        # moment converges like y_min^alpha, the slowest of all the moments
        # the solver consumes, so the bound here is the truncation bound
        p = ReservoirParams(alpha=0.5, big_a=1.0, a=1.0)
        rates, amps = relaxation_modes(p, t_min=1e-3)
        total = np.dot(amps, 1.0 / rates)
        dc = derived_constants(p)
        want = -dc.z0 / p.a ** 2
        y_min = float(rates.min())
        bound = 10.0 * (2.0 * p.coupling / p.a ** 2) * y_min ** p.alpha
        assert abs(total - want) < bound
        assert abs(total - want) < 1e-3 * abs(want)


class TestBoundState:
    def test_fixed_point_equation(self):
        p = ReservoirParams(alpha=0.4, big_a=0.8, a=1.2)
        bs = bound_state(p)
        rhs, _ = scipy.integrate.quad(
            lambda x: p.n_atoms * spectral_density(p, p.omega0 + x) / (x + bs.detuning),
            0.0, np.inf, limit=400)
        assert bs.detuning == pytest.approx(rhs, rel=1e-9)

    def test_residue_real_positive_below_one(self):
        for alpha, big_a in ((0.25, 0.1), (0.5, 1.0), (0.75, 10.0)):
            bs = bound_state(ReservoirParams(alpha=alpha, big_a=big_a))
            assert abs(bs.residue.imag) < 1e-12 * abs(bs.residue)
            assert 0.0 < bs.residue.real < 1.0

    def test_residue_equals_overlap_integral(self):
        # 1 / (1 + integral J_N/(x+Delta)^2)
        p = ReservoirParams(alpha=0.5, big_a=1.0)
        bs = bound_state(p)
        integral, _ = scipy.integrate.quad(
            lambda x: spectral_density(p, x) / (x + bs.detuning) ** 2, 0.0, np.inf, limit=400)
        assert bs.residue.real == pytest.approx(1.0 / (1.0 + integral), rel=1e-9)

    def test_weak_coupling_traps_almost_everything(self):
        bs = bound_state(ReservoirParams(alpha=0.5, big_a=1e-4))
        assert bs.trapped_population > 0.96


class TestParamsValidation:
    @pytest.mark.parametrize("kwargs", [
        dict(alpha=0.0), dict(alpha=1.0), dict(alpha=0.5, big_a=0.0),
        dict(alpha=0.5, a=-1.0), dict(alpha=0.5, n_atoms=0),
    ])
    def test_rejects(self, kwargs):
        with pytest.raises(DomainError):
            ReservoirParams(**kwargs)
