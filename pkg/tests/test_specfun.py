import cmath
import math

import numpy as np
import pytest
import scipy.integrate
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import wofz

from gapdecay.errors import DomainError, PoleError
from gapdecay.specfun import (SQRT_PI, WrightKernelParams, complex_gamma, scaled_erfc_kernel,
                              scaled_upper_gamma_half, wright_kernel)

GAMMA_7_5 = 1871.2543057977875  # via recurrence from Gamma(1.5)
E_GAMMA_HALF_1 = 0.7578721561413121  # e * Gamma(1/2, 1), frozen from 40-digit arithmetic
W_1_1_HALF_AT_1 = 0.2642615346959919  # frozen from 30-digit summation


class TestComplexGamma:
    def test_one(self):
        assert complex_gamma(1.0) == pytest.approx(1.0, rel=1e-14)

    def test_half(self):
        assert complex_gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-13)

    def test_recurrence_value(self):
        assert complex_gamma(7.5) == pytest.approx(GAMMA_7_5, rel=1e-13)

    @pytest.mark.parametrize("z", [0.0, -1.0, -7.0])
    def test_poles(self, z):
        with pytest.raises(PoleError):
            complex_gamma(z)

    def test_overflow(self):
        with pytest.raises(OverflowError):
            complex_gamma(400.0)

    def test_reflection_line(self):
        # Gamma(z) Gamma(1-z) sin(pi z)/pi = 1 on Re z = 0.3
        for y in np.linspace(-10.0, 10.0, 41):
            z = complex(0.3, y)
            val = complex_gamma(z) * complex_gamma(1 - z) * cmath.sin(math.pi * z) / math.pi
            assert abs(val - 1.0) < 1e-11


class TestScaledGammaHalf:
    def test_at_zero(self):
        assert scaled_upper_gamma_half(0.0) == pytest.approx(math.sqrt(math.pi), rel=1e-14)

    def test_at_one(self):
        assert scaled_upper_gamma_half(1.0) == pytest.approx(E_GAMMA_HALF_1, rel=1e-12)

    def test_large_real_asymptote(self):
        # two-term expansion z^(-1/2) (1 - 1/(2z)) at z = 1e6
        val = scaled_upper_gamma_half(1e6)
        assert val.real == pytest.approx(1e-3 * (1.0 - 5e-7), rel=1e-12)

    def test_quadrature_identity_real_axis(self):
        # e^{-z} G(z) equals the defining integral on z in [1, 30]
        for z in np.linspace(1.0, 30.0, 16):
            direct, _ = scipy.integrate.quad(
                lambda s: s ** -0.5 * math.exp(-s), z, np.inf,
                epsabs=1e-300, epsrel=1e-13, limit=300)
            val = scaled_upper_gamma_half(z) * math.exp(-z)
            assert abs(val - direct) / direct < 1e-10

    def test_huge_modulus_no_overflow(self):
        for z in (1e12, 1e12 + 1e10j, -1e10 + 1e12j):
            val = scaled_upper_gamma_half(z)
            assert np.isfinite(val.real) and np.isfinite(val.imag)

    def test_complex_plane_against_faddeeva(self):
        # sqrt(pi) wofz(i sqrt(z)) is an independent route to the same function
        rng = np.random.default_rng(7)
        for _ in range(300):
            r = math.exp(rng.uniform(math.log(1e-2), math.log(1e8)))
            theta = rng.uniform(-math.pi, math.pi)
            z = r * cmath.exp(1j * theta)
            ref = SQRT_PI * wofz(1j * np.sqrt(complex(z)))
            val = scaled_upper_gamma_half(z)
            assert abs(val - ref) <= 1e-11 * abs(ref)

    def test_nonfinite_rejected(self):
        with pytest.raises(DomainError):
            scaled_upper_gamma_half(complex("inf"))


class TestScaledErfcKernel:
    def test_entire_kernel_matches_faddeeva(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            w = complex(rng.uniform(-8, 8), rng.uniform(-8, 8))
            ref = SQRT_PI * wofz(1j * w)
            assert abs(scaled_erfc_kernel(w) - ref) <= 1e-11 * max(abs(ref), 1.0)

    def test_reflection_consistency(self):
        w = 1.3 - 0.7j
        total = scaled_erfc_kernel(w) + scaled_erfc_kernel(-w)
        assert total == pytest.approx(2.0 * SQRT_PI * cmath.exp(w * w), rel=1e-12)


class TestWrightKernel:
    def test_unit_at_origin(self):
        params = WrightKernelParams(n=0, k=0, alpha=0.5)
        assert wright_kernel(params, 0.0) == pytest.approx(1.0, rel=1e-14)

    def test_cosine_identity_at_4(self):
        params = WrightKernelParams(n=0, k=0, alpha=0.5)
        assert wright_kernel(params, 4.0).real == pytest.approx(math.cos(2.0), abs=1e-13)

    def test_cosine_identity_sweep(self):
        params = WrightKernelParams(n=0, k=0, alpha=0.3)
        for z in np.linspace(0.0, 25.0, 101):
            val = wright_kernel(params, z)
            assert abs(val - math.cos(math.sqrt(z))) < 1e-12

    def test_frozen_value(self):
        params = WrightKernelParams(n=1, k=1, alpha=0.5)
        assert wright_kernel(params, 1.0).real == pytest.approx(W_1_1_HALF_AT_1, abs=1e-12)

    def test_shifted_variant_closed_form(self):
        # n=0, k=0 shifted: sum (-z)^m / (2m+2)! = (1 - cos sqrt(z))/z
        params = WrightKernelParams(n=0, k=0, alpha=0.5)
        for z in (0.5, 4.0, 9.0):
            want = (1.0 - math.cos(math.sqrt(z))) / z
            assert wright_kernel(params, z, shifted=True).real == pytest.approx(want, rel=1e-12)

    @given(st.floats(min_value=0.0, max_value=25.0))
    @settings(max_examples=40, deadline=None)
    def test_cosine_identity_property(self, z):
        params = WrightKernelParams(n=0, k=0, alpha=0.5)
        assert abs(wright_kernel(params, z) - math.cos(math.sqrt(z))) < 1e-12

    def test_index_validation(self):
        with pytest.raises(DomainError):
            WrightKernelParams(n=1, k=2, alpha=0.5)
        with pytest.raises(DomainError):
            WrightKernelParams(n=1, k=1, alpha=1.0)
