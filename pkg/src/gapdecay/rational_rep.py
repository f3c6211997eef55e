"""Rational-exponent (alpha = p/q) representation via the resolvent polynomial.

For alpha = p/q the resolvent denominator becomes the degree-3q polynomial
Q(z) = z^(3q) + z1 z^q + z_alpha z^p + z0 in z = s^(1/q). The amplitude then
splits exactly into pole residues (roots with |arg z| < pi/q, which include
the non-decaying bound-state level) plus a branch-cut integral whose kernel
is the sine-modulated relaxation density Phi. This module is a validation
path with a relaxed 1e-3 accuracy contract; the production solvers are the
closed half-exponent form and the double series.
"""
import cmath
import math
from dataclasses import dataclass
from math import gcd

import numpy as np
import scipy.integrate

from .errors import (DivergenceError, DomainError, MultiplicityError,
                     QuadratureError, RootQualityError)
from .reservoir import ReservoirParams, derived_constants

_CLUSTER_RTOL = 1e-7


@dataclass(frozen=True)
class RationalAlpha:
    """Reduced fraction p/q in (0,1)."""

    p: int
    q: int

    def __post_init__(self):
        if self.p < 1 or self.q < 2 or self.p >= self.q:
            raise DomainError(f"need 1 <= p < q with q >= 2, got p={self.p}, q={self.q}")
        if gcd(self.p, self.q) != 1:
            raise DomainError(f"p/q must be in lowest terms, got {self.p}/{self.q}")

    @property
    def value(self):
        return self.p / self.q


@dataclass(frozen=True)
class RationalRep:
    """Clustered roots (zeta, multiplicity) and residue coefficients b[(l, k)]."""

    roots: tuple
    b_coeffs: dict
    coefficients: np.ndarray
    a: float
    params: ReservoirParams


def _poly_coefficients(params, ra):
    dc = derived_constants(params)
    deg = 3 * ra.q
    coeffs = np.zeros(deg + 1, dtype=complex)
    coeffs[0] = 1.0
    coeffs[deg - ra.q] = dc.z1
    coeffs[deg - ra.p] = dc.z_alpha
    coeffs[deg] = dc.z0
    return coeffs


def _cluster(roots):
    scale = max(np.max(np.abs(roots)), 1e-30)
    remaining = list(roots)
    clusters = []
    while remaining:
        seed = remaining.pop(0)
        members = [seed]
        rest = []
        for r in remaining:
            if abs(r - seed) <= _CLUSTER_RTOL * scale:
                members.append(r)
            else:
                rest.append(r)
        remaining = rest
        clusters.append((complex(np.mean(members)), len(members)))
    clusters.sort(key=lambda c: (c[0].real, c[0].imag))
    return clusters


def _cauchy_derivatives(func, center, radius, orders, n_nodes=64):
    """d^m f / dz^m at center via trapezoid on a circle (spectral accuracy)."""
    theta = 2.0 * math.pi * np.arange(n_nodes) / n_nodes
    ring = center + radius * np.exp(1j * theta)
    vals = np.array([func(z) for z in ring])
    out = {}
    for m in orders:
        coeff = np.mean(vals * np.exp(-1j * m * theta)) / radius ** m
        out[m] = coeff * math.factorial(m)
    return out


def build_poly_roots(params: ReservoirParams, ra: RationalAlpha) -> RationalRep:
    """All 3q roots with multiplicity clustering and residue coefficients.

    Simple roots use b_{l,1} = (zeta^(2q) - a^2)/Q'(zeta); double clusters take
    the deflated-factor derivatives from a Cauchy circle. Higher multiplicity
    is rejected (the derivative formulas turn ill-conditioned).
    """
    if abs(params.alpha - ra.value) > 1e-12:
        raise DomainError(f"alpha={params.alpha} does not match {ra.p}/{ra.q}")
    coeffs = _poly_coefficients(params, ra)
    deriv = np.polyder(coeffs)
    roots = np.roots(coeffs)
    for _ in range(3):
        num = np.polyval(coeffs, roots)
        den = np.polyval(deriv, roots)
        safe = np.abs(den) > 0
        roots[safe] = roots[safe] - num[safe] / den[safe]
    # residual bound relative to the evaluation magnitude of the polynomial
    absc = np.abs(coeffs)
    for r in roots:
        scale = float(np.polyval(absc, abs(r)))
        if abs(np.polyval(coeffs, r)) > 1e-9 * scale:
            raise RootQualityError(
                f"root {r:.6g} residual {abs(np.polyval(coeffs, r)):.2e} above 1e-9*{scale:.2e}"
            )
    clusters = _cluster(roots)
    a = params.a
    q2 = 2 * ra.q
    b = {}
    for l, (zeta, mult) in enumerate(clusters):
        if mult == 1:
            b[(l, 1)] = (zeta ** q2 - a * a) / np.polyval(deriv, zeta)
        elif mult == 2:
            others = [c for j, c in enumerate(clusters) if j != l]
            nearest = min((abs(zeta - c[0]) for c in others), default=1.0)
            radius = 0.1 * min(nearest, max(abs(zeta), 1.0))

            def deflated(z, zeta=zeta):
                return (z ** q2 - a * a) * (z - zeta) ** 2 / np.polyval(coeffs, z)

            ders = _cauchy_derivatives(deflated, zeta, radius, orders=(0, 1))
            b[(l, 1)] = ders[1]  # (m-k)! (k-1)! = 1 for both entries at m=2
            b[(l, 2)] = ders[0]
        else:
            raise MultiplicityError(
                f"root cluster at {zeta:.6g} has multiplicity {mult} > 2"
            )
    return RationalRep(roots=tuple(clusters), b_coeffs=b, coefficients=coeffs, a=a, params=params)


def phi_kernel_complex(rep: RationalRep, ra: RationalAlpha, eta, xi, require_damped=True):
    """Assembled relaxation-density kernel before projection.

    It is genuinely complex here (the resolvent polynomial has complex
    coefficients, so its roots come without conjugate partners); integrating
    it over eta reproduces the branch-cut integrand exactly. The eta-integral
    converges only where every root satisfies Re zeta < cos(pi/q) xi^(1/q);
    outside that region (always the case for the bound-state root at small
    xi) require_damped raises.
    """
    if eta < 0.0 or xi < 0.0:
        raise DomainError("eta and xi must be nonnegative")
    q = ra.q
    damp = math.cos(math.pi / q) * xi ** (1.0 / q)
    if require_damped:
        bad = [zeta for (zeta, _) in rep.roots if zeta.real >= damp]
        if bad:
            raise DivergenceError(
                f"eta-integral undamped at xi={xi:g} for roots {bad}; "
                "their contribution must enter through pole residues"
            )
    osc = math.sin(eta * xi ** (1.0 / q) * math.sin(math.pi / q))
    total = 0j
    for l, (zeta, mult) in enumerate(rep.roots):
        grow = cmath.exp(eta * (zeta - damp))
        for k in range(1, mult + 1):
            total += rep.b_coeffs[(l, k)] / math.pi * eta ** (mult - k) * osc * grow
    return total


def phi_kernel(rep: RationalRep, ra: RationalAlpha, eta, xi, require_damped=True):
    """Real projection of the relaxation-density kernel."""
    return phi_kernel_complex(rep, ra, eta, xi, require_damped).real


def phi_kernel_imbalance(rep, ra, eta, xi):
    """|imaginary part| of the assembled kernel (not roundoff for this family)."""
    return abs(phi_kernel_complex(rep, ra, eta, xi, require_damped=False).imag)


def _pole_contribution(rep, ra, t):
    """Residue terms of roots on the principal sheet (|arg zeta| < pi/q)."""
    q = ra.q
    total = 0j
    boundary = math.pi / q - 1e-12
    for l, (zeta, mult) in enumerate(rep.roots):
        if abs(cmath.phase(zeta)) >= boundary:
            continue
        if mult == 1:
            total += q * zeta ** (q - 1) * rep.b_coeffs[(l, 1)] * cmath.exp(zeta ** q * t)
        else:
            # Cauchy residue of C(s) e^{st} on a small s-circle around zeta^q
            s0 = zeta ** q
            r = 0.05 * max(abs(s0), 1.0)
            nodes = 128
            theta = 2.0 * math.pi * np.arange(nodes) / nodes
            s_ring = s0 + r * np.exp(1j * theta)
            z_ring = zeta * (s_ring / s0) ** (1.0 / q)
            cvals = (z_ring ** (2 * q) - rep.a ** 2) / np.polyval(rep.coefficients, z_ring)
            total += np.mean(cvals * np.exp(s_ring * t) * (s_ring - s0))
    return total


def _cut_integrand(rep, ra, u):
    """(1/2pi i)[C(edge below) - C(edge above)] at xi = u^q, partial fractions."""
    q = ra.q
    zm = u * cmath.exp(-1j * math.pi / q)
    zp = u * cmath.exp(1j * math.pi / q)
    below = 0j
    above = 0j
    for l, (zeta, mult) in enumerate(rep.roots):
        for k in range(1, mult + 1):
            below += rep.b_coeffs[(l, k)] / (zm - zeta) ** k
            above += rep.b_coeffs[(l, k)] / (zp - zeta) ** k
    return (below - above) / (2j * math.pi)


@dataclass(frozen=True)
class RationalResult:
    value: complex
    error_estimate: float


def amplitude_rational(params: ReservoirParams, ra: RationalAlpha, t) -> RationalResult:
    """Amplitude via pole residues plus the branch-cut integral.

    Validation-path accuracy target 1e-3; the cut integral runs in the
    u = xi^(1/q) variable where the integrand is smooth and the large-u tail
    is a clean power law.
    """
    if t < 0.0:
        raise DomainError("t must be nonnegative")
    rep = build_poly_roots(params, ra)
    q = ra.q
    poles = _pole_contribution(rep, ra, t)

    def integrand_re(u):
        val = _cut_integrand(rep, ra, u) * q * u ** (q - 1)
        if t > 0.0:
            val *= math.exp(-min(u ** q * t, 700.0))
        return val.real

    def integrand_im(u):
        val = _cut_integrand(rep, ra, u) * q * u ** (q - 1)
        if t > 0.0:
            val *= math.exp(-min(u ** q * t, 700.0))
        return val.imag

    rmax = max(abs(z) for z, _ in rep.roots)
    if t > 0.0:
        u_cap = (45.0 / t) ** (1.0 / q) + 4.0 * rmax
        tail_bound = 0.0
    else:
        u_cap = max(1e4, 1e3 * rmax)
        # integrand decays like u^-2 once u >> all roots; one-term tail estimate
        tail_val = _cut_integrand(rep, ra, u_cap) * q * u_cap ** (q - 1)
        tail_bound = abs(tail_val) * u_cap
    pts = [rmax, 2.0 * rmax] if u_cap > 2.0 * rmax else None
    re, ere = scipy.integrate.quad(integrand_re, 0.0, u_cap, limit=800, points=pts)
    im, eim = scipy.integrate.quad(integrand_im, 0.0, u_cap, limit=800, points=pts)
    est = math.hypot(ere, eim)
    if est > 1e-4:
        raise QuadratureError(f"cut integral error estimate {est:.2e}", estimate=est)
    if t == 0.0:
        # extend by the fitted power tail instead of truncating
        tail_re, _ = scipy.integrate.quad(
            lambda w: integrand_re(1.0 / w) / w ** 2, 1e-12, 1.0 / u_cap, limit=200)
        tail_im, _ = scipy.integrate.quad(
            lambda w: integrand_im(1.0 / w) / w ** 2, 1e-12, 1.0 / u_cap, limit=200)
        re += tail_re
        im += tail_im
        est = max(est, 0.1 * tail_bound)
    return RationalResult(value=poles + complex(re, im), error_estimate=max(est, 1e-12))
