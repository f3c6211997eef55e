"""Band-gap-edge spectral density family, correlation function, and derived constants.

All rotating-frame dynamics depends on (alpha, N*A, a) only; omega0 is carried
for labeling spectra. The ensemble factor N multiplies the correlation
function, never the single-atom spectral density.
"""
import cmath
import math
import warnings
from dataclasses import dataclass, replace

import numpy as np
import scipy.integrate
import scipy.optimize

from .errors import DomainError, QuadratureError


@dataclass(frozen=True)
class ReservoirParams:
    """Reservoir family parameters.

    alpha: spectral exponent in (0,1); big_a: amplitude A > 0 (units of
    frequency^(3-alpha)); a: width > 0; omega0: transition frequency
    (bookkeeping only); n_atoms: ensemble size (collective coupling N*A).
    """

    alpha: float
    big_a: float = 1.0
    a: float = 1.0
    omega0: float = 0.0
    n_atoms: int = 1

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise DomainError(f"alpha must lie in (0,1), got {self.alpha}")
        if self.big_a <= 0.0:
            raise DomainError(f"amplitude must be positive, got {self.big_a}")
        if self.a <= 0.0:
            raise DomainError(f"width must be positive, got {self.a}")
        if self.omega0 < 0.0:
            raise DomainError(f"omega0 must be nonnegative, got {self.omega0}")
        if int(self.n_atoms) != self.n_atoms or self.n_atoms < 1:
            raise DomainError(f"n_atoms must be a positive integer, got {self.n_atoms}")

    @property
    def coupling(self):
        """Collective amplitude N*A entering every solver."""
        return self.big_a * self.n_atoms


@dataclass(frozen=True)
class DerivedConstants:
    """Complex series constants (ensemble-scaled) and the zero-lag correlation."""

    z0: complex
    z1: complex
    z_alpha: complex
    f0: float


@dataclass(frozen=True)
class SpectralPeak:
    m_alpha: float
    omega_alpha: float


@dataclass(frozen=True)
class BoundState:
    """Discrete atom-photon level pushed below the gap edge.

    detuning: distance below the edge (the amplitude carries a phase factor
    e^{i*detuning*t}); residue: overlap amplitude of the initial state with
    the level; trapped_population: |residue|^2, the t->infinity population.
    """

    detuning: float
    residue: complex

    @property
    def trapped_population(self):
        return abs(self.residue) ** 2


def dicke_scale(params: ReservoirParams, n: int) -> ReservoirParams:
    """Ensemble of n atoms sharing one excitation: replaces n_atoms."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    return replace(params, n_atoms=n)


def spectral_density(params: ReservoirParams, omega):
    """Single-atom J(omega): zero at and below the edge, algebraic above it."""
    om = np.asarray(omega, dtype=float)
    if np.any(om < 0.0):
        raise DomainError("frequency must be nonnegative")
    x = om - params.omega0
    with np.errstate(invalid="ignore"):
        val = np.where(
            x > 0.0,
            2.0 * params.big_a * np.abs(x) ** params.alpha / (params.a ** 2 + x * x),
            0.0,
        )
    if np.isscalar(omega):
        return float(val)
    return val


def spectral_peak(params: ReservoirParams) -> SpectralPeak:
    """Location and height of the absolute maximum of J.

    Setting dJ/dx = 0 gives x* = a sqrt(alpha/(2-alpha)); the height follows
    by substitution.
    """
    al, a, big_a = params.alpha, params.a, params.big_a
    m = big_a * al ** (al / 2.0) * a ** (al - 2.0) * (2.0 - al) ** (1.0 - al / 2.0)
    om = params.omega0 + a * math.sqrt(al / (2.0 - al))
    return SpectralPeak(m_alpha=m, omega_alpha=om)


def zero_lag(params: ReservoirParams) -> float:
    """f(0) = pi*N*A*a^(alpha-1)*sec(pi*alpha/2), the short-time curvature scale."""
    al = params.alpha
    return math.pi * params.coupling * params.a ** (al - 1.0) / math.cos(math.pi * al / 2.0)


def derived_constants(params: ReservoirParams) -> DerivedConstants:
    """Series constants of the resolvent denominator s^3 + z1 s + z_alpha s^alpha + z0.

    All three carry the ensemble factor N. z1 is real; f0 = z1 + a^2.
    """
    al, a, c = params.alpha, params.a, params.coupling
    f0 = zero_lag(params)
    z1 = f0 - a * a
    z0 = 1j * math.pi * c * a ** al / math.sin(math.pi * al / 2.0)
    za = -2j * math.pi * c * cmath.exp(-1j * math.pi * al / 2.0) / math.sin(math.pi * al)
    if abs(z1) < 1e-12 * a * a:
        warnings.warn(
            "z1 within 1e-12*a^2 of the special point z1=0; downstream "
            "subtractions lose significance",
            stacklevel=2,
        )
    return DerivedConstants(z0=z0, z1=complex(z1), z_alpha=za, f0=f0)


def special_amplitude(alpha, a=1.0, n_atoms=1):
    """Amplitude A at which z1 vanishes for the given exponent and width."""
    return a ** (3.0 - alpha) * math.cos(math.pi * alpha / 2.0) / (math.pi * n_atoms)


def correlation_direct(params: ReservoirParams, tau):
    """f(tau) by oscillatory-weight quadrature of the defining integral."""
    al, a, c = params.alpha, params.a, params.coupling

    def dens(x):
        return 2.0 * c * x ** al / (a * a + x * x)

    re, ere = scipy.integrate.quad(dens, 0.0, np.inf, weight="cos", wvar=tau,
                                   epsabs=1e-12, limit=800)
    im, eim = scipy.integrate.quad(dens, 0.0, np.inf, weight="sin", wvar=tau,
                                   epsabs=1e-12, limit=800)
    est = math.hypot(ere, eim)
    if est > 1e-8 * max(1.0, zero_lag(params)):
        raise QuadratureError(f"oscillatory quadrature error {est:.2e}", estimate=est)
    return complex(re, -im)


def correlation_rotated(params: ReservoirParams, tau):
    """f(tau) with the frequency path rotated onto the damped axis.

    The integrand is analytic off the pole at the rotated width; the
    principal-value pair integral plus the explicit pole term replace the
    oscillatory tail by exponential damping (reliable for tau*a >> 1).
    """
    if tau <= 0.0:
        raise DomainError("rotated path requires tau > 0")
    al, a, c = params.alpha, params.a, params.coupling
    pref = -2j * c * cmath.exp(-1j * math.pi * al / 2.0)

    def regular(y):
        return y ** al * math.exp(-y * tau) / (a * a - y * y)

    def cauchy_part(y):
        return y ** al * math.exp(-y * tau) / (y + a)

    # PV over (0, 2a) via the Cauchy weight, then the plain tail
    pv, e1 = scipy.integrate.quad(cauchy_part, 0.0, 2.0 * a, weight="cauchy", wvar=a,
                                  epsabs=1e-12, limit=500)
    tail, e2 = scipy.integrate.quad(regular, 2.0 * a, np.inf, epsabs=1e-13, limit=500)
    est = abs(pref) * math.hypot(e1, e2)
    if est > 1e-8 * max(1.0, zero_lag(params)):
        raise QuadratureError(f"rotated-path quadrature error {est:.2e}", estimate=est)
    pole = math.pi * c * a ** (al - 1.0) * cmath.exp(-1j * math.pi * al / 2.0) * math.exp(-a * tau)
    return pref * (-pv + tail) + pole


def correlation(params: ReservoirParams, tau):
    """Reservoir correlation f(tau) = N * integral J(x) e^{-i x tau} dx.

    Dispatches between the direct oscillatory quadrature (short lags) and the
    rotated-path evaluation (long lags); both agree to ~1e-9 absolute.
    """
    if tau < 0.0:
        raise DomainError("tau must be nonnegative")
    if tau == 0.0:
        return complex(zero_lag(params))
    if tau * params.a <= 2.0:
        return correlation_direct(params, tau)
    return correlation_rotated(params, tau)


def relaxation_modes(params: ReservoirParams, t_min, tol=1e-10, per_octave=12):
    """Damped-mode decomposition f(tau) ~ sum_j v_j e^{-y_j tau} for tau > 0.

    Gauss-Legendre panels discretize the rotated-path weight; the pole at
    y = a enters as an exact node plus a symmetric principal-value pair
    around it. t_min sets how far the large-rate tail must reach; tol is the
    target absolute accuracy relative to f(0).
    """
    al, a, c = params.alpha, params.a, params.coupling
    f0 = zero_lag(params)
    pref = -2j * c * cmath.exp(-1j * math.pi * al / 2.0)
    # small-rate cutoff: missing mass below y_min stays under tol*f0 for tau ~ 1/y_min
    y_min = min(1e-4 * a, (tol * f0 * a * a * (1.0 + al) / (4.0 * c)) ** (1.0 / (1.0 + al)))
    # large-rate cutoff: integrated tail of the weight under tol*f0*t_min
    y_max = (2.0 * c / ((2.0 - al) * tol * f0 * max(t_min, 1e-16))) ** (1.0 / (2.0 - al))
    y_max = min(max(y_max, 1e3 * a, 10.0 / t_min), 1e18)
    xg, wg = np.polynomial.legendre.leggauss(per_octave)
    rates = []
    amps = []

    def add_panels(lo, hi):
        k = max(1, int(np.ceil(np.log2(hi / lo))))
        edges = np.geomspace(lo, hi, k + 1)
        for left, right in zip(edges[:-1], edges[1:]):
            mid, half = 0.5 * (left + right), 0.5 * (right - left)
            ys = mid + half * xg
            rates.extend(ys)
            amps.extend(pref * wg * half * ys ** al / (a * a - ys * ys))

    add_panels(y_min, 0.5 * a)
    # symmetric pair nodes around the pole: the 1/(a-y) singularity cancels pairwise
    mid, half = 0.25 * a, 0.25 * a
    for s, w in zip(mid + half * xg, wg * half):
        for y in (a - s, a + s):
            rates.append(y)
            amps.append(pref * w * y ** al / (a * a - y * y))
    add_panels(1.5 * a, y_max)
    rates.append(a)
    amps.append(math.pi * c * a ** (al - 1.0) * cmath.exp(-1j * math.pi * al / 2.0))
    return np.array(rates), np.array(amps)


def bound_state(params: ReservoirParams) -> BoundState:
    """Discrete level below the edge: detuning solves D = integral J_N(x)/(x+D) dx.

    The gap guarantees exactly one solution for every parameter set of this
    family. The residue is the (real, positive) weight of the level in the
    initial excited state.
    """
    al, a, c = params.alpha, params.a, params.coupling
    dc = derived_constants(params)
    c1 = 2.0 * math.pi * c / math.sin(math.pi * al)
    c2 = math.pi * c * a ** al / math.sin(math.pi * al / 2.0)
    z1 = dc.z1.real

    def h(d):
        return d ** 3 - z1 * d + c1 * d ** al - c2

    hi = max(a, c2 ** (1.0 / 3.0))
    while h(hi) < 0.0:
        hi *= 2.0
    delta = scipy.optimize.brentq(h, 0.0, hi, xtol=1e-300, rtol=1e-15)
    s = 1j * delta
    dpoly = 3.0 * s * s + dc.z1 + al * dc.z_alpha * s ** (al - 1.0)
    residue = (s * s - a * a) / dpoly
    return BoundState(detuning=delta, residue=residue)
