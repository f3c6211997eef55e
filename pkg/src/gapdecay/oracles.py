"""Two independent reference solvers for the convoluted amplitude equation.

volterra_solve integrates C'(t) = -(f * C)(t) after one integration by parts,
C(t) = 1 - int_0^t F(t-s) C(s) ds with F the antiderivative of f, by product
integration: the kernel is integrated exactly over every cell against a
piecewise-polynomial history. The exact cell moments come from the damped-mode
decomposition of f, so the algebraic cusp of f at zero lag costs no accuracy.

mode_evolve integrates the underlying atom + modes system with an exactly
norm-preserving midpoint rotation in the atom/bright-mode plane.
"""
import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.integrate

from . import _kernels
from .curves import DecayCurve
from .errors import DomainError, GridResolutionError, InstabilityError
from .reservoir import ReservoirParams, relaxation_modes, spectral_density, zero_lag


@dataclass(frozen=True)
class VolterraConfig:
    dt: float
    t_max: float
    scheme_order: int = 2

    def __post_init__(self):
        if self.dt <= 0.0 or self.t_max <= 0.0 or self.dt > self.t_max:
            raise DomainError("need 0 < dt <= t_max")
        if self.scheme_order not in (1, 2):
            raise DomainError("scheme_order must be 1 or 2")


@dataclass(frozen=True)
class ModeGrid:
    """Discrete reservoir modes: detunings from the edge and couplings g_k >= 0."""

    frequencies: np.ndarray
    couplings: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "frequencies", np.asarray(self.frequencies, dtype=float))
        object.__setattr__(self, "couplings", np.asarray(self.couplings, dtype=float))
        if self.frequencies.shape != self.couplings.shape:
            raise DomainError("frequencies and couplings must have equal length")
        if np.any(self.couplings < 0.0):
            raise DomainError("couplings must be nonnegative")


def _exp_aux(rates, dt):
    """Stable per-node cell integrals: d = e^(-y dt), A0 = int_0^dt e^(-ys) ds,
    A1 = int_0^dt s e^(-ys) ds, and the power-series constants T0, T1, TR."""
    y = np.asarray(rates)
    x = np.minimum(y * dt, 700.0)
    d = np.exp(-x)
    small = x < 0.1
    with np.errstate(divide="ignore", invalid="ignore"):
        a0 = np.where(y > 0.0, -np.expm1(-x) / np.where(y > 0.0, y, 1.0), dt)
        a1 = np.where(x >= 0.1, (a0 - dt * d) / np.where(y > 0.0, y, 1.0), 0.0)
        t1 = np.where(x >= 0.1, (dt / 2.0 - a1 / dt) / np.where(y > 0.0, y, 1.0), 0.0)
        t0 = np.where(x >= 0.1, (dt / 2.0 - a0 + a1 / dt) / np.where(y > 0.0, y, 1.0), 0.0)
        tr = np.where(x >= 0.1, (dt - a0) / np.where(y > 0.0, y, 1.0), 0.0)
    xs = x[small]
    a1[small] = dt * dt * (0.5 - xs / 3 + xs**2 / 8 - xs**3 / 30 + xs**4 / 144 - xs**5 / 840)
    t1[small] = dt * dt * (1 / 3 - xs / 8 + xs**2 / 30 - xs**3 / 144 + xs**4 / 840 - xs**5 / 5760)
    t0[small] = dt * dt * (1 / 6 - xs / 24 + xs**2 / 120 - xs**3 / 720 + xs**4 / 5040 - xs**5 / 40320)
    tr[small] = dt * dt * (0.5 - xs / 6 + xs**2 / 24 - xs**3 / 120 + xs**4 / 720 - xs**5 / 5040)
    return d, a0, a1, t0, t1, tr


def _volterra_weights(rates, amps, dt, n, order):
    """Cell weights of the integrated kernel against the interpolated history.

    Order 2 returns (W0, W1) for the linear hat pair; order 1 returns the
    rectangle moments. Uses the recursion G_{m+1} = G_m + E_m A0 for
    G_m = (1 - e^(-y u_m))/y, exact for every rate including zero.
    """
    d, a0, a1, t0, t1, tr = _exp_aux(rates, dt)
    v = np.asarray(amps)
    e = np.ones(len(v))
    g = np.zeros(len(v))
    if order == 2:
        p1 = v * t1
        q1 = v * a1 / dt
        p0 = v * t0
        q0 = v * (a0 - a1 / dt)
        w0 = np.empty(n, dtype=complex)
        w1 = np.empty(n, dtype=complex)
        s1 = p1.sum()
        s0 = p0.sum()
        for m in range(n):
            w1[m] = s1 + np.dot(q1, g)
            w0[m] = s0 + np.dot(q0, g)
            g += e * a0
            e *= d
        return w0, w1
    pr = v * tr
    qr = v * a0
    m0 = np.empty(n, dtype=complex)
    sr = pr.sum()
    for m in range(n):
        m0[m] = sr + np.dot(qr, g)
        g += e * a0
        e *= d
    return m0


def volterra_solve(params: ReservoirParams, config: VolterraConfig, modes=None) -> DecayCurve:
    """Product-integration solution of the memory-kernel amplitude equation.

    modes optionally overrides the kernel with an explicit damped-mode pair
    (rates, amplitudes), the internal hook used by fixture kernels in tests.
    """
    n = int(round(config.t_max / config.dt))
    if n < 1:
        raise DomainError("t_max/dt must round to at least one step")
    dt = config.t_max / n
    if modes is None:
        f0 = zero_lag(params)
        if dt * math.sqrt(f0) > 0.1:
            warnings.warn(
                f"dt*sqrt(f0) = {dt * math.sqrt(f0):.3g} > 0.1; step may be too coarse",
                stacklevel=2,
            )
        rates, amps = relaxation_modes(params, t_min=dt)
    else:
        rates, amps = modes
        rates = np.asarray(rates, dtype=float)
        amps = np.asarray(amps, dtype=complex)
    if config.scheme_order == 2:
        w0, w1 = _volterra_weights(rates, amps, dt, n, 2)
        c = _kernels.volterra_recurse(w0, w1)
    else:
        m0 = _volterra_weights(rates, amps, dt, n, 1)
        c = _kernels.volterra_recurse_rect(m0)
    cmax = float(np.max(np.abs(c)))
    if cmax > 1.0 + 1e-3:
        raise InstabilityError(f"|C| reached {cmax:.6f}; the scheme destabilized")
    t = np.linspace(0.0, config.t_max, n + 1)
    return DecayCurve(
        params=params, t=t, c=c, method=["volterra"] * (n + 1),
        meta={"dt": dt, "scheme_order": config.scheme_order, "kernel_modes": len(rates)},
    )


def mode_discretize(params: ReservoirParams, count, omega_cap) -> ModeGrid:
    """Composite mode grid: geometric refinement at the edge, linear far field.

    Couplings carry the exact cell mass of N*J (10-point Gauss per cell) and
    sit at the mass centroid, so the total weight matches the integral and
    the edge exponent is not aliased.
    """
    if count < 10:
        raise DomainError("need at least 10 modes")
    a = params.a
    if omega_cap <= a:
        raise DomainError("omega_cap must exceed the width a")
    n_geo = count // 2
    edges = np.concatenate([
        np.geomspace(1e-7 * a, a, n_geo + 1),
        np.linspace(a, omega_cap, count - n_geo + 1)[1:],
    ])
    xg, wg = np.polynomial.legendre.leggauss(10)
    left, right = edges[:-1], edges[1:]
    mid = 0.5 * (left + right)
    half = 0.5 * (right - left)
    xs = mid[:, None] + half[:, None] * xg[None, :]
    dens = params.n_atoms * spectral_density(params, params.omega0 + xs.ravel()).reshape(xs.shape)
    masses = (dens * wg[None, :]).sum(axis=1) * half
    first = ((dens * xs) * wg[None, :]).sum(axis=1) * half
    keep = masses > 0.0
    freqs = first[keep] / masses[keep]
    f0 = zero_lag(params)
    tail, _ = scipy.integrate.quad(
        lambda x: params.n_atoms * spectral_density(params, params.omega0 + x),
        omega_cap, np.inf, limit=200,
    )
    if tail > 1e-4 * f0:
        warnings.warn(
            f"truncated tail mass {tail:.3e} exceeds 1e-4*f0; raise omega_cap",
            stacklevel=2,
        )
    return ModeGrid(frequencies=freqs, couplings=np.sqrt(masses[keep]))


def mode_tail_bound(params: ReservoirParams, omega_cap, horizon):
    """Crude bound on the amplitude error caused by dropping modes beyond the cap."""
    val, _ = scipy.integrate.quad(
        lambda x: params.n_atoms * spectral_density(params, params.omega0 + x) / x,
        omega_cap, np.inf, limit=200,
    )
    return 4.0 * val * max(1.0, horizon)


def mode_evolve(grid: ModeGrid, t_max, dt, sample_every=1, params=None) -> DecayCurve:
    """Unitary evolution of the atom + discrete modes in the single-excitation sector.

    One midpoint rotation in the plane spanned by the atom and the bright
    mode per step: exactly norm conserving for any dt that resolves the
    fastest detuning (dt * max|freq| <= 0.1 enforced).
    """
    freqs = grid.frequencies
    g = grid.couplings
    if len(g) == 0:
        raise DomainError("empty mode grid")
    fmax = float(np.max(np.abs(freqs)))
    if dt * fmax > 0.1 + 1e-12:
        raise GridResolutionError(
            f"dt*max|detuning| = {dt * fmax:.3g} > 0.1; refine the step"
        )
    theta = math.sqrt(float(np.dot(g, g)))
    n = int(round(t_max / dt))
    dt = t_max / n
    c = 1.0 + 0j
    lam = np.zeros(len(g), dtype=complex)
    ts = [0.0]
    cs = [c]
    defect = 0.0
    cos_v, sin_v = math.cos(theta * dt), math.sin(theta * dt)
    for step in range(n):
        tm = (step + 0.5) * dt
        u = g * np.exp(1j * freqs * tm)
        bright = np.vdot(u, lam) / theta
        c_new = cos_v * c - sin_v * bright
        lam += (u / theta) * (sin_v * c + (cos_v - 1.0) * bright)
        c = c_new
        norm = abs(c) ** 2 + float(np.vdot(lam, lam).real)
        defect = max(defect, abs(1.0 - norm))
        if (step + 1) % sample_every == 0 or step == n - 1:
            ts.append((step + 1) * dt)
            cs.append(c)
    if defect > 1e-8:
        raise InstabilityError(f"unitarity defect {defect:.2e} above 1e-8")
    return DecayCurve(
        params=params, t=np.array(ts), c=np.array(cs), method=["modes"] * len(ts),
        meta={"unitarity_defect": defect, "n_modes": len(g), "dt": dt},
    )
