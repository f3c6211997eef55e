"""Exact alpha = 1/2 solution: quartic roots, weight function R, amplitude and population.

The amplitude inverts to C(t) = sum_l chi_l R(chi_l) e^{chi_l^2 t} erfc(-chi_l sqrt(t)),
a sum over the four roots of q0 + i a z^2 + (1+i) sqrt(a) z^3 + z^4 with
q0 = pi sqrt(2/a) N A. One root always lies on arg z = pi/4; its reflected
kernel carries the non-decaying bound-state contribution, the other three
relax. erfc here is the entire scaled kernel, so no branch bookkeeping leaks
into the evaluation.
"""
import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels, specfun
from .curves import DecayCurve, validate_grid
from .errors import DegenerateRootsError, DomainError, PoleError, RootQualityError
from .reservoir import ReservoirParams, bound_state

SQRT_PI = math.sqrt(math.pi)
_HALF_ALPHA_TOL = 1e-12


@dataclass(frozen=True)
class QuarticSolution:
    """Roots chi_1..chi_4 with the closed-form intermediates and residual diagnostics."""

    roots: tuple
    gamma_i: complex
    phi_i: complex
    delta_i: complex
    max_residual: float
    closed_form_ok: bool


def _require_half(params: ReservoirParams):
    if abs(params.alpha - 0.5) > _HALF_ALPHA_TOL:
        raise DomainError(f"closed form requires alpha = 1/2, got alpha={params.alpha}")


def _poly_coeffs(a, coupling):
    q0 = math.pi * math.sqrt(2.0 / a) * coupling
    return np.array([1.0, (1 + 1j) * math.sqrt(a), 1j * a, 0.0, q0], dtype=complex)


def _poly_eval(coeffs, z):
    return np.polyval(coeffs, z)


def _closed_form_roots(a, coupling):
    """Resolvent-based closed forms, principal branches throughout."""
    q0 = math.pi * math.sqrt(2.0 / a) * coupling
    disc = complex(
        26.0 * math.pi ** 2 * a * coupling ** 2
        - 2.0 ** 1.5 * math.pi * a ** 3.5 * coupling
        - 128.0 * math.pi ** 3 * math.sqrt(2.0 / a ** 3) * coupling ** 3
    )
    delta = cmath.sqrt(disc)
    phi = (3.0 ** 1.5 * delta - 1j * a ** 3 - 9j * math.pi * math.sqrt(2.0 * a) * coupling) ** (1.0 / 3.0)
    gamma = cmath.sqrt(phi / 3.0 - 1j * a / 6.0 + (12.0 * q0 - a * a) / (3.0 * phi))
    base = -(1 + 1j) * math.sqrt(a) / 4.0
    shared = (a * a - 12.0 * q0) / (3.0 * phi) - 1j * a / 3.0 - phi / 3.0
    s12 = cmath.sqrt((1j - 1) * a ** 1.5 / (2.0 * gamma) + shared)
    s34 = cmath.sqrt((1 - 1j) * a ** 1.5 / (2.0 * gamma) + shared)
    roots = (
        base + gamma / 2.0 + s12 / 2.0,
        base + gamma / 2.0 - s12 / 2.0,
        base - gamma / 2.0 + s34 / 2.0,
        base - gamma / 2.0 - s34 / 2.0,
    )
    return roots, gamma, phi, delta


def _numeric_roots(coeffs):
    roots = np.roots(coeffs)
    dcoeffs = np.polyder(coeffs)
    for _ in range(3):  # Newton polish from the companion-matrix seeds
        roots = roots - np.polyval(coeffs, roots) / np.polyval(dcoeffs, roots)
    return roots


def quartic_roots(params: ReservoirParams) -> QuarticSolution:
    """Four distinct roots, closed forms first, numeric companion-matrix fallback.

    The closed forms are accepted only when their residuals pass; the fallback
    result is reordered to best match them so either path is deterministic.
    """
    _require_half(params)
    a, coupling = params.a, params.coupling
    coeffs = _poly_coeffs(a, coupling)
    roots, gamma, phi, delta = _closed_form_roots(a, coupling)
    roots = np.array(roots)
    scale = max(1.0, a * a * float(np.max(np.abs(roots)) ** 2))
    resid = float(np.max(np.abs(_poly_eval(coeffs, roots))))
    closed_ok = resid <= 1e-10 * scale
    if not closed_ok:
        numeric = _numeric_roots(coeffs)
        order = []
        taken = set()
        for r in roots:  # greedy match to keep the closed-form labeling
            j = min((k for k in range(4) if k not in taken), key=lambda k: abs(numeric[k] - r))
            taken.add(j)
            order.append(j)
        roots = numeric[order]
        scale = max(1.0, a * a * float(np.max(np.abs(roots)) ** 2))
        resid = float(np.max(np.abs(_poly_eval(coeffs, roots))))
        if resid > 1e-10 * scale:
            raise RootQualityError(
                f"residual {resid:.3e} above bound {1e-10 * scale:.3e} on both solver paths"
            )
    rmax = float(np.max(np.abs(roots)))
    for i in range(4):
        for j in range(i + 1, 4):
            if abs(roots[i] - roots[j]) < 1e-9 * rmax:
                raise DegenerateRootsError(
                    f"roots {roots[i]:.6g} and {roots[j]:.6g} coincide within 1e-9 relative"
                )
    order = np.lexsort((roots.imag, roots.real))
    roots = roots[order]
    return QuarticSolution(
        roots=tuple(complex(r) for r in roots),
        gamma_i=complex(gamma),
        phi_i=complex(phi),
        delta_i=complex(delta),
        max_residual=resid,
        closed_form_ok=closed_ok,
    )


def rational_r(z, a):
    """Root weight R(z) = (1-i)(sqrt(a)+z)(i sqrt(a)+z) / (2z((1+i)a + 3 sqrt(a) z + 2(1-i)z^2))."""
    z = complex(z)
    num = (1 - 1j) * (math.sqrt(a) + z) * (1j * math.sqrt(a) + z)
    den = 2.0 * z * ((1 + 1j) * a + 3.0 * math.sqrt(a) * z + 2.0 * (1 - 1j) * z * z)
    if abs(den) == 0.0 or abs(den) < 1e-280 * max(1.0, abs(num)):
        raise PoleError(f"weight function pole at z={z}")
    return num / den


def _root_weights(params):
    sol = quartic_roots(params)
    chis = np.array(sol.roots)
    weights = np.array([chi * rational_r(chi, params.a) for chi in chis])
    return sol, chis, weights


def leading_term_cancellation(params: ReservoirParams):
    """|sum_l R(chi_l)|; vanishes identically, which kills the t^(-1/2) tail term."""
    _, chis, _ = _root_weights(params)
    return abs(sum(rational_r(chi, params.a) for chi in chis))


def amplitude_half(params: ReservoirParams, t):
    """Exact amplitude at one time, valid for arbitrarily large t."""
    if t < 0.0:
        raise DomainError("t must be nonnegative")
    _, chis, weights = _root_weights(params)
    return _amplitude_from_roots(chis, weights, t)


def _amplitude_from_roots(chis, weights, t):
    if t == 0.0:
        return 1.0 + 0j  # sum chi R(chi) = 1 exactly
    st = math.sqrt(t)
    total = 0j
    for chi, w in zip(chis, weights):
        total += w * specfun.scaled_erfc_kernel(-chi * st)
    return total / SQRT_PI


def population_half(params: ReservoirParams, grid, relaxation_component=False) -> DecayCurve:
    """Population |C|^2 on a sorted grid.

    relaxation_component=True subtracts the bound-state term and returns the
    algebraically decaying part that obeys the inverse-power-law asymptotics.
    """
    _require_half(params)
    g = validate_grid(grid)
    _, chis, weights = _root_weights(params)
    vals = np.empty(len(g), dtype=complex)
    # group kernel evaluations per root so the compiled grid path does the work
    st = np.sqrt(g)
    acc = np.zeros(len(g), dtype=complex)
    for chi, w in zip(chis, weights):
        wargs = -chi * st
        direct = (wargs.real > 0.0) | ((wargs.real == 0.0) & (wargs.imag >= 0.0))
        zz = wargs * wargs
        kern = _kernels.scaled_gamma_half_many(zz)
        refl = 2.0 * SQRT_PI * np.exp(zz[~direct]) - kern[~direct]
        kern[~direct] = refl
        acc += w * kern
    vals = acc / SQRT_PI
    vals[g == 0.0] = 1.0  # initial condition holds exactly
    if relaxation_component:
        bs = bound_state(params)
        vals = vals - bs.residue * np.exp(1j * bs.detuning * g)
    return DecayCurve(
        params=params,
        t=g,
        c=vals,
        method=["closed-half"] * len(g),
        meta={"component": "relaxation" if relaxation_component else "full"},
    )


def amplitude_half_relaxation(params: ReservoirParams, t):
    """Amplitude minus the bound-state term: the part that actually decays."""
    bs = bound_state(params)
    return amplitude_half(params, t) - bs.residue * cmath.exp(1j * bs.detuning * t)
