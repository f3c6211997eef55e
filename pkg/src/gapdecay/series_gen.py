"""General-alpha amplitude as a double series of entire kernel functions.

C(t) = sum_{n,k} (-N)^n za^k z0^(n-k) t^(3n - alpha k) / (k!(n-k)!)
       * (W_{n,k}(z1N t^2) - a^2 t^2 W'_{n,k}(z1N t^2))

with W the unshifted/shifted residue-series kernels. Terms are generated in
outer-index blocks, then globally sorted by the exponent of t and summed with
compensation: the terms are wildly nonmonotone in (n,k) order and cancellation
dominates once t*a exceeds about one.
"""
import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .curves import DecayCurve, validate_grid
from .errors import DomainError, SeriesHorizonError
from .reservoir import ReservoirParams, derived_constants

# past this ratio of largest term to sum, doubles retain no correct digits
_CANCELLATION_LIMIT = 1e12


@dataclass(frozen=True)
class SeriesControls:
    abs_tol: float = 1e-12
    max_outer_terms: int = 400
    horizon_guard: float = 1e-3

    def __post_init__(self):
        if self.abs_tol <= 0.0:
            raise DomainError("abs_tol must be positive")
        if self.max_outer_terms < 10:
            raise DomainError("max_outer_terms must be at least 10")


@dataclass(frozen=True)
class SeriesResult:
    value: complex
    error_estimate: float
    outer_terms: int
    max_term_ratio: float


_DEFAULT_CONTROLS = SeriesControls()


def _sorted_kahan(exps, re, im, count):
    order = np.argsort(exps[:count], kind="stable")
    total = 0j
    comp = 0j
    for idx in order:
        term = complex(re[idx], im[idx])
        y = term - comp
        s = total + y
        comp = (s - total) - y
        total = s
    return total


def amplitude_series(params: ReservoirParams, t, controls: SeriesControls = _DEFAULT_CONTROLS):
    """Series amplitude at one time; returns a SeriesResult.

    Raises SeriesHorizonError (carrying the last reliable partial sum) when a
    guard trips: outer blocks not converged, cancellation past the double
    budget, or |C| > 1 (the expansion leaves its representation domain at
    finite t even in exact arithmetic). Accuracy degrades smoothly on final
    approach to the horizon; at or below half the detected horizon the path
    agrees with the exact route and the integral oracle to near roundoff.
    """
    if t < 0.0:
        raise DomainError("t must be nonnegative")
    if t == 0.0:
        return SeriesResult(1.0 + 0j, 0.0, 1, 1.0)
    dc = derived_constants(params)
    z0_single = dc.z0 / params.n_atoms
    za_single = dc.z_alpha / params.n_atoms
    cap = controls.max_outer_terms * (controls.max_outer_terms + 1) // 2 + 4
    exps = np.empty(cap)
    re = np.empty(cap)
    im = np.empty(cap)
    count, n_outer, last_block, max_term, run_mag, status = _kernels.series_terms(
        params.alpha, complex(z0_single), complex(za_single), complex(dc.z1),
        float(params.n_atoms), params.a, float(t),
        controls.abs_tol, controls.max_outer_terms, exps, re, im,
    )
    value = _sorted_kahan(exps, re, im, count)
    vmag = max(abs(value), 1e-300)
    ratio = max_term / vmag
    if status != 0:
        raise SeriesHorizonError(
            f"outer blocks not converged after {n_outer} terms at t={t:g} "
            f"(last block {last_block:.2e}, sum {vmag:.2e})",
            partial=value, max_term_ratio=ratio, t=t,
        )
    if last_block > controls.horizon_guard * vmag:
        raise SeriesHorizonError(
            f"last retained block is {last_block / vmag:.2e} of the sum at t={t:g}",
            partial=value, max_term_ratio=ratio, t=t,
        )
    if ratio > _CANCELLATION_LIMIT:
        raise SeriesHorizonError(
            f"cancellation ratio {ratio:.2e} beyond double precision at t={t:g}",
            partial=value, max_term_ratio=ratio, t=t,
        )
    if abs(value) > 1.0 + 1e-9:
        # amplitudes are bounded by one; a larger sum means the expansion has
        # left its representation domain even if it converged term-wise
        raise SeriesHorizonError(
            f"|C| = {abs(value):.3e} > 1 at t={t:g}: beyond the representation radius",
            partial=value, max_term_ratio=ratio, t=t,
        )
    err = max(controls.abs_tol, ratio * 2.3e-16 * vmag, last_block)
    return SeriesResult(value, err, n_outer, ratio)


def amplitude_series_z1zero(params: ReservoirParams, t, controls: SeriesControls = _DEFAULT_CONTROLS):
    """Pure power-series specialization valid only at the z1 = 0 amplitude."""
    if t < 0.0:
        raise DomainError("t must be nonnegative")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # the z1~0 significance warning is the point here
        dc = derived_constants(params)
    if abs(dc.z1) > 1e-10 * params.a ** 2:
        raise DomainError(
            f"z1 = {dc.z1:.3e} is not negligible; this path requires the special amplitude"
        )
    if t == 0.0:
        return SeriesResult(1.0 + 0j, 0.0, 1, 1.0)
    alpha, a = params.alpha, params.a
    n_atoms = params.n_atoms
    z0s = dc.z0 / n_atoms
    zas = dc.z_alpha / n_atoms
    logt = math.log(t)
    log_za = math.log(abs(zas))
    step_ph = -zas / abs(zas)
    terms = []
    running = 0j
    max_term = 0.0
    last_block = 0.0
    small = 0
    status = 1
    ph_n = 1.0 + 0j
    n_used = controls.max_outer_terms
    for n in range(controls.max_outer_terms):
        # c_{n,k} = (-N)^n n! za^k z0^(n-k) / (k!(n-k)! Gamma(3n - alpha k + 1))
        lc = n * (math.log(n_atoms) + log_za)
        ph = ph_n
        block = 0j
        blown = False
        for k in range(n, -1, -1):
            ex = 3.0 * n - alpha * k
            mag = lc + ex * logt + math.lgamma(n + 1.0) - math.lgamma(k + 1.0) \
                - math.lgamma(n - k + 1.0) - math.lgamma(ex + 1.0)
            if mag > 600.0:
                blown = True
                break
            tail = 1.0 - a * a * t * t * math.exp(math.lgamma(ex + 1.0) - math.lgamma(ex + 3.0))
            term = math.exp(mag) * ph * tail
            max_term = max(max_term, abs(term))
            terms.append((ex, term))
            block += term
            if k > 0:
                factor = z0s * k / (zas * (n - k + 1.0))
                # magnitude folded into the lgamma bookkeeping; track phase only
                lc += math.log(abs(z0s / zas))
                ph *= (z0s / zas) / abs(z0s / zas)
        running += block
        bmag = abs(block)
        last_block = bmag
        if blown or bmag > 1e250:
            n_used = n + 1
            break
        if n >= 2 and bmag < controls.abs_tol:
            small += 1
            if small >= 3:
                status = 0
                n_used = n + 1
                break
        else:
            small = 0
        ph_n *= step_ph
    terms.sort(key=lambda p: p[0])
    total = 0j
    comp = 0j
    for _, v in terms:
        y = v - comp
        s = total + y
        comp = (s - total) - y
        total = s
    vmag = max(abs(total), 1e-300)
    ratio = max_term / vmag
    if status != 0 or last_block > controls.horizon_guard * vmag or ratio > _CANCELLATION_LIMIT \
            or abs(total) > 1.0 + 1e-9:
        raise SeriesHorizonError(
            f"power series unreliable at t={t:g}", partial=total, max_term_ratio=ratio, t=t
        )
    err = max(controls.abs_tol, ratio * 2.3e-16 * vmag, last_block)
    return SeriesResult(total, err, n_used, ratio)


def series_horizon(params: ReservoirParams, controls: SeriesControls = _DEFAULT_CONTROLS,
                   t_hint=1.0):
    """Largest time (within a factor ~1.06) at which the series still converges."""
    lo = 0.0
    hi = max(t_hint, 1e-6)
    while _series_ok(params, hi, controls):
        lo = hi
        hi *= 2.0
        if hi > 1e9:
            return hi
    while hi / max(lo, 1e-12) > 1.0625:
        mid = math.sqrt(max(lo, hi * 1e-6) * hi) if lo == 0.0 else math.sqrt(lo * hi)
        if _series_ok(params, mid, controls):
            lo = mid
        else:
            hi = mid
    return lo


def _series_ok(params, t, controls):
    try:
        amplitude_series(params, t, controls)
        return True
    except SeriesHorizonError:
        return False


def population_series(params: ReservoirParams, grid, controls: SeriesControls = _DEFAULT_CONTROLS,
                      z1zero=False) -> DecayCurve:
    """Per-point |C|^2; points beyond the series horizon are omitted with a warning."""
    g = validate_grid(grid)
    evaluate = amplitude_series_z1zero if z1zero else amplitude_series
    tag = "series-z1zero" if z1zero else "series"
    ts, cs = [], []
    dropped = []
    for t in g:
        try:
            res = evaluate(params, t, controls)
        except SeriesHorizonError:
            dropped.append(t)
            continue
        ts.append(t)
        cs.append(res.value)
    if dropped:
        warnings.warn(
            f"{len(dropped)} grid points beyond the series horizon were omitted "
            f"(first at t={dropped[0]:g})",
            stacklevel=2,
        )
    if not ts:
        raise SeriesHorizonError(f"entire grid lies beyond the series horizon (t >= {g[0]:g})")
    return DecayCurve(
        params=params, t=np.array(ts), c=np.array(cs), method=[tag] * len(ts),
        meta={"omitted": dropped},
    )
