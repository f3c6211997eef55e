"""Long-time structure: decay laws, the critical atom number, and the hybrid evaluator.

The full amplitude tends to a non-decaying bound-state oscillation; the
inverse-power laws below describe its algebraically relaxing complement (the
branch-cut component). Both pieces are exposed, and the hybrid evaluator
stitches series evaluation below the horizon to the bound-plus-tail
asymptotic model above it.
"""
import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .closed_half import population_half, quartic_roots, rational_r
from .curves import DecayCurve, validate_grid
from .errors import DomainError, GapCoverageError, SeriesHorizonError
from .reservoir import ReservoirParams, bound_state, derived_constants
from .series_gen import SeriesControls, amplitude_series, series_horizon

_DEFAULT_CONTROLS = SeriesControls()


@dataclass(frozen=True)
class AsymptoticLaw:
    """P_relax(t) ~ zeta * t^(-power) beyond the onset scale tau."""

    power: float
    zeta: float
    tau: float
    variant: str

    def __post_init__(self):
        if not 2.0 < self.power < 4.0:
            raise DomainError(f"power must lie in (2,4), got {self.power}")
        if self.zeta <= 0.0 or self.tau <= 0.0:
            raise DomainError("zeta and tau must be positive")


def law_root_based(params: ReservoirParams) -> AsymptoticLaw:
    """Half-exponent law from the quartic roots: tau = max |chi|^-2,
    zeta = |sum R(chi) chi^-2|^2 / (4 pi), power 3."""
    sol = quartic_roots(params)
    chis = np.array(sol.roots)
    tau = float(np.max(1.0 / np.abs(chis) ** 2))
    s = sum(rational_r(chi, params.a) * chi ** -2 for chi in chis)
    zeta = abs(s) ** 2 / (4.0 * math.pi)
    variant = "n-scaled" if params.n_atoms > 1 else "root-based"
    return AsymptoticLaw(power=3.0, zeta=zeta, tau=tau, variant=variant)


def law_constant_based(params: ReservoirParams) -> AsymptoticLaw:
    """General-exponent law from the series constants: power 2(1+alpha).

    zeta is the squared modulus of the leading branch-cut coefficient,
    alpha^2 tan^2(pi alpha/2) a^(4(1-alpha)) / (pi^2 (N A)^2 Gamma(1-alpha)^2);
    at alpha = 1/2 it coincides with the root-based route.
    """
    al, a, c = params.alpha, params.a, params.coupling
    dc = derived_constants(params)
    tau = max(
        1.0,
        abs(3.0 / dc.z0) ** (1.0 / 3.0),
        abs(3.0 * dc.z_alpha / dc.z0) ** (1.0 / al),
        3.0 * abs(dc.z1 / dc.z0),
    )
    zeta = (al * math.tan(math.pi * al / 2.0)) ** 2 * a ** (4.0 * (1.0 - al)) / (
        math.pi ** 2 * c ** 2 * math.gamma(1.0 - al) ** 2
    )
    return AsymptoticLaw(power=2.0 * (1.0 + al), zeta=zeta, tau=tau, variant="constant-based")


def large_ensemble_time_scale(params: ReservoirParams) -> float:
    """Limit of the constant-based onset scale as the atom number grows."""
    al, a = params.alpha, params.a
    half = math.pi * al / 2.0
    return max(
        1.0,
        (3.0 / math.cos(half)) ** (1.0 / al) / a,
        3.0 * math.tan(half) / a,
    )


def critical_n(params: ReservoirParams) -> int:
    """Integer part of the ensemble size where the relaxation amplitude drops to order one.

    Uses the published closed form; beyond it the inverse-power-law component
    is negligible next to unity. May be zero for strong coupling (reported,
    not an error).
    """
    al, a, big_a = params.alpha, params.a, params.big_a
    value = (
        2.0 * al * a ** (3.0 - al)
        / (math.sin(math.pi * al) * math.cos(math.pi * al / 2.0) ** 2)
        / (math.pi * big_a * math.gamma(1.0 - al))
    )
    return int(math.floor(value))


def asymptotic_population(law: AsymptoticLaw, t):
    """zeta * t^(-power); warns below ten onset scales where the next order bites."""
    if t <= 0.0:
        raise DomainError("t must be positive")
    if t < 10.0 * law.tau:
        warnings.warn(
            f"t={t:g} below 10*tau={10.0 * law.tau:g}; the leading asymptote may be off",
            stacklevel=2,
        )
    return law.zeta * t ** (-law.power)


def relaxation_tail_coefficient(params: ReservoirParams) -> complex:
    """Complex amplitude of the leading t^-(1+alpha) term of the relaxing component."""
    dc = derived_constants(params)
    al, a = params.alpha, params.a
    return dc.z_alpha * a * a / (dc.z0 ** 2 * math.gamma(-al))


def asymptotic_amplitude(params: ReservoirParams, t):
    """Bound-state term plus the branch-cut tail through three correction orders.

    C(t) ~ res e^(i Delta t) + T1 t^-(1+a) + T2 t^-(1+2a) + T3 t^-(2+a) + T4 t^-(3+a),
    coefficients from the small-s expansion of the resolvent along the cut.
    """
    if t <= 0.0:
        raise DomainError("t must be positive")
    al, a = params.alpha, params.a
    dc = derived_constants(params)
    bs = bound_state(params)
    sin1 = math.sin(math.pi * al)
    sin2 = math.sin(2.0 * math.pi * al)
    z0, z1, za = dc.z0, dc.z1, dc.z_alpha
    t1 = -a * a * za * sin1 * math.gamma(1.0 + al) / (math.pi * z0 ** 2)
    t2 = a * a * za ** 2 * sin2 * math.gamma(1.0 + 2.0 * al) / (math.pi * z0 ** 3)
    t3 = -a * a * 2.0 * za * z1 * sin1 * math.gamma(2.0 + al) / (math.pi * z0 ** 3)
    t4 = za * sin1 * math.gamma(3.0 + al) / (math.pi * z0 ** 2)
    tail = (
        t1 * t ** (-(1.0 + al))
        + t2 * t ** (-(1.0 + 2.0 * al))
        + t3 * t ** (-(2.0 + al))
        + t4 * t ** (-(3.0 + al))
    )
    return bs.residue * cmath.exp(1j * bs.detuning * t) + tail


def hybrid_population(params: ReservoirParams, grid,
                      controls: SeriesControls = _DEFAULT_CONTROLS,
                      mismatch_limit=0.10) -> DecayCurve:
    """Population on an arbitrary grid: exact/series below the horizon, asymptote above.

    For alpha = 1/2 the closed form covers everything. Otherwise the series
    handles t up to its horizon; the asymptotic model takes over beyond it
    provided the two agree within mismatch_limit across the overlap window
    (recorded in the curve metadata), else the uncovered points raise.
    """
    g = validate_grid(grid)
    if abs(params.alpha - 0.5) <= 1e-12:
        return population_half(params, g)
    horizon = series_horizon(params, controls, t_hint=max(1.0, g[-1] / 16.0))
    mismatch = None
    if g[-1] > horizon:
        window = np.linspace(0.75 * horizon, 0.98 * horizon, 5)
        rel = []
        for tw in window:
            try:
                pa = abs(amplitude_series(params, tw, controls).value) ** 2
            except SeriesHorizonError:
                continue
            pb = abs(asymptotic_amplitude(params, tw)) ** 2
            rel.append(abs(pa - pb) / max(pa, 1e-300))
        mismatch = max(rel) if rel else math.inf
    cs = []
    tags = []
    uncovered = []
    for t in g:
        if t == 0.0:
            cs.append(1.0 + 0j)
            tags.append("series")
            continue
        try:
            cs.append(amplitude_series(params, t, controls).value)
            tags.append("series")
            continue
        except SeriesHorizonError:
            pass
        if mismatch is not None and mismatch <= mismatch_limit:
            cs.append(asymptotic_amplitude(params, t))
            tags.append("asymptotic")
        else:
            uncovered.append(t)
    if uncovered:
        raise GapCoverageError(
            f"{len(uncovered)} points beyond the series horizon t~{horizon:.3g} but the "
            f"asymptote disagrees by {mismatch:.2g} in the overlap (limit {mismatch_limit})"
        )
    return DecayCurve(
        params=params, t=g, c=np.array(cs), method=tags,
        meta={"series_horizon": horizon, "overlap_mismatch": mismatch},
    )
