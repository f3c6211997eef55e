"""Cross-method validation harness behind the `validate` CLI command.

Every case checks a quantity two independent ways and records the worst
deviation against its tolerance. Expected values frozen here are the
numerically confirmed ones (see README for the two published reference
values that differ from them).
"""
import math
import time
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.integrate

from . import asymptotics, closed_half, oracles, rational_rep, reservoir, series_gen, specfun
from .reservoir import ReservoirParams


@dataclass(frozen=True)
class ValidationCase:
    name: str
    max_abs_deviation: float
    tolerance: float
    passed: bool


@dataclass(frozen=True)
class ValidationReport:
    cases: tuple
    elapsed: float

    @property
    def overall_passed(self):
        return all(c.passed for c in self.cases)


def _case(name, deviation, tol):
    return ValidationCase(name, float(deviation), float(tol), bool(deviation <= tol))


def _short_time_coefficient(t, one_minus_p, alpha):
    basis = np.stack([t ** 2, t ** (3.0 - alpha), t ** 3], axis=1)
    coef, *_ = np.linalg.lstsq(basis, one_minus_p, rcond=None)
    return coef[0]


def _loglog_fit(t, p):
    slope, intercept = np.polyfit(np.log(t), np.log(p), 1)
    return slope, math.exp(intercept)


def run_validation(progress=None):
    t_start = time.perf_counter()
    cases = []
    # the harness deliberately visits the z1 = 0 special point and a
    # truncated mode cap; those advisory warnings are part of the plan
    warnings.filterwarnings("ignore", message="z1 within")
    warnings.filterwarnings("ignore", message="truncated tail mass")

    def emit(case):
        cases.append(case)
        if progress is not None:
            status = "pass" if case.passed else "FAIL"
            progress(f"[{status}] {case.name}: deviation {case.max_abs_deviation:.3e} "
                     f"(tolerance {case.tolerance:.3e})")

    # critical ensemble size for the reference parameter set
    p_ref = ReservoirParams(alpha=0.5, big_a=1e-4, a=1.0)
    emit(_case("critical-number", abs(asymptotics.critical_n(p_ref) - 3591), 0.0))

    # ensemble onset scales
    expected = {3: 789.0, 12: 206.9, 60: 46.1}
    dev = 0.0
    for n, want in expected.items():
        law = asymptotics.law_root_based(reservoir.dicke_scale(p_ref, n))
        dev = max(dev, abs(law.tau - want) / want)
    emit(_case("ensemble-timescales", dev, 5e-3))

    # single-atom onset scales (frozen true values)
    frozen = {
        1.0: 0.8402195357902755,
        100.0: 0.055942638029305825,
        0.5 ** 2.5: 2.802991929928023,
        1e-3 ** 2.5: 7121398.397178526,
    }
    dev = 0.0
    for big_a, want in frozen.items():
        law = asymptotics.law_root_based(ReservoirParams(alpha=0.5, big_a=big_a))
        dev = max(dev, abs(law.tau - want) / want)
    emit(_case("single-atom-timescales", dev, 1e-6))

    # closed form against the product-integration oracle and the series
    dev_v = 0.0
    dev_s = 0.0
    for big_a in (1e-4, 1.0, 100.0):
        params = ReservoirParams(alpha=0.5, big_a=big_a)
        tau = asymptotics.law_root_based(params).tau
        t_max = min(2.0, 2.0 * tau)
        curve = oracles.volterra_solve(params, oracles.VolterraConfig(dt=t_max / 5000, t_max=t_max))
        closed = closed_half.population_half(params, curve.t[1:])
        dev_v = max(dev_v, float(np.max(np.abs(closed.p - curve.p[1:]))))
        for t in np.linspace(0.05 * t_max, t_max, 8):
            cs = series_gen.amplitude_series(params, t).value
            cc = closed_half.amplitude_half(params, t)
            dev_s = max(dev_s, abs(abs(cs) ** 2 - abs(cc) ** 2))
    emit(_case("closed-vs-volterra", dev_v, 1e-5))
    emit(_case("closed-vs-series", dev_s, 1e-6))

    # general exponents against the oracle
    dev = 0.0
    for alpha in (0.25, 0.75):
        params = ReservoirParams(alpha=alpha, big_a=1.0)
        curve = oracles.volterra_solve(params, oracles.VolterraConfig(dt=1.0 / 4000, t_max=1.0))
        idx = range(40, 4001, 40)
        for i in idx:
            cs = series_gen.amplitude_series(params, curve.t[i]).value
            dev = max(dev, abs(abs(cs) ** 2 - curve.p[i]))
    emit(_case("series-vs-volterra-generic", dev, 1e-5))

    # power-series specialization at the z1 = 0 amplitude
    alpha = 0.75
    params = ReservoirParams(alpha=alpha, big_a=reservoir.special_amplitude(alpha))
    dev = 0.0
    for t in (0.25, 1.0, 2.0):
        va = series_gen.amplitude_series(params, t).value
        vb = series_gen.amplitude_series_z1zero(params, t).value
        dev = max(dev, abs(va - vb))
    emit(_case("z1zero-specialization", dev, 1e-10))

    # short-time curvature equals the zero-lag correlation
    dev = 0.0
    for alpha in (0.25, 0.5, 0.75):
        params = ReservoirParams(alpha=alpha, big_a=1.0)
        f0 = reservoir.zero_lag(params)
        ts = np.geomspace(3e-5, 1e-3, 25)
        if alpha == 0.5:
            pops = closed_half.population_half(params, ts).p
        else:
            pops = np.array([abs(series_gen.amplitude_series(params, t).value) ** 2 for t in ts])
        c2 = _short_time_coefficient(ts, 1.0 - pops, alpha)
        dev = max(dev, abs(c2 - f0) / f0)
    curve = oracles.volterra_solve(
        ReservoirParams(alpha=0.5, big_a=1.0), oracles.VolterraConfig(dt=1e-3 / 3000, t_max=1e-3))
    sel = curve.t >= 3e-5
    c2 = _short_time_coefficient(curve.t[sel], 1.0 - curve.p[sel], 0.5)
    dev = max(dev, abs(c2 - reservoir.zero_lag(curve.params)) / reservoir.zero_lag(curve.params))
    emit(_case("short-time-curvature", dev, 1e-4))

    # the two decay-factor routes coincide at the half exponent
    dev = 0.0
    for big_a in (1e-4, 1e-2, 1.0, 1e2):
        params = ReservoirParams(alpha=0.5, big_a=big_a)
        z_root = asymptotics.law_root_based(params).zeta
        z_const = asymptotics.law_constant_based(params).zeta
        dev = max(dev, abs(z_root - z_const) / z_const)
    emit(_case("decay-factor-routes", dev, 1e-6))

    # relaxation component follows the cubic inverse power law
    params = ReservoirParams(alpha=0.5, big_a=1.0)
    law = asymptotics.law_root_based(params)
    ts = np.geomspace(1e2 * law.tau, 1e4 * law.tau, 25)
    prel = closed_half.population_half(params, ts, relaxation_component=True).p
    slope, inter = _loglog_fit(ts, prel)
    dev_slope = abs(slope + 3.0)
    dev_inter = abs(inter - law.zeta) / law.zeta
    emit(_case("relaxation-slope", dev_slope, 0.05))
    emit(_case("relaxation-intercept", dev_inter, 0.05))

    # trapping level: modulus of the late amplitude matches the bound-state residue
    bs = reservoir.bound_state(params)
    dev = abs(abs(closed_half.amplitude_half(params, 30.0)) - abs(bs.residue))
    emit(_case("bound-state-trapping", dev, 1e-2))

    # unitary mode oracle
    grid = oracles.mode_discretize(params, count=3000, omega_cap=200.0)
    curve = oracles.mode_evolve(grid, t_max=2.0, dt=4e-4, sample_every=50, params=params)
    emit(_case("mode-unitarity", curve.meta["unitarity_defect"], 1e-8))
    emit(_case("amplitude-bound", max(0.0, float(np.max(np.abs(curve.c))) - 1.0), 1e-9))

    # kernel identities
    zg = np.linspace(0.0, 25.0, 120)
    wk = specfun.WrightKernelParams(n=0, k=0, alpha=0.5)
    dev = max(abs(specfun.wright_kernel(wk, z) - math.cos(math.sqrt(z))) for z in zg)
    emit(_case("kernel-cosine-identity", dev, 1e-12))

    dev = 0.0
    for z in np.linspace(1.0, 30.0, 30):
        direct, _ = scipy.integrate.quad(lambda s: s ** -0.5 * math.exp(-s), z, np.inf,
                                         epsabs=1e-300, epsrel=1e-13, limit=300)
        val = specfun.scaled_upper_gamma_half(z) * math.exp(-z)
        dev = max(dev, abs(val - direct) / direct)
    emit(_case("scaled-gamma-quadrature", dev, 1e-10))

    # rational-exponent representation against the closed form
    params = ReservoirParams(alpha=0.5, big_a=1.0)
    ra = rational_rep.RationalAlpha(p=1, q=2)
    rep = rational_rep.build_poly_roots(params, ra)
    bsum = abs(sum(rep.b_coeffs[(l, 1)] for l, (z, m) in enumerate(rep.roots) if m == 1))
    emit(_case("rational-residue-sum", bsum, 1e-8))
    dev = abs(rational_rep.amplitude_rational(params, ra, 0.0).value - 1.0)
    for t in (0.5, 1.0, 2.0):
        va = rational_rep.amplitude_rational(params, ra, t).value
        vb = closed_half.amplitude_half(params, t)
        dev = max(dev, abs(va - vb))
    emit(_case("rational-representation", dev, 1e-3))

    return ValidationReport(cases=tuple(cases), elapsed=time.perf_counter() - t_start)
