"""Benchmark the compiled kernels against the pure-python fallback.

Usage: python benchmarks/bench_kernels.py
Both backends implement identical algorithms; this script checks they agree
and reports the speedup of the compiled path on the three hot loops.
"""
import time
import warnings

import numpy as np

warnings.filterwarnings("ignore", message="z1 within")

from gapdecay._kernels import _pure  # noqa: E402

try:
    from gapdecay import _fast
except ImportError:
    _fast = None

from gapdecay.oracles import _volterra_weights  # noqa: E402
from gapdecay.reservoir import ReservoirParams, derived_constants, relaxation_modes  # noqa: E402


def _time(fn, repeat=3):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_series(backend):
    params = ReservoirParams(alpha=0.3, big_a=1.0, a=1.0)
    dc = derived_constants(params)
    cap = 400 * 401 // 2 + 4
    exps = np.empty(cap)
    re = np.empty(cap)
    im = np.empty(cap)
    ts = np.linspace(0.01, 3.0, 150)

    def run():
        acc = 0.0
        for t in ts:
            out = backend.series_terms(
                0.3, complex(dc.z0), complex(dc.z_alpha), complex(dc.z1),
                1.0, 1.0, float(t), 1e-12, 400, exps, re, im)
            acc += out[4]
        return acc

    return _time(run)


def bench_volterra(backend, w0, w1):
    return _time(lambda: backend.volterra_recurse(w0, w1), repeat=2)


def bench_gamma(backend, zs):
    return _time(lambda: backend.scaled_gamma_half_many(zs))


def main():
    if _fast is None:
        print("compiled extension not available; showing the pure path only")
    rows = []

    t_pure, v_pure = bench_series(_pure)
    if _fast is not None:
        t_fast, v_fast = bench_series(_fast)
        assert abs(v_pure - v_fast) <= 1e-9 * max(abs(v_pure), 1.0)
        rows.append(("series evaluation (150 points)", t_pure, t_fast))
    else:
        rows.append(("series evaluation (150 points)", t_pure, None))

    params = ReservoirParams(alpha=0.5, big_a=1.0, a=1.0)
    n = 20000
    dt = 2.0 / n
    rates, amps = relaxation_modes(params, t_min=dt)
    w0, w1 = _volterra_weights(rates, amps, dt, n, 2)
    t_pure, c_pure = bench_volterra(_pure, w0, w1)
    if _fast is not None:
        t_fast, c_fast = bench_volterra(_fast, w0, w1)
        assert np.max(np.abs(c_pure - c_fast)) < 1e-12
        rows.append((f"volterra recursion (n={n})", t_pure, t_fast))
    else:
        rows.append((f"volterra recursion (n={n})", t_pure, None))

    rng = np.random.default_rng(3)
    zs = (rng.uniform(-40, 40, 100000) + 1j * rng.uniform(-40, 40, 100000)).astype(complex)
    t_pure, g_pure = bench_gamma(_pure, zs)
    if _fast is not None:
        t_fast, g_fast = bench_gamma(_fast, zs)
        assert np.max(np.abs(g_pure - g_fast)) < 1e-12
        rows.append(("scaled incomplete gamma (1e5 points)", t_pure, t_fast))
    else:
        rows.append(("scaled incomplete gamma (1e5 points)", t_pure, None))

    width = max(len(r[0]) for r in rows)
    print(f"{'kernel':<{width}}  {'pure [s]':>10}  {'compiled [s]':>12}  {'speedup':>8}")
    for name, tp, tf in rows:
        if tf is None:
            print(f"{name:<{width}}  {tp:>10.4f}  {'-':>12}  {'-':>8}")
        else:
            print(f"{name:<{width}}  {tp:>10.4f}  {tf:>12.4f}  {tp / tf:>7.1f}x")


if __name__ == "__main__":
    main()
