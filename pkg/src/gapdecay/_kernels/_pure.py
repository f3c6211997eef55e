"""Pure numpy/python implementations of the hot numerical kernels.

Mirrors the compiled extension `gapdecay._fast` exactly (same algorithms,
same stopping rules, same return conventions) so either backend can serve
the rest of the library. See benchmarks/bench_kernels.py for the speed gap.
"""
import cmath
import math

import numpy as np

SQRT_PI = math.sqrt(math.pi)

# Region boundaries for the scaled incomplete gamma; chosen so each method
# holds ≥ 1e-12 relative accuracy on its patch (see tests against mpmath).
_SERIES_RADIUS = 4.0
_ASYM_RADIUS = 35.0
_CF_MAX_ARG = 0.75 * math.pi


def wright_sum(n_idx, b, z, abs_tol=1e-14, rel_tol=1e-12, max_terms=1000000):
    """Sum_m (-1)^m Gamma(1+n+m) / (m! Gamma(1-b+2m)) z^m.

    Entire in z for the parameter ranges used here (1-b+2m > 0 for all m).
    Returns (value, terms_used, converged, max_abs_term); converged requires
    the running term to stay below tolerance for 5 consecutive terms, and the
    largest internal term bounds the cancellation noise of the result.
    """
    term = complex(math.exp(math.lgamma(1.0 + n_idx) - math.lgamma(1.0 - b)))
    s = term
    peak = abs(term)
    m = 0
    small = 0
    while m < max_terms:
        term = term * (-(1.0 + n_idx + m) * z) / ((m + 1.0) * (1.0 - b + 2 * m) * (2.0 - b + 2 * m))
        s += term
        m += 1
        tmag = abs(term)
        if tmag > peak:
            peak = tmag
        if tmag < max(abs_tol, rel_tol * abs(s)):
            small += 1
            if small >= 5:
                return s, m, True, peak
        else:
            small = 0
    return s, m, False, peak


def _g_series(z):
    # e^z sqrt(pi) - sqrt(z) * sum_n z^n / (1/2)_{n+1}
    t = 2.0 + 0j
    s = 0j
    n = 0
    while True:
        s += t
        n += 1
        t = t * z / (0.5 + n)
        if abs(t) < 1e-17 * abs(s) + 1e-300 or n > 600:
            break
    return cmath.exp(z) * SQRT_PI - cmath.sqrt(z) * s


def _g_cf(z):
    # Modified Lentz on Gamma(1/2, z) = e^{-z} z^{1/2} / (z+1/2 -) 1*(1/2)/(z+5/2 -) ...
    tiny = 1e-300
    f = z + 0.5
    if abs(f) < tiny:
        f = tiny
    c = f
    d = 0j
    for k in range(1, 20000):
        ak = -k * (k - 0.5)
        bk = z + 2 * k + 0.5
        d = bk + ak * d
        if abs(d) < tiny:
            d = tiny
        c = bk + ak / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = c * d
        f = f * delta
        if abs(delta - 1.0) < 1e-16:
            break
    return cmath.sqrt(z) / f


def _g_kummer(z):
    # gamma(1/2, z) = 2 sqrt(z) M(1/2, 3/2, -z); stable left of the imaginary axis
    w = -z
    t = 1.0 + 0j
    s = t
    n = 0
    while True:
        t = t * (0.5 + n) * w / ((1.5 + n) * (n + 1.0))
        s += t
        n += 1
        if abs(t) < 1e-17 * abs(s) or n > 20000:
            break
    ez = cmath.exp(z)
    return ez * SQRT_PI - 2.0 * cmath.sqrt(z) * ez * s


def _g_asym(z):
    # z^{-1/2} (1 - 1/(2z) + 3/(4z^2) - ...), truncated at the smallest term
    s = 1.0 + 0j
    t = 1.0 + 0j
    for k in range(1, 400):
        tn = t * (0.5 - k) / z
        if abs(tn) >= abs(t):
            break
        t = tn
        s += t
        if abs(t) < 1e-18 * abs(s):
            break
    return s / cmath.sqrt(z)


def scaled_gamma_half(z):
    """e^z Gamma(1/2, z) on the principal branch, overflow-free for any |z|."""
    z = complex(z)
    az = abs(z)
    if az == 0.0:
        return complex(SQRT_PI)
    if az <= _SERIES_RADIUS:
        return _g_series(z)
    if abs(cmath.phase(z)) <= _CF_MAX_ARG:
        return _g_cf(z)
    if az < _ASYM_RADIUS:
        return _g_kummer(z)
    return _g_asym(z)


def scaled_gamma_half_many(z):
    out = np.empty(len(z), dtype=complex)
    for i, zi in enumerate(z):
        out[i] = scaled_gamma_half(zi)
    return out


def series_terms(alpha, z0, za, z1n, n_atoms, a, t, abs_tol, max_outer,
                 exps, re_out, im_out):
    """Evaluate the double-series blocks for one time point.

    Fills exps/re_out/im_out with the per-(n,k) exponents of t and term
    values (ordered n-major, k descending). Coefficients are carried as
    log-magnitude plus unit phase so huge intermediate factors cancel against
    t powers without overflow. Returns
    (count, n_outer, last_block, max_carrier, run_mag, status) where status
    is 0 on block convergence and 1 otherwise (budget exhausted or magnitude
    blow-up); max_carrier bounds the largest roundoff magnitude that entered
    any term, inner-kernel cancellation included, and drives the caller's
    horizon guard.
    """
    zeta = z1n * t * t
    a2t2 = a * a * t * t
    logt = math.log(t)
    log_za = math.log(abs(za))
    log_n = math.log(float(n_atoms))
    step_ph = -za / abs(za)  # unit phase of (-N za)
    count = 0
    running = 0j
    max_carrier = 0.0
    last_block = 0.0
    small = 0
    status = 1
    n_used = max_outer
    ph_n = 1.0 + 0j
    for n in range(max_outer):
        # c_{n,k} = (-N)^n za^k z0^(n-k) / (k! (n-k)!), built from k = n downward
        lc = n * (log_n + log_za) - math.lgamma(n + 1.0)
        ph = ph_n
        block = 0j
        blown = False
        for k in range(n, -1, -1):
            ex = 3.0 * n - alpha * k
            mag = lc + ex * logt
            if mag > 600.0:
                blown = True
                break
            # pure relative stopping: these values get scaled by exp(mag)
            wu, _, _, pu = wright_sum(n, alpha * k - 3.0 * n, zeta, 1e-290, 1e-15)
            ws, _, _, ps_ = wright_sum(n, alpha * k - 3.0 * n - 2.0, zeta, 1e-290, 1e-15)
            scale = math.exp(mag)
            term = scale * ph * (wu - a2t2 * ws)
            carrier = scale * (pu + a2t2 * ps_)
            if carrier > max_carrier:
                max_carrier = carrier
            exps[count] = ex
            re_out[count] = term.real
            im_out[count] = term.imag
            count += 1
            block += term
            if k > 0:
                factor = (z0 * k) / (za * (n - k + 1.0))
                lc += math.log(abs(factor))
                ph *= factor / abs(factor)
        running += block
        bmag = abs(block)
        last_block = bmag
        if blown or bmag > 1e250:
            n_used = n + 1
            break
        if n >= 2 and bmag < abs_tol:
            small += 1
            if small >= 3:
                status = 0
                n_used = n + 1
                break
        else:
            small = 0
        ph_n *= step_ph
    return count, n_used, last_block, max_carrier, abs(running), status


def volterra_recurse(w0, w1):
    """Second-kind product-integration recursion with piecewise-linear history.

    C_n (1 + W0_0) = 1 - sum_{j<n} C_j W1_{n-1-j} - sum_{0<i<n} C_i W0_{n-i}.
    The two lag sums share C_1..C_{n-1}, so they fuse into one dot against
    V_m = W1_m + W0_{m+1} plus the C_0 = 1 boundary term.
    """
    n = len(w0)
    c = np.zeros(n + 1, dtype=complex)
    c[0] = 1.0
    v = np.empty(max(n - 1, 0), dtype=complex)
    if n > 1:
        v[:] = w1[:-1] + w0[1:]
    vr = v[::-1].copy()
    pivot = 1.0 + w0[0]
    for k in range(1, n + 1):
        acc = w1[k - 1]
        if k > 1:
            acc += np.dot(c[1:k], vr[n - k:n - 1])
        c[k] = (1.0 - acc) / pivot
    return c


def volterra_recurse_rect(m0):
    """First-order (rectangle) product-integration recursion."""
    n = len(m0)
    c = np.zeros(n + 1, dtype=complex)
    c[0] = 1.0
    m0r = m0[::-1].copy()
    for k in range(1, n + 1):
        c[k] = 1.0 - np.dot(c[0:k], m0r[n - k:n])
    return c
