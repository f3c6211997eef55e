# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled twins of gapdecay._kernels._pure (same algorithms and stopping rules)."""
import numpy as np

from libc.math cimport exp, fabs, lgamma, log, sqrt, M_PI

cdef extern from "complex.h" nogil:
    double complex cexp(double complex z)
    double complex csqrt(double complex z)
    double cabs(double complex z)
    double carg(double complex z)

cdef double SQRT_PI = sqrt(M_PI)
cdef double _SERIES_RADIUS = 4.0
cdef double _ASYM_RADIUS = 35.0
cdef double _CF_MAX_ARG = 0.75 * M_PI


cdef inline (double complex, long, bint, double) _wright_sum(double n_idx, double b, double complex z,
                                                              double abs_tol, double rel_tol,
                                                              long max_terms) nogil:
    cdef double complex term = exp(lgamma(1.0 + n_idx) - lgamma(1.0 - b)) + 0.0j
    cdef double complex s = term
    cdef double peak = cabs(term)
    cdef double tmag
    cdef long m = 0
    cdef int small = 0
    cdef double tol
    while m < max_terms:
        term = term * (-(1.0 + n_idx + m) * z) / ((m + 1.0) * (1.0 - b + 2.0 * m) * (2.0 - b + 2.0 * m))
        s = s + term
        m += 1
        tmag = cabs(term)
        if tmag > peak:
            peak = tmag
        tol = rel_tol * cabs(s)
        if tol < abs_tol:
            tol = abs_tol
        if tmag < tol:
            small += 1
            if small >= 5:
                return s, m, True, peak
        else:
            small = 0
    return s, m, False, peak


def wright_sum(double n_idx, double b, z, double abs_tol=1e-14, double rel_tol=1e-12,
               long max_terms=1000000):
    cdef double complex zz = z
    cdef double complex val
    cdef long m
    cdef bint ok
    cdef double peak
    val, m, ok, peak = _wright_sum(n_idx, b, zz, abs_tol, rel_tol, max_terms)
    return complex(val), m, bool(ok), peak


cdef double complex _g_series(double complex z) nogil:
    cdef double complex t = 2.0 + 0.0j
    cdef double complex s = 0.0j
    cdef int n = 0
    while True:
        s = s + t
        n += 1
        t = t * z / (0.5 + n)
        if cabs(t) < 1e-17 * cabs(s) + 1e-300 or n > 600:
            break
    return cexp(z) * SQRT_PI - csqrt(z) * s


cdef double complex _g_cf(double complex z) nogil:
    cdef double tiny = 1e-300
    cdef double complex f = z + 0.5
    cdef double complex c, d, delta
    cdef double ak
    cdef int k
    if cabs(f) < tiny:
        f = tiny
    c = f
    d = 0.0j
    for k in range(1, 20000):
        ak = -k * (k - 0.5)
        d = z + 2.0 * k + 0.5 + ak * d
        if cabs(d) < tiny:
            d = tiny
        c = z + 2.0 * k + 0.5 + ak / c
        if cabs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = c * d
        f = f * delta
        if cabs(delta - 1.0) < 1e-16:
            break
    return csqrt(z) / f


cdef double complex _g_kummer(double complex z) nogil:
    cdef double complex w = -z
    cdef double complex t = 1.0 + 0.0j
    cdef double complex s = t
    cdef double complex ez
    cdef int n = 0
    while True:
        t = t * (0.5 + n) * w / ((1.5 + n) * (n + 1.0))
        s = s + t
        n += 1
        if cabs(t) < 1e-17 * cabs(s) or n > 20000:
            break
    ez = cexp(z)
    return ez * SQRT_PI - 2.0 * csqrt(z) * ez * s


cdef double complex _g_asym(double complex z) nogil:
    cdef double complex s = 1.0 + 0.0j
    cdef double complex t = 1.0 + 0.0j
    cdef double complex tn
    cdef int k
    for k in range(1, 400):
        tn = t * (0.5 - k) / z
        if cabs(tn) >= cabs(t):
            break
        t = tn
        s = s + t
        if cabs(t) < 1e-18 * cabs(s):
            break
    return s / csqrt(z)


cdef double complex _scaled_gamma_half(double complex z) nogil:
    cdef double az = cabs(z)
    if az == 0.0:
        return SQRT_PI + 0.0j
    if az <= _SERIES_RADIUS:
        return _g_series(z)
    if fabs(carg(z)) <= _CF_MAX_ARG:
        return _g_cf(z)
    if az < _ASYM_RADIUS:
        return _g_kummer(z)
    return _g_asym(z)


def scaled_gamma_half(z):
    cdef double complex zz = z
    return complex(_scaled_gamma_half(zz))


def scaled_gamma_half_many(z):
    zarr = np.ascontiguousarray(z, dtype=np.complex128)
    out = np.empty(len(zarr), dtype=np.complex128)
    cdef double complex[::1] zv = zarr
    cdef double complex[::1] ov = out
    cdef Py_ssize_t i
    for i in range(zv.shape[0]):
        ov[i] = _scaled_gamma_half(zv[i])
    return out


def series_terms(double alpha, z0, za, z1n, double n_atoms, double a, double t,
                 double abs_tol, long max_outer,
                 double[::1] exps, double[::1] re_out, double[::1] im_out):
    cdef double complex z0c = z0
    cdef double complex zac = za
    cdef double complex zeta = (<double complex> z1n) * t * t
    cdef double a2t2 = a * a * t * t
    cdef double logt = log(t)
    cdef double log_za = log(cabs(zac))
    cdef double log_n = log(n_atoms)
    cdef double complex step_ph = -zac / cabs(zac)
    cdef double complex ph_n = 1.0 + 0.0j
    cdef double complex ph, block, term, wu, ws, factor, running
    cdef double lc, ex, mag, bmag, scale, carrier, pu, ps_
    cdef double last_block = 0.0, max_carrier = 0.0
    cdef long count = 0, n, k, n_used = max_outer, mdum
    cdef int small = 0, status = 1
    cdef bint blown, okdum
    running = 0.0j
    for n in range(max_outer):
        lc = n * (log_n + log_za) - lgamma(n + 1.0)
        ph = ph_n
        block = 0.0j
        blown = False
        for k in range(n, -1, -1):
            ex = 3.0 * n - alpha * k
            mag = lc + ex * logt
            if mag > 600.0:
                blown = True
                break
            # pure relative stopping: these values get scaled by exp(mag)
            wu, mdum, okdum, pu = _wright_sum(n, alpha * k - 3.0 * n, zeta, 1e-290, 1e-15, 1000000)
            ws, mdum, okdum, ps_ = _wright_sum(n, alpha * k - 3.0 * n - 2.0, zeta, 1e-290, 1e-15, 1000000)
            scale = exp(mag)
            term = scale * ph * (wu - a2t2 * ws)
            carrier = scale * (pu + a2t2 * ps_)
            if carrier > max_carrier:
                max_carrier = carrier
            exps[count] = ex
            re_out[count] = term.real
            im_out[count] = term.imag
            count += 1
            block = block + term
            if k > 0:
                factor = (z0c * k) / (zac * (n - k + 1.0))
                lc += log(cabs(factor))
                ph = ph * (factor / cabs(factor))
        running = running + block
        bmag = cabs(block)
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
        ph_n = ph_n * step_ph
    return count, n_used, last_block, max_carrier, cabs(running), status


def volterra_recurse(w0, w1):
    # fused lag kernel V_m = W1_m + W0_{m+1}; C_0 = 1 contributes W1_{k-1}
    w0a = np.ascontiguousarray(w0, dtype=np.complex128)
    w1a = np.ascontiguousarray(w1, dtype=np.complex128)
    cdef Py_ssize_t n = len(w0a)
    out = np.zeros(n + 1, dtype=np.complex128)
    va = np.empty(max(n - 1, 0), dtype=np.complex128)
    if n > 1:
        va[:] = w1a[:-1] + w0a[1:]
    cdef double complex[::1] c = out
    cdef double complex[::1] v0 = w0a
    cdef double complex[::1] v1 = w1a
    cdef double complex[::1] v = va
    cdef double complex pivot = 1.0 + v0[0]
    cdef double complex acc
    cdef Py_ssize_t k, j
    c[0] = 1.0
    with nogil:
        for k in range(1, n + 1):
            acc = v1[k - 1]
            for j in range(1, k):
                acc = acc + c[j] * v[k - 1 - j]
            c[k] = (1.0 - acc) / pivot
    return out


def volterra_recurse_rect(m0):
    m0a = np.ascontiguousarray(m0, dtype=np.complex128)
    cdef Py_ssize_t n = len(m0a)
    out = np.zeros(n + 1, dtype=np.complex128)
    cdef double complex[::1] c = out
    cdef double complex[::1] m = m0a
    cdef double complex acc
    cdef Py_ssize_t k, j
    c[0] = 1.0
    with nogil:
        for k in range(1, n + 1):
            acc = 0.0j
            for j in range(k):
                acc = acc + c[j] * m[k - 1 - j]
            c[k] = 1.0 - acc
    return out
