# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels; drop-in for ``_pykernels``.

Grid points are independent, so the outer loops run under ``prange``.  Each
output cell is written by exactly one iteration, which keeps results
independent of the thread count.
"""

import numpy as np
cimport numpy as cnp
from cython.parallel cimport prange
from libc.math cimport cos, sin, tan, fabs, frexp, ldexp

cnp.import_array()

cdef double TAN_SINGULAR_COS = 1e-9
cdef double DEGENERATE = 1e-300
cdef double RESCALE_LOW = 2.0 ** -16
cdef double RESCALE_HIGH = 2.0 ** 500
cdef double MIRROR_DELTA = 2.0 ** -480


cdef inline double abs2(double complex z) noexcept nogil:
    return z.real * z.real + z.imag * z.imag


# The scatter kernel mirrors _pykernels._product operation for operation in
# real arithmetic, so both backends round identically.

cdef inline void _mul(double ar, double ai, double br, double bi, double* re, double* im) noexcept nogil:
    re[0] = ar * br - ai * bi
    im[0] = ar * bi + ai * br


cdef inline void _div(double ar, double ai, double br, double bi, double* re, double* im) noexcept nogil:
    cdef double ratio, den
    if fabs(br) >= fabs(bi):
        ratio = bi / br
        den = br + bi * ratio
        re[0] = (ar + ai * ratio) / den
        im[0] = (ai - ar * ratio) / den
    else:
        ratio = br / bi
        den = bi + br * ratio
        re[0] = (ar * ratio + ai) / den
        im[0] = (ai * ratio - ar) / den


cdef int _scatter_one(const double* dets, const double* cs, const double* sn, Py_ssize_t n_sites,
                      double gamma, double gamma0, double probe, double back_r, double back_i,
                      double complex* r_out, double complex* t_out) noexcept nogil:
    cdef double a[8]
    cdef double n[8]
    cdef double k11r, k11i, k12r, k12i, k21r, k21i, k22r, k22i
    cdef double dr, di, loss, w, sr, si, xr, xi, yr, yi, p12r, p12i, p22r, p22i, rr, ri, norm
    cdef Py_ssize_t j, m
    cdef int exponent
    # a = [ar, ai, br, bi, cr, ci, dr, di] of the running product
    a[0] = 1.0; a[1] = 0.0; a[2] = 0.0; a[3] = 0.0
    a[4] = 0.0; a[5] = 0.0; a[6] = 1.0; a[7] = 0.0
    sr = 1.0
    si = 0.0
    loss = gamma0 / gamma
    for j in range(n_sites):
        dr = (probe - dets[j]) / gamma
        di = loss
        if fabs(dr) + fabs(loss) < MIRROR_DELTA:
            dr = 0.0
            di = 0.0
        w = 1.0 / (fabs(dr) + fabs(di) + 1.0)
        k11r = dr * cs[j] * w
        k11i = di * cs[j] * w
        k12r = -di * sn[j] * w
        k12i = dr * sn[j] * w
        k21r = -di * sn[j] * w
        k21i = (dr * sn[j] - 2.0 * cs[j]) * w
        k22r = (dr * cs[j] + 2.0 * sn[j]) * w
        k22i = di * cs[j] * w
        if dr == 0.0 and di == 0.0:
            # perfect mirror: sites behind it drop out, its rank-1 matrix fixes r
            n[0] = k11r; n[1] = k11i; n[2] = k12r; n[3] = k12i
            n[4] = k21r; n[5] = k21i; n[6] = k22r; n[7] = k22i
        else:
            _mul(k11r, k11i, a[0], a[1], &xr, &xi)
            _mul(k12r, k12i, a[4], a[5], &yr, &yi)
            n[0] = xr + yr; n[1] = xi + yi
            _mul(k11r, k11i, a[2], a[3], &xr, &xi)
            _mul(k12r, k12i, a[6], a[7], &yr, &yi)
            n[2] = xr + yr; n[3] = xi + yi
            _mul(k21r, k21i, a[0], a[1], &xr, &xi)
            _mul(k22r, k22i, a[4], a[5], &yr, &yi)
            n[4] = xr + yr; n[5] = xi + yi
            _mul(k21r, k21i, a[2], a[3], &xr, &xi)
            _mul(k22r, k22i, a[6], a[7], &yr, &yi)
            n[6] = xr + yr; n[7] = xi + yi
        # exact power-of-two rescaling so near-resonant chains cannot underflow
        norm = (fabs(n[0]) + fabs(n[1]) + fabs(n[2]) + fabs(n[3])
                + fabs(n[4]) + fabs(n[5]) + fabs(n[6]) + fabs(n[7]))
        if norm < RESCALE_LOW or norm > RESCALE_HIGH:
            frexp(norm, &exponent)
            for m in range(8):
                a[m] = ldexp(n[m], -exponent)
            # shift first: multiplying by a power of two is exact, and sr * delta may underflow
            sr = ldexp(sr, -exponent)
            si = ldexp(si, -exponent)
        else:
            for m in range(8):
                a[m] = n[m]
        _mul(sr, si, dr, di, &xr, &xi)
        sr = xr * w
        si = xi * w
    # one final normalization so the degeneracy test on P22 is relative to the product
    frexp(fabs(a[0]) + fabs(a[1]) + fabs(a[2]) + fabs(a[3])
          + fabs(a[4]) + fabs(a[5]) + fabs(a[6]) + fabs(a[7]), &exponent)
    for m in range(8):
        a[m] = ldexp(a[m], -exponent)
    sr = ldexp(sr, -exponent)
    si = ldexp(si, -exponent)
    p12r = 0.5 * ((a[0] - a[6]) - (a[2] - a[4]))
    p12i = 0.5 * ((a[1] - a[7]) - (a[3] - a[5]))
    p22r = 0.5 * ((a[0] + a[6]) - (a[2] + a[4]))
    p22i = 0.5 * ((a[1] + a[7]) - (a[3] + a[5]))
    if fabs(p22r) + fabs(p22i) < DEGENERATE:
        return 1
    _div(p12r, p12i, p22r, p22i, &rr, &ri)
    r_out[0] = rr + 1j * ri
    _mul(back_r, back_i, sr, si, &xr, &xi)
    _div(xr, xi, p22r, p22i, &rr, &ri)
    t_out[0] = rr + 1j * ri
    return 0


def scatter_grid(detunings, phases, double gamma, double gamma0, probes, int num_threads=1):
    cdef double[::1] dets = np.ascontiguousarray(detunings, dtype=np.float64)
    cdef double[::1] ph = np.ascontiguousarray(phases, dtype=np.float64)
    cdef double[::1] pr = np.ascontiguousarray(probes, dtype=np.float64)
    cdef Py_ssize_t n_sites = dets.shape[0]
    cdef Py_ssize_t n = pr.shape[0]
    cdef Py_ssize_t k, j
    cs_arr = np.empty(max(n_sites, 1), dtype=np.float64)
    sn_arr = np.empty(max(n_sites, 1), dtype=np.float64)
    cdef double[::1] cs = cs_arr
    cdef double[::1] sn = sn_arr
    cdef double total = 0.0
    for j in range(n_sites):
        cs[j] = cos(ph[j])
        sn[j] = sin(ph[j])
        total += ph[j]
    cdef double back_r = cos(total)
    cdef double back_i = -sin(total)

    r_arr = np.full(n, np.nan, dtype=np.complex128)
    t_arr = np.full(n, np.nan, dtype=np.complex128)
    st_arr = np.zeros(n, dtype=np.int8)
    cdef double complex[::1] r = r_arr
    cdef double complex[::1] t = t_arr
    cdef signed char[::1] st = st_arr
    if n == 0:
        return r_arr, t_arr, st_arr
    for k in prange(n, nogil=True, num_threads=num_threads, schedule="static"):
        st[k] = _scatter_one(&dets[0], &cs[0], &sn[0], n_sites, gamma, gamma0, pr[k], back_r, back_i,
                             &r[k], &t[k])
    return r_arr, t_arr, st_arr


cdef inline int _ratio(double num, double den, double* out) noexcept nogil:
    if den == 0.0:
        if num == 0.0:
            out[0] = 1.0
            return 0
        out[0] = 1.0 / 0.0
        return 1
    out[0] = num / den
    return 0


cdef int _eta_one(double theta, double s, double gamma, double gamma0, double mean,
                  double* out) noexcept nogil:
    cdef double half = 0.5 * s
    cdef double tn, common
    cdef double complex a, base, skew
    if fabs(cos(theta)) >= TAN_SINGULAR_COS:
        tn = tan(theta)
        common = (mean + gamma * tn) * (mean + gamma * tn)
        return _ratio(common + (half * tn - gamma0) * (half * tn - gamma0),
                      common + (half * tn + gamma0) * (half * tn + gamma0), out)
    a = cos(2.0 * theta) + 1j * sin(2.0 * theta)
    base = gamma * gamma * (a - 1.0) + 1j * gamma * (a + 1.0) * (mean + 1j * gamma0)
    skew = 1j * gamma * (a - 1.0) * half
    return _ratio(abs2(base - skew), abs2(base + skew), out)


def eta_grid(thetas, splittings, double gamma, double gamma0, double mean_detuning,
             int num_threads=1):
    cdef double[::1] th = np.ascontiguousarray(thetas, dtype=np.float64)
    cdef double[::1] sv = np.ascontiguousarray(splittings, dtype=np.float64)
    cdef Py_ssize_t nt = th.shape[0]
    cdef Py_ssize_t ns = sv.shape[0]
    cdef Py_ssize_t i, j, cell
    eta_arr = np.empty((nt, ns), dtype=np.float64)
    st_arr = np.zeros((nt, ns), dtype=np.int8)
    cdef double[:, ::1] eta = eta_arr
    cdef signed char[:, ::1] st = st_arr
    for cell in prange(nt * ns, nogil=True, num_threads=num_threads, schedule="static"):
        i = cell // ns
        j = cell % ns
        st[i, j] = _eta_one(th[i], sv[j], gamma, gamma0, mean_detuning, &eta[i, j])
    return eta_arr, st_arr
