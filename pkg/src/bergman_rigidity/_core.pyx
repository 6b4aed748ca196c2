# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; mirrors ``_fallback`` one function at a time."""
import numpy as np

from libc.math cimport log, M_PI


cdef inline double cabs2(double complex x) nogil:
    return x.real * x.real + x.imag * x.imag


def kerzman_stein_matrix(z, tangent, ds):
    cdef double complex[::1] zv = np.ascontiguousarray(z, dtype=complex)
    cdef double complex[::1] tv = np.ascontiguousarray(tangent, dtype=complex)
    cdef double[::1] dv = np.ascontiguousarray(ds, dtype=float)
    cdef Py_ssize_t n = zv.shape[0], i, j
    out = np.zeros((n, n), dtype=complex)
    cdef double complex[:, ::1] a = out
    cdef double complex d, h1, h2
    cdef double complex scale = 1.0 / (2j * M_PI)
    with nogil:
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                d = zv[j] - zv[i]
                h1 = tv[j] / d
                h2 = (tv[i] / d).conjugate()
                a[i, j] = (h1 - h2) * scale * dv[j]
    return out


def cauchy_sum(targets, src, dzw, dens, int power):
    src = np.ascontiguousarray(src, dtype=complex)
    cdef Py_ssize_t ns = src.shape[0]
    wd = np.reshape(np.asarray(dens, dtype=complex), (ns, -1)) * np.asarray(dzw, dtype=complex)[:, None]
    cdef double[:, ::1] wr = np.ascontiguousarray(wd.real)
    cdef double[:, ::1] wi = np.ascontiguousarray(wd.imag)
    cdef double[::1] sr = np.ascontiguousarray(src.real)
    cdef double[::1] si = np.ascontiguousarray(src.imag)
    tg = np.ascontiguousarray(np.ravel(targets), dtype=complex)
    cdef double[::1] tr = np.ascontiguousarray(tg.real)
    cdef double[::1] ti = np.ascontiguousarray(tg.imag)
    cdef Py_ssize_t nt = tg.shape[0], nc = wr.shape[1], t, j, c, p
    out_r = np.zeros((nt, nc))
    out_i = np.zeros((nt, nc))
    cdef double[:, ::1] orr = out_r
    cdef double[:, ::1] oi = out_i
    cdef double[::1] kr = np.empty(ns)
    cdef double[::1] ki = np.empty(ns)
    cdef double dr, di, m, ir, ii, tmp, ar, ai, x, y
    with nogil:
        for t in range(nt):
            for j in range(ns):
                dr = sr[j] - tr[t]
                di = si[j] - ti[t]
                m = 1.0 / (dr * dr + di * di)
                kr[j] = dr * m
                ki[j] = -di * m
            for p in range(1, power):
                for j in range(ns):
                    dr = sr[j] - tr[t]
                    di = si[j] - ti[t]
                    m = 1.0 / (dr * dr + di * di)
                    ir = dr * m
                    ii = -di * m
                    tmp = kr[j] * ir - ki[j] * ii
                    ki[j] = kr[j] * ii + ki[j] * ir
                    kr[j] = tmp
            for c in range(nc):
                ar = 0.0
                ai = 0.0
                for j in range(ns):
                    x = wr[j, c]
                    y = wi[j, c]
                    ar += x * kr[j] - y * ki[j]
                    ai += x * ki[j] + y * kr[j]
                orr[t, c] = ar
                oi[t, c] = ai
    return out_r + 1j * out_i


cdef inline double complex _prime(double complex zeta, double q, int nterms) nogil:
    cdef double complex out = 1.0 - zeta
    cdef double q2 = q * q, qk = q * q
    cdef int k
    for k in range(nterms):
        out = out * (1.0 - qk * zeta) * (1.0 - qk / zeta)
        qk *= q2
    return out


def annulus_green(z, w, double q, int nterms):
    zb, wb = np.broadcast_arrays(np.asarray(z, dtype=complex), np.asarray(w, dtype=complex))
    shape = zb.shape
    cdef double complex[::1] zv = np.ascontiguousarray(zb.ravel())
    cdef double complex[::1] wv = np.ascontiguousarray(wb.ravel())
    cdef Py_ssize_t n = zv.shape[0], i
    out = np.empty(n, dtype=float)
    cdef double[::1] o = out
    cdef double lq = log(q), lz, lw
    with nogil:
        for i in range(n):
            lz = 0.5 * log(cabs2(zv[i]))
            lw = 0.5 * log(cabs2(wv[i]))
            o[i] = (0.5 * log(cabs2(_prime(zv[i] / wv[i], q, nterms)))
                    - 0.5 * log(cabs2(_prime(zv[i] * wv[i].conjugate(), q, nterms)))
                    + lw - lz * lw / lq)
    return out.reshape(shape)
