# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel backend; semantics documented in the package __init__."""

import numpy as np

cimport numpy as cnp
from libc.math cimport log, sqrt

cnp.import_array()


def stokes_bloch(intensities):
    arr = np.ascontiguousarray(intensities, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 6:
        raise ValueError("intensities must have shape (n, 6), got %r" % (arr.shape,))
    cdef double[:, ::1] a = arr
    cdef Py_ssize_t n = a.shape[0]
    out_arr = np.empty((n, 3), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i
    cdef double total, bx, by, bz, norm, scale
    for i in range(n):
        total = a[i, 0] + a[i, 1]
        if total <= 0.0:
            raise ValueError("zero total flux in at least one row")
        bx = (a[i, 2] - a[i, 3]) / total
        by = (a[i, 4] - a[i, 5]) / total
        bz = (a[i, 0] - a[i, 1]) / total
        norm = sqrt(bx * bx + by * by + bz * bz)
        if norm > 1.0:
            scale = 1.0 / norm
            bx *= scale
            by *= scale
            bz *= scale
        out[i, 0] = bx
        out[i, 1] = by
        out[i, 2] = bz
    return out_arr


cdef inline double _entropy_one(double bx, double by, double bz) nogil:
    cdef double r = sqrt(bx * bx + by * by + bz * bz)
    cdef double lam_hi, lam_lo, s
    if r > 1.0:
        r = 1.0
    lam_hi = 0.5 * (1.0 + r)
    lam_lo = 0.5 * (1.0 - r)
    s = 0.0
    if lam_hi > 0.0:
        s -= lam_hi * log(lam_hi)
    if lam_lo > 0.0:
        s -= lam_lo * log(lam_lo)
    if s < 0.0:
        s = 0.0
    return s


def functional_values(bloch, kind, params):
    barr = np.ascontiguousarray(bloch, dtype=np.float64)
    if barr.ndim != 2 or barr.shape[1] != 3:
        raise ValueError("bloch must have shape (n, 3), got %r" % (barr.shape,))
    parr = np.ascontiguousarray(params, dtype=np.float64)
    cdef double[:, ::1] b = barr
    cdef double[::1] p = parr
    cdef Py_ssize_t n = b.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef int k = kind
    cdef Py_ssize_t i
    cdef double omega, rz_in, temperature, dot, r2, s2, rad, val

    if k == 0:
        if p.shape[0] != 4:
            raise ValueError("expectation needs params [g0, gx, gy, gz]")
        for i in range(n):
            out[i] = p[0] + b[i, 0] * p[1] + b[i, 1] * p[2] + b[i, 2] * p[3]
        return out_arr
    if k == 1:
        for i in range(n):
            out[i] = _entropy_one(b[i, 0], b[i, 1], b[i, 2])
        return out_arr
    if k == 2:
        if p.shape[0] != 3:
            raise ValueError("free_energy needs params [omega, rz_in, temperature]")
        omega = p[0]
        rz_in = p[1]
        temperature = p[2]
        for i in range(n):
            val = 0.5 * omega * (b[i, 2] - rz_in)
            out[i] = val - temperature * _entropy_one(b[i, 0], b[i, 1], b[i, 2])
        return out_arr
    if k == 3:
        if p.shape[0] != 3:
            raise ValueError("fidelity needs the target Bloch vector")
        s2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2]
        for i in range(n):
            dot = b[i, 0] * p[0] + b[i, 1] * p[1] + b[i, 2] * p[2]
            r2 = b[i, 0] * b[i, 0] + b[i, 1] * b[i, 1] + b[i, 2] * b[i, 2]
            rad = (1.0 - r2) * (1.0 - s2)
            if rad < 0.0:
                rad = 0.0
            val = 0.5 * (1.0 + dot + sqrt(rad))
            if val < 0.0:
                val = 0.0
            elif val > 1.0:
                val = 1.0
            out[i] = val
        return out_arr
    raise ValueError("unknown functional kind %r" % (kind,))
