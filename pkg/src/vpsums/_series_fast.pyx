# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled series-evaluation core.

Same API as vpsums._series_numpy; terms are summed per grid point with
libm cosines (no rotation recurrences, so no accumulated phase drift).
"""
import numpy as np

cimport numpy as cnp
from libc.math cimport cos, sin

cnp.import_array()


def cosine_series(coeffs, long k0, double theta, t):
    """Evaluate sum_j coeffs[j] * cos((k0+j)*t - theta) on the grid t."""
    cdef double[::1] c = np.ascontiguousarray(coeffs, dtype=np.float64)
    cdef double[::1] tt = np.ascontiguousarray(t, dtype=np.float64)
    out_arr = np.empty(tt.shape[0], dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, j, n = tt.shape[0], m = c.shape[0]
    cdef double acc, ti
    for i in range(n):
        ti = tt[i]
        acc = 0.0
        for j in range(m):
            acc += c[j] * cos((k0 + j) * ti - theta)
        out[i] = acc
    return out_arr


def trig_poly_values(double a0, a, b, t):
    """Evaluate a0/2 + sum_k (a[k-1] cos(kt) + b[k-1] sin(kt)) on the grid t."""
    cdef double[::1] aa = np.ascontiguousarray(a, dtype=np.float64)
    cdef double[::1] bb = np.ascontiguousarray(b, dtype=np.float64)
    cdef double[::1] tt = np.ascontiguousarray(t, dtype=np.float64)
    out_arr = np.empty(tt.shape[0], dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, k, n = tt.shape[0], m = aa.shape[0]
    cdef double acc, ti, kt
    for i in range(n):
        ti = tt[i]
        acc = 0.5 * a0
        for k in range(m):
            kt = (k + 1) * ti
            acc += aa[k] * cos(kt) + bb[k] * sin(kt)
        out[i] = acc
    return out_arr
