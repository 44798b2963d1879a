"""Pure-numpy implementation of the hot series-evaluation loops.

Mirrors the API of the compiled module ``vpsums._series_fast``; one of the
two is picked at import time by :mod:`vpsums._series`.
"""
import numpy as np


def cosine_series(coeffs, k0, theta, t):
    """Evaluate sum_j coeffs[j] * cos((k0+j)*t - theta) on the grid t."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    out = np.zeros_like(t)
    for j in range(coeffs.shape[0]):
        out += coeffs[j] * np.cos((k0 + j) * t - theta)
    return out


def trig_poly_values(a0, a, b, t):
    """Evaluate a0/2 + sum_k (a[k-1] cos(kt) + b[k-1] sin(kt)) on the grid t."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    out = np.full_like(t, 0.5 * a0)
    for k in range(1, a.shape[0] + 1):
        kt = k * t
        out += a[k - 1] * np.cos(kt) + b[k - 1] * np.sin(kt)
    return out
