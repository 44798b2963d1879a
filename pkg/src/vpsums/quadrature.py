"""Periodic L_s norms and definite integrals with refinement-based error estimates.

Periodic integrands use the rectangle rule with panel doubling (spectrally
accurate for smooth 2pi-periodic functions, and still O(h^2) across the
|g| kinks that appear for s=1).  General integrals use adaptive Simpson.
Everything is deterministic for a given (grid, tol).
"""
import math
from dataclasses import dataclass

import numpy as np

from vpsums.errors import AccuracyError, DomainError

TWO_PI = 2.0 * math.pi

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error_estimate: float
    evaluations: int


def integrate(g, a, b, tol=1e-10, max_depth=60):
    """Integrate g over [a, b] to absolute tolerance tol (adaptive Simpson).

    Raises AccuracyError (carrying the best QuadratureResult) if the
    accumulated error estimate still exceeds tol at the depth cap.
    """
    if not a < b:
        raise DomainError(f"need a < b, got [{a}, {b}]")
    if tol <= 0:
        raise DomainError("tol must be positive")
    state = {"evals": 0}

    def f(x):
        state["evals"] += 1
        return float(g(x))

    c = 0.5 * (a + b)
    fa, fb, fc = f(a), f(b), f(c)
    whole = (b - a) / 6.0 * (fa + 4.0 * fc + fb)
    value, err = _adaptive_simpson(f, a, fa, b, fb, c, fc, whole, tol, max_depth)
    result = QuadratureResult(value, err, state["evals"])
    if err > tol:
        raise AccuracyError(
            f"adaptive Simpson stalled at error {err:.3e} > tol {tol:.3e}", result
        )
    return result


def _adaptive_simpson(f, a, fa, b, fb, c, fc, whole, tol, depth):
    d = 0.5 * (a + c)
    e = 0.5 * (c + b)
    fd, fe = f(d), f(e)
    left = (c - a) / 6.0 * (fa + 4.0 * fd + fc)
    right = (b - c) / 6.0 * (fc + 4.0 * fe + fb)
    delta = left + right - whole
    if depth <= 0 or abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0, abs(delta) / 15.0
    lv, le = _adaptive_simpson(f, a, fa, c, fc, d, fd, left, 0.5 * tol, depth - 1)
    rv, re = _adaptive_simpson(f, c, fc, b, fb, e, fe, right, 0.5 * tol, depth - 1)
    return lv + rv, le + re


def _pow2_at_least(n):
    p = 1
    while p < n:
        p *= 2
    return p


def lp_norm_periodic(g, s, tol=1e-10, min_panels=512, max_panels=1 << 22, freq_hint=None):
    """L_s norm of g over [0, 2pi] to relative tolerance tol.

    g must accept a numpy array of points.  s is in [1, inf]; s = inf takes
    a dense grid max (scaled to the oscillation frequency when freq_hint is
    given) refined by golden-section polish around the leading candidates.
    """
    if not s >= 1:
        raise DomainError(f"s must be in [1, inf], got {s}")
    if tol <= 0:
        raise DomainError("tol must be positive")
    if math.isinf(s):
        return _sup_norm_periodic(g, min_panels, freq_hint)

    n = _pow2_at_least(max(min_panels, 16 * freq_hint if freq_hint else 0, 64))
    t = np.arange(n) * (TWO_PI / n)
    vals = np.abs(np.asarray(g(t), dtype=np.float64)) ** s
    total = float(np.sum(vals))
    evals = n
    norm_prev = (total * TWO_PI / n) ** (1.0 / s)
    err = math.inf
    while n < max_panels:
        mid = t + math.pi / n
        total += float(np.sum(np.abs(np.asarray(g(mid), dtype=np.float64)) ** s))
        evals += n
        n *= 2
        t = np.arange(n) * (TWO_PI / n)
        norm = (total * TWO_PI / n) ** (1.0 / s)
        err = abs(norm - norm_prev)
        if err <= tol * max(abs(norm), 1e-300):
            return QuadratureResult(norm, err, evals)
        norm_prev = norm
    raise AccuracyError(
        f"periodic rule did not reach rel tol {tol:.1e} at {max_panels} panels",
        QuadratureResult(norm_prev, err, evals),
    )


def _sup_norm_periodic(g, min_panels, freq_hint, n_candidates=8, polish_iters=80):
    n = _pow2_at_least(max(8192, min_panels, 16 * freq_hint if freq_hint else 0))
    t = np.arange(n) * (TWO_PI / n)
    vals = np.abs(np.asarray(g(t), dtype=np.float64))
    evals = n
    grid_max = float(np.max(vals))

    # local maxima of |g| on the circular grid, keep the strongest few
    left = np.roll(vals, 1)
    right = np.roll(vals, -1)
    peaks = np.flatnonzero((vals >= left) & (vals >= right))
    order = np.argsort(vals[peaks])[::-1]
    peaks = peaks[order[:n_candidates]]

    h = TWO_PI / n
    best = grid_max
    for idx in peaks:
        x = t[idx]
        lo, hi = x - h, x + h
        a = lo + (1.0 - _GOLDEN) * (hi - lo)
        b = lo + _GOLDEN * (hi - lo)
        fa = abs(float(g(np.array([a]))[0]))
        fb = abs(float(g(np.array([b]))[0]))
        evals += 2
        for _ in range(polish_iters):
            if fa < fb:
                lo = a
                a, fa = b, fb
                b = lo + _GOLDEN * (hi - lo)
                fb = abs(float(g(np.array([b]))[0]))
            else:
                hi = b
                b, fb = a, fa
                a = lo + (1.0 - _GOLDEN) * (hi - lo)
                fa = abs(float(g(np.array([a]))[0]))
            evals += 1
        best = max(best, fa, fb)
    err = max(best - grid_max, 1e-15 * best)
    return QuadratureResult(best, err, evals)


def omega_sine_integral(omega, n_index, tol=1e-10):
    """integral_0^{pi/2} omega(2t/N) sin(t) dt for N = n_index."""
    if n_index < 1:
        raise DomainError("N must be >= 1")
    return integrate(lambda t: omega(2.0 * t / n_index) * math.sin(t), 0.0, math.pi / 2.0, tol)


def cosine_norm(s, tol=1e-12):
    """||cos||_s over [0, 2pi]; closed forms for s in {1, 2, inf}, quadrature otherwise.

    sin(t) has the same norms by translation.
    """
    if s == 1:
        return 4.0
    if s == 2:
        return math.sqrt(math.pi)
    if math.isinf(s):
        return 1.0
    return lp_norm_periodic(np.cos, s, tol=tol, min_panels=1024).value
