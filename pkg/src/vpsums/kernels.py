"""Generating kernels, the V_{n,p} tail kernel, and the residual kernel.

Geometric and Neumann generating kernels and the geometric tail kernel have
exact complex closed forms; everything else is summed as a cosine series
with a certified geometric-majorant stopping rule.  Series evaluation on
grids goes through the selected backend (vpsums._series).
"""
import math
from dataclasses import dataclass

import numpy as np

from vpsums import sequences as seqs
from vpsums._series import cosine_series
from vpsums.errors import ConvergenceError, DomainError
from vpsums.sequences import PsiSequence

DEFAULT_TOL = 1e-12
MAX_SERIES_TERMS = 1_000_000


@dataclass(frozen=True)
class KernelSpec:
    """Generating kernel sum_{k>=1} psi(k) cos(kt - beta*pi/2)."""

    seq: PsiSequence
    beta: float


@dataclass(frozen=True)
class TailKernelSpec:
    """Deviation kernel sum_{k>=n-p+1} tau_{n,p}(k) psi(k) cos(kt - beta*pi/2)."""

    seq: PsiSequence
    n: int
    p: int
    beta: float = 0.0

    def __post_init__(self):
        if not 1 <= self.p <= self.n:
            raise DomainError(f"need 1 <= p <= n, got p={self.p}, n={self.n}")

    @property
    def first_harmonic(self):
        return self.n - self.p + 1


def tau_weight(n, p, k):
    """Tail weight of harmonic k in f - V_{n,p}(f): linear ramp, then 1."""
    if not 1 <= p <= n:
        raise DomainError(f"need 1 <= p <= n, got p={p}, n={n}")
    if k <= n - p:
        raise DomainError(f"tau is defined for k >= n-p+1, got k={k}")
    if k >= n:
        return 1.0
    return 1.0 - (n - k) / p


def _one_minus_qz(q, t):
    """1 - q e^{it} with the cancellation-free real part (1-q) + 2q sin^2(t/2)."""
    t = np.asarray(t, dtype=np.float64)
    re = (1.0 - q) + 2.0 * q * np.sin(0.5 * t) ** 2
    return re - 1j * q * np.sin(t)


def _family_epsilon_cap(seq, k):
    """Cheap upper bound for eps_k, valid for every family, monotone in k."""
    if seq.family == seqs.GEOMETRIC:
        return 0.0
    if seq.family == seqs.NEUMANN:
        return seq.q / (k + 1)
    if seq.family == seqs.POLYHARMONIC:
        if seq.m == 1:
            return 0.0
        return (2 * seq.m - 3) * seq.q / k
    # user table: suffix max of observed deviations, computed lazily
    return _table_suffix_eps(seq)[min(k, len(seq.table) - 1) - 1]


_TABLE_EPS_CACHE = {}


def _table_suffix_eps(seq):
    key = (seq.table, seq.q)
    hit = _TABLE_EPS_CACHE.get(key)
    if hit is not None:
        return hit
    devs = [abs(seq.table[i + 1] / seq.table[i] - seq.q) for i in range(len(seq.table) - 1)]
    suffix = list(devs)
    for i in range(len(suffix) - 2, -1, -1):
        suffix[i] = max(suffix[i], suffix[i + 1])
    _TABLE_EPS_CACHE[key] = suffix
    return suffix


def _series_coefficients(seq, k_start, tol, weight=None, scale_from=None, max_terms=MAX_SERIES_TERMS):
    """Coefficients c_k = weight(k) * psi(k)/psi(scale_from) for k >= k_start,
    truncated once the certified geometric majorant of the tail drops below tol.

    scale_from=None means no normalization (psi itself); weight=None means 1.
    """
    if scale_from is None:
        cum = seqs.psi_eval(seq, k_start)
    else:
        cum = 1.0
        for k in range(scale_from, k_start):
            cum *= seqs.psi_ratio(seq, k)
    coeffs = []
    k = k_start
    while True:
        w = 1.0 if weight is None else weight(k)
        coeffs.append(w * cum)
        eps = _family_epsilon_cap(seq, k)
        if eps < 1.0 - seq.q:
            majorant = cum * (seq.q + eps) / (1.0 - seq.q - eps)
            if majorant <= tol:
                break
        if seq.max_index is not None and k + 1 >= seq.max_index:
            raise ConvergenceError(
                f"table exhausted at k={k} before tail majorant reached tol={tol:g}"
            )
        if len(coeffs) >= max_terms:
            raise ConvergenceError(
                f"series majorant still above tol={tol:g} after {max_terms} terms"
            )
        cum *= seqs.psi_ratio(seq, k)
        k += 1
    return np.asarray(coeffs, dtype=np.float64)


def kernel_evaluator(spec, tol=DEFAULT_TOL):
    """Callable t-array -> Psi_beta(t) values; closed form where available."""
    if tol <= 0:
        raise DomainError("tol must be positive")
    seq, beta = spec.seq, spec.beta
    theta = beta * math.pi / 2.0
    q = seq.q
    phase = complex(math.cos(theta), -math.sin(theta))

    if seq.family == seqs.GEOMETRIC or (seq.family == seqs.POLYHARMONIC and seq.m == 1):
        def closed_geometric(t):
            t = np.asarray(t, dtype=np.float64)
            d = _one_minus_qz(q, t)
            qz = q * np.exp(1j * t)
            return np.real(phase * qz / d)
        return closed_geometric

    if seq.family == seqs.NEUMANN:
        def closed_neumann(t):
            t = np.asarray(t, dtype=np.float64)
            d = _one_minus_qz(q, t)
            return np.real(phase * (-np.log(d)))
        return closed_neumann

    coeffs = _series_coefficients(seq, 1, tol)

    def series(t):
        t = np.asarray(t, dtype=np.float64)
        return cosine_series(coeffs, 1, theta, t)

    return series


def _eval_on(fn, t):
    arr = np.asarray(t, dtype=np.float64)
    if arr.ndim == 0:
        return float(fn(arr.reshape(1))[0])
    return fn(arr)


def kernel_eval(spec, t, tol=DEFAULT_TOL):
    """Psi_beta(t) = sum_{k>=1} psi(k) cos(kt - beta*pi/2), |error| <= tol."""
    return _eval_on(kernel_evaluator(spec, tol), t)


def tail_kernel_evaluator(spec, tol=DEFAULT_TOL, normalized=False):
    """Callable t-array -> tail kernel values.

    normalized=True divides by psi(n-p+1), which keeps magnitudes
    representable for large n-p+1; the raw kernel is psi(n-p+1) times that.
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    seq, n, p, beta = spec.seq, spec.n, spec.p, spec.beta
    n0 = spec.first_harmonic
    theta = beta * math.pi / 2.0
    q = seq.q
    phase = complex(math.cos(theta), -math.sin(theta))

    if seq.family == seqs.GEOMETRIC or (seq.family == seqs.POLYHARMONIC and seq.m == 1):
        lead = 1.0 if normalized else q ** n0

        def closed(t):
            t = np.asarray(t, dtype=np.float64)
            z = np.exp(1j * t)
            d = _one_minus_qz(q, t)
            num = phase * np.exp(1j * n0 * t) * (1.0 - (q * z) ** p) * np.conj(d) ** 2
            return lead * np.real(num) / (p * np.abs(d) ** 4)
        return closed

    coeffs, _ = tail_kernel_coefficients(spec, tol=tol, normalized=normalized)

    def series(t):
        t = np.asarray(t, dtype=np.float64)
        return cosine_series(coeffs, n0, theta, t)

    return series


def vp_tail_kernel(spec, t, tol=DEFAULT_TOL, normalized=False):
    """sum_{k>=n-p+1} tau_{n,p}(k) psi(k) cos(kt - beta*pi/2), |error| <= tol."""
    return _eval_on(tail_kernel_evaluator(spec, tol, normalized=normalized), t)


def tail_kernel_coefficients(spec, tol=DEFAULT_TOL, normalized=True):
    """(coeffs, first_harmonic) of the tail kernel cosine series, truncated so the
    dropped tail is below tol (in the normalized scale when normalized=True)."""
    seq, n, p = spec.seq, spec.n, spec.p
    n0 = spec.first_harmonic

    def weight(k):
        return min(1.0, (k - n + p) / p)

    series_tol = tol if normalized else tol / max(seqs.psi_eval(seq, n0), 1e-300)
    coeffs = _series_coefficients(seq, n0, series_tol, weight=weight, scale_from=n0)
    if not normalized:
        coeffs = seqs.psi_eval(seq, n0) * coeffs
    return coeffs, n0


def tail_kernel_envelope_geometric(q, n, p, t):
    """Magnitude bound q^{n0} sqrt(1-2q^p cos pt+q^{2p}) / (p(1-2q cos t+q^2))."""
    t = np.asarray(t, dtype=np.float64)
    n0 = n - p + 1
    num = np.sqrt(1.0 - 2.0 * q ** p * np.cos(p * t) + q ** (2 * p))
    den = (1.0 - q) ** 2 + 4.0 * q * np.sin(0.5 * t) ** 2
    return q ** n0 * num / (p * den)


def residual_kernel_evaluator(spec, tol=DEFAULT_TOL):
    """Callable t-array -> r_{n,p}(t) values (zero for the geometric family)."""
    if tol <= 0:
        raise DomainError("tol must be positive")
    seq, n, p, beta = spec.seq, spec.n, spec.p, spec.beta
    n0 = spec.first_harmonic
    theta = beta * math.pi / 2.0
    q = seq.q

    if seq.family == seqs.GEOMETRIC or (seq.family == seqs.POLYHARMONIC and seq.m == 1):
        def zero(t):
            return np.zeros_like(np.asarray(t, dtype=np.float64))
        return zero

    coeffs = []
    cum = seqs.psi_ratio(seq, n0)  # psi(n0+1)/psi(n0)
    qpow = q
    k = n0 + 1
    while True:
        w = min(1.0, (k - n + p) / p)
        coeffs.append(w * (cum - qpow))
        eps = _family_epsilon_cap(seq, k)
        if eps >= 1.0 - q:
            if seq.max_index is not None and k + 1 >= seq.max_index:
                raise ConvergenceError("table exhausted with invalid majorant")
        else:
            majorant = cum * (q + eps) / (1.0 - q - eps) + qpow * q / (1.0 - q)
            if majorant <= tol:
                break
        if len(coeffs) >= MAX_SERIES_TERMS:
            raise ConvergenceError(
                f"residual series majorant still above tol={tol:g} after {MAX_SERIES_TERMS} terms"
            )
        cum *= seqs.psi_ratio(seq, k)
        qpow *= q
        k += 1
    arr = np.asarray(coeffs, dtype=np.float64)

    def series(t):
        t = np.asarray(t, dtype=np.float64)
        return cosine_series(arr, n0 + 1, theta, t)

    return series


def residual_kernel(spec, t, tol=DEFAULT_TOL):
    """r_{n,p}(t) = sum_{k>=n-p+2} tau(k) (psi(k)/psi(n0) - q^{k-n0}) cos(kt - theta)."""
    return _eval_on(residual_kernel_evaluator(spec, tol), t)


def residual_bound(seq, n, p):
    """min{2 eps/(1-q)^2, 8 eps/(p (1-q)^3)} with eps = eps_{n-p+1} (valid once eps < (1-q)/2)."""
    q = seq.q
    eps = seqs.epsilon_value(seq, n - p + 1)
    return min(2.0 * eps / (1.0 - q) ** 2, 8.0 * eps / (p * (1.0 - q) ** 3))
