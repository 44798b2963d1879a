"""Finite Fourier data, partial and de la Vallee Poussin sums, and
coefficient-space derivative/convolution transforms.

V_{n,p} is applied on coefficients (weight min{1,(n-k)/p} clamped to [0,1])
rather than by averaging evaluated partial sums: exact, O(N), and it turns
the deviation identity into a one-line check.
"""
import csv
import math
from dataclasses import dataclass, field

import numpy as np

from vpsums._series import trig_poly_values
from vpsums.errors import DomainError
from vpsums.kernels import KernelSpec, tau_weight
from vpsums.sequences import psi_eval

MAX_DEGREE = 1_000_000

__all__ = [
    "TrigPoly", "tau_weight", "partial_sum", "vp_poly", "vp_sum",
    "psi_beta_derivative", "convolve_with_kernel", "deviation",
    "read_trig_poly_csv", "write_trig_poly_csv",
]


@dataclass(frozen=True, eq=False)
class TrigPoly:
    """a0/2 + sum_{k=1}^{N} (a_k cos kt + b_k sin kt) with a[k-1] = a_k."""

    a0: float = 0.0
    a: np.ndarray = field(default_factory=lambda: np.zeros(0))
    b: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        object.__setattr__(self, "a", np.asarray(self.a, dtype=np.float64))
        object.__setattr__(self, "b", np.asarray(self.b, dtype=np.float64))
        if self.a.shape != self.b.shape:
            raise DomainError("cosine and sine coefficient arrays differ in length")
        if self.degree > MAX_DEGREE:
            raise DomainError(f"degree {self.degree} exceeds cap {MAX_DEGREE}")

    @property
    def degree(self):
        return self.a.shape[0]

    def __call__(self, t):
        scalar = np.isscalar(t)
        vals = trig_poly_values(self.a0, self.a, self.b, np.atleast_1d(np.asarray(t, dtype=np.float64)))
        return float(vals[0]) if scalar else vals

    def coefficient(self, k):
        """(a_k, b_k); k=0 returns (a0, 0.0)."""
        if k == 0:
            return self.a0, 0.0
        if k > self.degree:
            return 0.0, 0.0
        return float(self.a[k - 1]), float(self.b[k - 1])

    @classmethod
    def harmonic(cls, k, a_k=1.0, b_k=0.0):
        a = np.zeros(k)
        b = np.zeros(k)
        a[k - 1] = a_k
        b[k - 1] = b_k
        return cls(0.0, a, b)


def partial_sum(f, k, x):
    """S_k(f; x), the k-th partial sum (k = 0 is the constant term)."""
    if k < 0:
        raise DomainError("partial sum order must be >= 0")
    m = min(k, f.degree)
    return TrigPoly(f.a0, f.a[:m], f.b[:m])(x)


def vp_weights(n, p, degree):
    """Coefficient weights of V_{n,p} on harmonics 1..degree."""
    k = np.arange(1, degree + 1, dtype=np.float64)
    return np.clip((n - k) / p, 0.0, 1.0)


def vp_poly(f, n, p):
    """V_{n,p}(f) as a TrigPoly (weighted coefficients, constants reproduced)."""
    if not 1 <= p <= n:
        raise DomainError(f"need 1 <= p <= n, got p={p}, n={n}")
    w = vp_weights(n, p, f.degree)
    return TrigPoly(f.a0, w * f.a, w * f.b)


def vp_sum(f, n, p, x):
    """V_{n,p}(f; x) = (1/p) sum_{k=n-p}^{n-1} S_k(f; x), via coefficient weights."""
    return vp_poly(f, n, p)(x)


def deviation(f, n, p, x):
    """f(x) - V_{n,p}(f; x)."""
    return f(x) - vp_sum(f, n, p, x)


def psi_beta_derivative(f, seq, beta):
    """TrigPoly whose series is sum (1/psi(k)) (a_k cos(kx+th) + b_k sin(kx+th)), th = beta*pi/2.

    The constant term is dropped (the derivative series has no k=0 harmonic).
    """
    th = beta * math.pi / 2.0
    c, s = math.cos(th), math.sin(th)
    psi = np.array([psi_eval(seq, k) for k in range(1, f.degree + 1)])
    new_a = (f.a * c + f.b * s) / psi
    new_b = (-f.a * s + f.b * c) / psi
    return TrigPoly(0.0, new_a, new_b)


def convolve_with_kernel(phi, spec: KernelSpec):
    """(1/pi) * integral phi(x-t) Psi_beta(t) dt, exact on coefficients.

    Inverse of psi_beta_derivative; phi must have zero mean.
    """
    if phi.a0 != 0.0:
        raise DomainError("convolution requires a0 = 0 (phi orthogonal to constants)")
    th = spec.beta * math.pi / 2.0
    c, s = math.cos(th), math.sin(th)
    psi = np.array([psi_eval(spec.seq, k) for k in range(1, phi.degree + 1)])
    new_a = psi * (phi.a * c - phi.b * s)
    new_b = psi * (phi.a * s + phi.b * c)
    return TrigPoly(0.0, new_a, new_b)


def write_trig_poly_csv(f, path):
    """Rows k,a_k,b_k; the k=0 row carries a0."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "a_k", "b_k"])
        writer.writerow([0, f"{f.a0:.17g}", "0"])
        for k in range(1, f.degree + 1):
            writer.writerow([k, f"{f.a[k - 1]:.17g}", f"{f.b[k - 1]:.17g}"])


def read_trig_poly_csv(path):
    a0 = 0.0
    entries = {}
    with open(path) as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header and header[0].strip().lower() != "k":
            fh.seek(0)
            reader = csv.reader(fh)
        for row in reader:
            if not row:
                continue
            k = int(row[0])
            if k == 0:
                a0 = float(row[1])
            else:
                entries[k] = (float(row[1]), float(row[2]))
    degree = max(entries) if entries else 0
    a = np.zeros(degree)
    b = np.zeros(degree)
    for k, (ak, bk) in entries.items():
        a[k - 1] = ak
        b[k - 1] = bk
    return TrigPoly(a0, a, b)
