"""Moduli of continuity omega(t) with convexity and divergence diagnostics.

"Convex" follows the approximation-theory usage (convex upwards):
omega((x+y)/2) >= (omega(x)+omega(y))/2.  The divergence condition
omega(t)/t -> infinity is what makes the modulus-class asymptotics sharp;
it is diagnosed by sampling, never enforced.
"""
import math
import warnings
from dataclasses import dataclass

import numpy as np

from vpsums.errors import DomainError

POWER = "power"
LOG = "log"
LINEAR = "linear"
USER = "user"


@dataclass(frozen=True)
class ModulusOfContinuity:
    family: str
    alpha: float = 0.0
    fn: object = None
    convex: bool = True
    scale: float = 1.0

    def __post_init__(self):
        if self.family in (POWER, LOG) and not 0.0 < self.alpha < 1.0:
            raise DomainError(f"{self.family} exponent must lie in (0,1), got {self.alpha}")
        if self.family == USER and self.fn is None:
            raise DomainError("user modulus needs a callable")
        if self.scale < 0.0:
            raise DomainError("scale must be nonnegative")

    def __call__(self, t):
        t = np.asarray(t, dtype=np.float64)
        if self.family == POWER:
            out = t ** self.alpha
        elif self.family == LOG:
            out = np.log1p(t) ** self.alpha
        elif self.family == LINEAR:
            out = t.copy()
        else:
            out = np.asarray(self.fn(t), dtype=np.float64)
        out = self.scale * out
        return float(out) if out.ndim == 0 else out

    def scaled(self, c):
        return ModulusOfContinuity(self.family, self.alpha, self.fn, self.convex, self.scale * c)

    def label(self):
        if self.family == POWER:
            base = f"power:alpha={self.alpha:g}"
        elif self.family == LOG:
            base = f"log:beta={self.alpha:g}"
        elif self.family == LINEAR:
            base = "linear"
        else:
            base = "user"
        return base if self.scale == 1.0 else f"{base},scale={self.scale:g}"


def power_modulus(alpha):
    """omega(t) = t^alpha (Holder class majorant)."""
    return ModulusOfContinuity(POWER, alpha)


def log_modulus(beta):
    """omega(t) = ln^beta(1+t)."""
    return ModulusOfContinuity(LOG, beta)


def linear_modulus():
    """omega(t) = t (fails the divergence condition; diagnostics warn)."""
    return ModulusOfContinuity(LINEAR)


def user_modulus(fn, convex=False):
    return ModulusOfContinuity(USER, fn=fn, convex=convex)


def zero_modulus():
    return ModulusOfContinuity(LINEAR, scale=0.0)


def parse_omega_spec(spec):
    """CLI omega spec: ``power:alpha=0.5``, ``log:beta=0.5``, ``linear``;
    an optional ``,scale=c`` multiplies the modulus by c."""
    name, _, rest = spec.partition(":")
    kv = {}
    for item in rest.split(","):
        if not item:
            continue
        key, _, val = item.partition("=")
        kv[key.strip()] = float(val)
    scale = kv.pop("scale", 1.0)
    name = name.strip().lower()
    if name == POWER:
        om = power_modulus(kv["alpha"])
    elif name == LOG:
        om = log_modulus(kv["beta"])
    elif name == LINEAR:
        om = linear_modulus()
    else:
        raise DomainError(f"unknown omega spec {spec!r}")
    return om.scaled(scale) if scale != 1.0 else om


def check_modulus(omega, n_samples=200, t_max=math.pi, rng=None):
    """Sampled diagnostics: omega(0)=0, monotone, subadditive, and (when the
    convex flag is set) midpoint convexity upwards.  Returns a dict of bools."""
    rng = np.random.default_rng(0) if rng is None else rng
    t = np.sort(rng.uniform(0.0, t_max, n_samples))
    x = rng.uniform(0.0, 0.5 * t_max, n_samples)
    y = rng.uniform(0.0, 0.5 * t_max, n_samples)
    tol = 1e-12
    vals = omega(t)
    report = {
        "zero_at_zero": abs(float(omega(0.0))) <= tol,
        "nondecreasing": bool(np.all(np.diff(vals) >= -tol)),
        "subadditive": bool(np.all(omega(x + y) <= omega(x) + omega(y) + tol)),
    }
    if omega.convex:
        mid = omega((x + y) / 2.0)
        report["convex_upwards"] = bool(np.all(mid >= (omega(x) + omega(y)) / 2.0 - tol))
    return report


def diverges_at_zero(omega, n_scales=40):
    """Sampled check of lim_{t->0} omega(t)/t = infinity (t = 2^-j, j=1..n_scales)."""
    ratios = [float(omega(2.0 ** -j)) * 2.0 ** j for j in range(1, n_scales + 1)]
    # divergent iff the ratio keeps growing and ends large
    return ratios[-1] > 10.0 * max(ratios[0], 1e-300) and ratios[-1] > ratios[len(ratios) // 2]


def warn_if_not_divergent(omega):
    if not diverges_at_zero(omega):
        warnings.warn(
            "omega(t)/t does not appear to diverge as t->0; the modulus-class "
            "asymptotic main term is not sharp for this omega",
            stacklevel=2,
        )
        return False
    return True
