"""Coefficient families psi(k) with limit ratio q and their tail deviations.

Four families are supported: geometric q^k, Neumann q^k/k, polyharmonic
q^k * P_m(k) with P_m a degree m-1 polynomial factor, and finite user
tables with a declared q.  The deviation eps_m = sup_{k>=m} |psi(k+1)/psi(k) - q|
drives every remainder estimate downstream, so ratios are always computed
from the family formulas (never from possibly-underflowed psi values).
"""
import math
from dataclasses import dataclass, field

from vpsums.errors import DomainError

GEOMETRIC = "geometric"
NEUMANN = "neumann"
POLYHARMONIC = "polyharmonic"
USER_TABLE = "table"


@dataclass(frozen=True)
class PsiSequence:
    """A coefficient family psi(k), k >= 1, with psi(k+1)/psi(k) -> q in (0,1)."""

    family: str
    q: float
    m: int = 1
    table: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if not 0.0 < self.q < 1.0:
            raise DomainError(f"q must lie in (0,1), got {self.q}")
        if self.family not in (GEOMETRIC, NEUMANN, POLYHARMONIC, USER_TABLE):
            raise DomainError(f"unknown family {self.family!r}")
        if self.family == POLYHARMONIC and self.m < 1:
            raise DomainError("polyharmonic order m must be >= 1")
        if self.family == USER_TABLE:
            if len(self.table) < 2:
                raise DomainError("table needs at least two entries")
            if any(v <= 0 for v in self.table):
                raise DomainError("table entries must be positive")

    @property
    def max_index(self):
        """Largest k for which psi(k) is defined (None = unbounded)."""
        return len(self.table) if self.family == USER_TABLE else None

    def label(self):
        if self.family == POLYHARMONIC:
            return f"polyharmonic:q={self.q:g},m={self.m}"
        if self.family == USER_TABLE:
            return f"table:q={self.q:g},len={len(self.table)}"
        return f"{self.family}:q={self.q:g}"


def geometric(q):
    return PsiSequence(GEOMETRIC, q)


def neumann(q):
    return PsiSequence(NEUMANN, q)


def polyharmonic(q, m):
    return PsiSequence(POLYHARMONIC, q, m=m)


def user_table(values, q):
    return PsiSequence(USER_TABLE, q, table=tuple(float(v) for v in values))


def _poly_factor(seq, k):
    """P_m(k) = 1 + sum_{j=1}^{m-1} (1-q^2)^j/(j! 2^j) * prod_{l=0}^{j-1}(k+2l)."""
    c = (1.0 - seq.q * seq.q) / 2.0
    total = 1.0
    term = 1.0
    for j in range(1, seq.m):
        term *= c / j * (k + 2 * (j - 1))
        total += term
    return total


def _check_k(seq, k):
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if seq.family == USER_TABLE and k > len(seq.table):
        raise DomainError(f"k={k} outside table of length {len(seq.table)}")


def psi_eval(seq, k):
    """psi(k) for the family.  Underflows to 0.0 for extreme k; use log_psi there."""
    _check_k(seq, k)
    if seq.family == GEOMETRIC:
        return seq.q ** k
    if seq.family == NEUMANN:
        return seq.q ** k / k
    if seq.family == POLYHARMONIC:
        if seq.m == 1:
            return seq.q ** k
        return math.exp(log_psi(seq, k))
    return seq.table[k - 1]


def log_psi(seq, k):
    """log psi(k), exact for large k where psi itself underflows."""
    _check_k(seq, k)
    lq = k * math.log(seq.q)
    if seq.family == GEOMETRIC:
        return lq
    if seq.family == NEUMANN:
        return lq - math.log(k)
    if seq.family == POLYHARMONIC:
        return lq + math.log(_poly_factor(seq, k))
    return math.log(seq.table[k - 1])


def psi_ratio(seq, k):
    """psi(k+1)/psi(k), computed from the family formula (no cancellation)."""
    _check_k(seq, k)
    if seq.family == GEOMETRIC:
        return seq.q
    if seq.family == NEUMANN:
        return seq.q * k / (k + 1)
    if seq.family == POLYHARMONIC:
        if seq.m == 1:
            return seq.q
        return seq.q * _poly_factor(seq, k + 1) / _poly_factor(seq, k)
    if k + 1 > len(seq.table):
        raise DomainError(f"ratio at k={k} needs table entry {k + 1}")
    return seq.table[k] / seq.table[k - 1]


@dataclass(frozen=True)
class EpsilonTail:
    """sup_{k>=m} |psi(k+1)/psi(k) - q| (closed form or observed by scan)."""

    m: int
    value: float
    certified_bound: float = None
    exact: bool = False


def default_scan_horizon(m):
    # ratio deviations of the non-geometric families decay ~1/k, so one
    # decade past m resolves the sup comfortably at desk scale
    return 10 * m


def epsilon_tail(seq, m, horizon=None):
    """Tail deviation eps_m for the sequence, starting at index m.

    Geometric is exactly 0.  Neumann has the closed form q/(m+1) (the scan
    in the verification battery confirms the sup sits at k=m).  Polyharmonic
    and table families are scanned on [m, horizon]; polyharmonic m>=2 also
    reports the certified cap (2m-3)q/start.
    """
    if m < 1:
        raise DomainError(f"start index m must be >= 1, got {m}")
    if seq.family == GEOMETRIC or (seq.family == POLYHARMONIC and seq.m == 1):
        return EpsilonTail(m, 0.0, certified_bound=0.0, exact=True)
    if seq.family == NEUMANN:
        return EpsilonTail(m, seq.q / (m + 1), certified_bound=seq.q / (m + 1), exact=True)

    if horizon is None:
        horizon = default_scan_horizon(m)
    if seq.family == USER_TABLE:
        horizon = min(horizon, len(seq.table) - 1)
    if horizon < m:
        raise DomainError(f"scan horizon {horizon} below start index {m}")
    observed = max(abs(psi_ratio(seq, k) - seq.q) for k in range(m, horizon + 1))
    bound = None
    if seq.family == POLYHARMONIC and seq.m >= 2:
        bound = (2 * seq.m - 3) * seq.q / m
    return EpsilonTail(m, observed, certified_bound=bound)


def epsilon_value(seq, m):
    """Scalar eps_m used by remainder envelopes."""
    return epsilon_tail(seq, m).value


def product_ratio_gap(seq, m, k):
    """|prod_{l=0}^{k-1} psi(m+l+1)/psi(m+l) - q^k| = |psi(m+k)/psi(m) - q^k|.

    Guaranteed <= (q+eps_m)^k - q^k.
    """
    if m < 1 or k < 1:
        raise DomainError("m and k must be >= 1")
    if seq.family == GEOMETRIC or (seq.family == POLYHARMONIC and seq.m == 1):
        return 0.0  # ratios are exactly q
    prod = 1.0
    for l in range(k):
        prod *= psi_ratio(seq, m + l)
    return abs(prod - seq.q ** k)


def parse_sequence_spec(spec):
    """Parse a CLI sequence spec.

    Formats: ``geometric:q=0.5``, ``neumann:q=0.5``,
    ``polyharmonic:q=0.5,m=3``, ``table:@path`` (file with header
    ``q=<value>`` then one positive decimal per line).
    """
    try:
        name, _, rest = spec.partition(":")
        name = name.strip().lower()
        if name == USER_TABLE:
            if not rest.startswith("@"):
                raise DomainError("table spec must be table:@path")
            return _read_table_file(rest[1:])
        kv = {}
        for item in rest.split(","):
            if not item:
                continue
            key, _, val = item.partition("=")
            kv[key.strip()] = val.strip()
        q = float(kv["q"])
        if name == GEOMETRIC:
            return geometric(q)
        if name == NEUMANN:
            return neumann(q)
        if name == POLYHARMONIC:
            return polyharmonic(q, int(kv["m"]))
        raise DomainError(f"unknown sequence family {name!r}")
    except (KeyError, ValueError) as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"bad sequence spec {spec!r}: {exc}") from exc


def _read_table_file(path):
    q = None
    values = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("q="):
                q = float(line[2:])
            else:
                values.append(float(line))
    if q is None:
        raise DomainError(f"table file {path} is missing the 'q=<value>' header")
    return user_table(values, q)
