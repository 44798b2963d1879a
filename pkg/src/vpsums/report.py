"""Parameter sweeps, the verification battery, and deterministic file outputs.

CSV cells carry 17 significant digits and rows follow the sweep's parameter
order regardless of worker completion order, so identical command lines
produce byte-identical files.
"""
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from vpsums import asymptotics, fourier, sequences
from vpsums.errors import DomainError
from vpsums.moduli import parse_omega_spec
from vpsums.sequences import parse_sequence_spec
from vpsums.worstcase import worstcase_Homega_lp, worstcase_Us

FLOAT_FMT = "%.17g"


def fmt(x):
    if x is None:
        return ""
    if isinstance(x, float):
        return FLOAT_FMT % x
    return str(x)


def write_csv(path, header, rows):
    lines = [",".join(header)]
    lines.extend(",".join(fmt(c) for c in row) for row in rows)
    text = "\n".join(lines) + "\n"
    if path is None:
        return text
    with open(path, "w") as fh:
        fh.write(text)
    return text


def write_json(path, payload):
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if path is None:
        return text
    with open(path, "w") as fh:
        fh.write(text)
    return text


@dataclass
class SweepSpec:
    seq_spec: str
    n0_values: list
    p_values: list
    q_values: list = field(default_factory=list)  # empty = q from seq_spec
    beta: float = 0.0
    s: float = None
    omega_spec: str = None
    tol: float = 1e-8
    lp_grid: int = None
    jobs: int = 1
    out: str = None
    svg: str = None

    def __post_init__(self):
        if not self.n0_values or not self.p_values:
            raise DomainError("sweep ranges must be nonempty")
        if (self.s is None) == (self.omega_spec is None):
            raise DomainError("specify exactly one of s / omega")


def _sweep_sequence(spec, q):
    seq = parse_sequence_spec(spec)
    if q is None or q == seq.q:
        return seq
    return sequences.PsiSequence(seq.family, q, m=seq.m, table=seq.table)


def _convergence_instance(task):
    sweep, q, p, n0 = task
    row = {"q": q, "beta": sweep.beta, "p": p, "n0": n0, "n": n0 + p - 1,
           "class": f"s={sweep.s:g}" if sweep.s is not None else sweep.omega_spec}
    if n0 < 1:
        row.update(status="skipped: p exceeds n", exact=None, main=None,
                   envelope=None, ratio=None, residual_over_envelope=None)
        return row
    try:
        seq = _sweep_sequence(sweep.seq_spec, q)
        row["seq"] = seq.label()
        n = n0 + p - 1
        if sweep.s is not None:
            exact = worstcase_Us(seq, n, p, sweep.beta, sweep.s, tol=sweep.tol).value
            main = asymptotics.thm2_main_term(seq, n, p, sweep.beta, sweep.s)
            envelope = asymptotics.thm2_remainder_envelope(seq, n, p, sweep.s)
        else:
            omega = parse_omega_spec(sweep.omega_spec)
            exact = worstcase_Homega_lp(seq, n, p, sweep.beta, omega,
                                        lp_grid=sweep.lp_grid, with_refinement=False).value
            main = asymptotics.thm3_main_term(seq, n, p, sweep.beta, omega)
            envelope = asymptotics.thm3_remainder_envelope(seq, n, p, omega)
        row.update(
            status="ok",
            exact=exact,
            main=main,
            envelope=envelope,
            ratio=exact / main if main else None,
            residual_over_envelope=abs(exact - main) / envelope if envelope else None,
        )
    except Exception as exc:  # per-instance failures stay in-row
        row.update(status=f"error: {exc}", exact=None, main=None, envelope=None,
                   ratio=None, residual_over_envelope=None)
    return row


CONVERGENCE_HEADER = ["seq", "q", "beta", "p", "n0", "n", "class", "status",
                      "exact", "main", "envelope", "ratio", "residual_over_envelope"]


def run_convergence(sweep):
    """One row per (q, p, n0) instance, in deterministic parameter order."""
    qs = sweep.q_values or [parse_sequence_spec(sweep.seq_spec).q]
    tasks = [(sweep, q, p, n0) for q in qs for p in sweep.p_values for n0 in sweep.n0_values]
    if sweep.jobs > 1:
        with ProcessPoolExecutor(max_workers=sweep.jobs) as pool:
            rows = list(pool.map(_convergence_instance, tasks))
    else:
        rows = [_convergence_instance(t) for t in tasks]
    for row in rows:
        row.setdefault("seq", sweep.seq_spec)
    table = [[row.get(col) for col in CONVERGENCE_HEADER] for row in rows]
    text = write_csv(sweep.out, CONVERGENCE_HEADER, table)
    if sweep.svg:
        _write_ratio_svg(sweep.svg, rows)
    return rows, text


def _write_ratio_svg(path, rows, width=640, height=420):
    """Ratio (exact/main) vs n-p+1, one polyline per (q, p) series."""
    series = {}
    for row in rows:
        if row.get("status") != "ok" or row.get("ratio") is None:
            continue
        series.setdefault((row["q"], row["p"]), []).append((row["n0"], row["ratio"]))
    margin = 56
    xs = sorted({x for pts in series.values() for x, _ in pts})
    ys = [y for pts in series.values() for _, y in pts]
    if not xs:
        xs, ys = [1], [1.0]
    x_lo, x_hi = min(xs), max(xs)
    y_lo = min(min(ys), 1.0) if ys else 0.0
    y_hi = max(max(ys), 1.0) if ys else 2.0
    pad = 0.05 * (y_hi - y_lo or 1.0)
    y_lo, y_hi = y_lo - pad, y_hi + pad

    def sx(x):
        span = (x_hi - x_lo) or 1.0
        return margin + (x - x_lo) / span * (width - 2 * margin)

    def sy(y):
        span = (y_hi - y_lo) or 1.0
        return height - margin - (y - y_lo) / span * (height - 2 * margin)

    palette = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
               "#e377c2", "#17becf"]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" '
        f'y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{sy(1.0):.2f}" x2="{width - margin}" y2="{sy(1.0):.2f}" '
        'stroke="#999" stroke-dasharray="4 3"/>',
        f'<text x="{width / 2:.0f}" y="{height - 12}" text-anchor="middle" '
        'font-size="13">n - p + 1</text>',
        f'<text x="14" y="{height / 2:.0f}" font-size="13" '
        f'transform="rotate(-90 14 {height / 2:.0f})" text-anchor="middle">exact / main term</text>',
    ]
    for x in xs:
        parts.append(f'<text x="{sx(x):.2f}" y="{height - margin + 16}" text-anchor="middle" '
                     f'font-size="11">{x}</text>')
    for frac in (0.0, 0.5, 1.0):
        y = y_lo + frac * (y_hi - y_lo)
        parts.append(f'<text x="{margin - 6}" y="{sy(y) + 4:.2f}" text-anchor="end" '
                     f'font-size="11">{y:.3f}</text>')
    for idx, (key, pts) in enumerate(sorted(series.items())):
        color = palette[idx % len(palette)]
        pts = sorted(pts)
        coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in pts)
        parts.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        for x, y in pts:
            parts.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="2.5" fill="{color}"/>')
        parts.append(f'<text x="{width - margin + 4}" y="{margin + 14 * idx + 4}" font-size="11" '
                     f'fill="{color}">q={key[0]:g}, p={key[1]}</text>')
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts) + "\n")


# ---------------------------------------------------------------------------
# verification battery

def _check_elliptic_identity(perturb=0.0):
    worst = 0.0
    for q in [round(0.1 * i, 1) for i in range(1, 10)]:
        for p in range(1, 9):
            lhs = asymptotics.K_qp(q, p, 1.0, tol=1e-12) + perturb
            rhs = asymptotics.K_qp_elliptic(q, p)
            worst = max(worst, abs(lhs - rhs) / rhs)
    return worst <= 1e-10, f"max relative gap {worst:.3e} (tol 1e-10)"


def _check_exponent_tables(perturb=0.0):
    for p in range(1, 11):
        for s_prime in (1.0, 2.0, math.inf):
            expected = 1 if (s_prime == 1 and p == 1) else (2 if p == 1 else 3)
            if asymptotics.sigma_exponent(s_prime, p) != expected:
                return False, f"sigma({s_prime}, {p}) != {expected}"
        if asymptotics.gamma_exponent(p) != (2 if p == 1 else 3):
            return False, f"gamma({p}) wrong"
    return True, "sigma and gamma match on the full enumeration"


def _check_neumann_epsilon(perturb=0.0):
    worst = 0.0
    for q in (0.2, 0.5, 0.8):
        seq = sequences.neumann(q)
        for m in (5, 50, 500):
            observed = max(abs(sequences.psi_ratio(seq, k) - q) for k in range(m, 10_001))
            closed = sequences.epsilon_value(seq, m)
            worst = max(worst, abs(observed - closed))
    return worst <= 1e-14, f"max |scan - closed form| = {worst:.3e} (tol 1e-14)"


def _check_vp_structure(perturb=0.0):
    rng = np.random.default_rng(20240811)
    for _ in range(25):
        deg = int(rng.integers(5, 40))
        f = fourier.TrigPoly(rng.normal(), rng.normal(size=deg), rng.normal(size=deg))
        n = int(rng.integers(2, 30))
        x = rng.uniform(0.0, 2.0 * math.pi, size=8)
        if not np.array_equal(fourier.vp_sum(f, n, 1, x), fourier.partial_sum(f, n - 1, x)):
            return False, "V_{n,1} != S_{n-1}"
        p = int(rng.integers(1, n + 1))
        if f.degree <= n - p:
            if not np.array_equal(fourier.vp_sum(f, n, p, x), f(x)):
                return False, "V_{n,p} does not reproduce low-degree input"
        g = fourier.vp_poly(f, n, p)
        for k in range(1, f.degree + 1):
            ak, bk = f.coefficient(k)
            gk, hk = g.coefficient(k)
            if k >= n - p + 1:
                tau = fourier.tau_weight(n, p, k)
                if abs((ak - gk) - tau * ak) > 1e-14 or abs((bk - hk) - tau * bk) > 1e-14:
                    return False, f"deviation coefficient mismatch at k={k}"
            elif (gk, hk) != (ak, bk):
                return False, f"harmonic {k} below the band was modified"
    return True, "projection band, reproduction and deviation identities hold"


VERIFY_CHECKS = {
    "elliptic": _check_elliptic_identity,
    "exponents": _check_exponent_tables,
    "neumann-eps": _check_neumann_epsilon,
    "vp-structure": _check_vp_structure,
}

VERIFY_ALIASES = {"sigma": "exponents", "gamma": "exponents", "eps": "neumann-eps"}


def run_verify(only=None, perturb=0.0):
    """Execute the identity/invariant battery; returns (all_passed, lines)."""
    only = VERIFY_ALIASES.get(only, only)
    names = [only] if only else list(VERIFY_CHECKS)
    if only and only not in VERIFY_CHECKS:
        raise DomainError(f"unknown check {only!r}; choose from {sorted(VERIFY_CHECKS)}")
    lines = []
    all_ok = True
    for name in names:
        ok, detail = VERIFY_CHECKS[name](perturb=perturb if name == "elliptic" else 0.0)
        all_ok &= ok
        lines.append(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return all_ok, lines
