import math

import numpy as np
import pytest

from vpsums.errors import DomainError
from vpsums.kernels import TailKernelSpec, tail_kernel_evaluator
from vpsums.moduli import power_modulus, zero_modulus
from vpsums.quadrature import cosine_norm
from vpsums.sequences import geometric, neumann, polyharmonic
from vpsums.worstcase import (
    _solve_modulus_lp,
    conjugate_exponent,
    default_lp_grid,
    normalized_bounds_check,
    worstcase_Homega_lp,
    worstcase_lower_candidate,
    worstcase_Us,
)


def brute_force_l1_deviation(q, n, p, beta, points=10 ** 6):
    """(1/pi) ||tail kernel||_1 by direct Riemann summation of the series."""
    t = (np.arange(points) + 0.5) * (2.0 * math.pi / points)
    theta = beta * math.pi / 2.0
    acc = np.zeros(points)
    k = n - p + 1
    qq = q ** k
    while qq > 1e-18 * q ** (n - p + 1):
        acc += min(1.0, (k - n + p) / p) * qq * np.cos(k * t - theta)
        k += 1
        qq *= q
    return 2.0 * float(np.mean(np.abs(acc)))


def test_conjugate_exponent():
    assert conjugate_exponent(1.0) == math.inf
    assert conjugate_exponent(math.inf) == 1.0
    assert conjugate_exponent(2.0) == 2.0
    assert conjugate_exponent(4.0) == pytest.approx(4.0 / 3.0)
    with pytest.raises(DomainError):
        conjugate_exponent(0.5)


def test_dual_norm_vs_brute_force_oracle():
    res = worstcase_Us(geometric(0.5), 12, 2, 0.7, math.inf, tol=1e-10)
    oracle = brute_force_l1_deviation(0.5, 12, 2, 0.7)
    assert res.value == pytest.approx(oracle, abs=1e-9)
    assert res.method == "dual-norm"


def test_sup_norm_case_is_grid_max():
    # s=1 -> s'=inf: the value is (1/pi) sup |K|, so it dominates any grid sample
    seq = geometric(0.5)
    res = worstcase_Us(seq, 15, 3, 0.0, 1.0)
    kern = tail_kernel_evaluator(TailKernelSpec(seq, 15, 3, 0.0))
    t = np.linspace(0.0, 2 * math.pi, 4096)
    assert res.value >= np.max(np.abs(kern(t))) / math.pi - 1e-15


def test_candidate_lower_bound_from_single_harmonic():
    # f_{n-p+1} gives value >= q^{n0} ||sin||_C / (p ||sin||_s)
    q = 0.5
    for s in (1.0, 2.0, math.inf):
        for (n, p) in ((12, 1), (12, 3)):
            res = worstcase_Us(geometric(q), n, p, 0.0, s)
            n0 = n - p + 1
            bound = q ** n0 / (p * cosine_norm(s))
            assert res.value >= bound * (1 - 1e-9)


@pytest.mark.parametrize("s,gap_tol", [(1.0, 0.025), (2.0, 1e-9), (math.inf, 2e-3)])
def test_duality_sandwich(s, gap_tol):
    for seq in (geometric(0.5), neumann(0.5)):
        for (n, p) in ((20, 1), (20, 4)):
            up = worstcase_Us(seq, n, p, 0.0, s)
            lo = worstcase_lower_candidate(seq, n, p, 0.0, s)
            assert lo.value <= up.value * (1 + 1e-9)
            assert up.value - lo.value <= gap_tol * up.value
            assert lo.method == "lower-bound-candidate"


def test_normalized_value_scaling():
    from vpsums.sequences import psi_eval
    seq = neumann(0.4)
    res = worstcase_Us(seq, 30, 5, 0.0, math.inf)
    assert res.value == pytest.approx(res.normalized_value * psi_eval(seq, 26), rel=1e-12)


# --------------------------------------------------------------------------
# modulus-class LP

def test_lp_zero_modulus_is_zero():
    res = worstcase_Homega_lp(geometric(0.5), 10, 2, 0.0, zero_modulus(), lp_grid=128)
    assert res.value == 0.0
    assert res.method == "lp"


def test_lp_scale_equivariance():
    om = power_modulus(0.5)
    base = worstcase_Homega_lp(geometric(0.5), 12, 1, 0.0, om, lp_grid=256,
                               with_refinement=False)
    scaled = worstcase_Homega_lp(geometric(0.5), 12, 1, 0.0, om.scaled(3.0), lp_grid=256,
                                 with_refinement=False)
    assert scaled.value == pytest.approx(3.0 * base.value, rel=1e-9)


def test_lp_monotone_in_omega():
    smaller = power_modulus(0.5).scaled(0.6)
    larger = power_modulus(0.5)
    lo = worstcase_Homega_lp(geometric(0.5), 12, 2, 0.0, smaller, lp_grid=256,
                             with_refinement=False)
    hi = worstcase_Homega_lp(geometric(0.5), 12, 2, 0.0, larger, lp_grid=256,
                             with_refinement=False)
    assert lo.value <= hi.value * (1 + 1e-12)


def test_lp_translation_invariance():
    # rotating the kernel samples by a sub-cell offset moves the optimum by
    # less than the reported discretization estimate
    seq = geometric(0.5)
    om = power_modulus(0.5)
    n, p, ngrid = 12, 1, 256
    res = worstcase_Homega_lp(seq, n, p, 0.0, om, lp_grid=ngrid, with_refinement=True)
    kern = tail_kernel_evaluator(TailKernelSpec(seq, n, p, 0.0), normalized=True)
    shift = 2.0 * math.pi / (3 * ngrid)
    t = np.arange(ngrid) * (2.0 * math.pi / ngrid) + shift
    c = (2.0 / ngrid) * kern(t)
    d = np.arange(1, ngrid // 2 + 1)
    w = om(2.0 * math.pi * d / ngrid)
    value, _ = _solve_modulus_lp(c, w)
    from vpsums.sequences import psi_eval
    assert abs(value * psi_eval(seq, 12) - res.value) < res.error_estimate


def test_lp_refinement_estimate():
    om = power_modulus(0.5)
    res = worstcase_Homega_lp(geometric(0.5), 10, 1, 0.0, om, lp_grid=512)
    finer = worstcase_Homega_lp(geometric(0.5), 10, 1, 0.0, om, lp_grid=1024,
                                with_refinement=False)
    assert abs(finer.value - res.value) <= res.error_estimate
    assert res.lp_grid == 512
    assert res.instance["lp_grid"] == 512


def test_lp_determinism():
    om = power_modulus(0.5)
    a = worstcase_Homega_lp(neumann(0.5), 14, 2, 0.3, om, lp_grid=256, with_refinement=False)
    b = worstcase_Homega_lp(neumann(0.5), 14, 2, 0.3, om, lp_grid=256, with_refinement=False)
    assert a.value == b.value


def test_lp_grid_default_and_validation():
    assert default_lp_grid(20, 4) == max(512, 32 * 17)
    with pytest.raises(DomainError):
        worstcase_Homega_lp(geometric(0.5), 10, 1, 0.0, power_modulus(0.5), lp_grid=32)


def test_lp_row_generation_matches_full_assembly():
    # same optimum as a single solve with every pairwise row materialized
    import scipy.sparse as sp
    from scipy.optimize import linprog

    ngrid = 128
    om = power_modulus(0.5)
    seq = geometric(0.5)
    kern = tail_kernel_evaluator(TailKernelSpec(seq, 9, 2, 0.4), normalized=True)
    t = np.arange(ngrid) * (2.0 * math.pi / ngrid)
    c = (2.0 / ngrid) * kern(t)
    dists = np.arange(1, ngrid // 2 + 1)
    w = om(2.0 * math.pi * dists / ngrid)
    lazy, _ = _solve_modulus_lp(c, w)

    cc = c - np.mean(c)
    rows, rhs = [], []
    for i in range(ngrid):
        for j in range(i + 1, ngrid):
            d = min(j - i, ngrid - (j - i))
            rows.append((i, j, w[d - 1]))
    data, idx, ptr, b = [], [], [0], []
    for i, j, bound in rows:
        data += [1.0, -1.0, -1.0, 1.0]
        idx += [i, j, i, j]
        ptr += [ptr[-1] + 2, ptr[-1] + 4]
        b += [bound, bound]
    a_ub = sp.csr_matrix((data, idx, ptr), shape=(len(rows) * 2, ngrid))
    # pin phi_0 = 0 as the lazy solver does (removes the constant ray)
    bounds = [(0.0, 0.0)] + [(None, None)] * (ngrid - 1)
    res = linprog(-cc, A_ub=a_ub, b_ub=np.asarray(b), bounds=bounds, method="highs")
    assert res.status == 0
    assert lazy == pytest.approx(float(np.dot(cc, res.x)), abs=1e-10)


def test_lp_all_pairwise_constraints_hold_at_optimum():
    om = power_modulus(0.5)
    ngrid = 256
    seq = geometric(0.5)
    kern = tail_kernel_evaluator(TailKernelSpec(seq, 10, 2, 0.0), normalized=True)
    t = np.arange(ngrid) * (2.0 * math.pi / ngrid)
    c = (2.0 / ngrid) * kern(t)
    d = np.arange(1, ngrid // 2 + 1)
    w = om(2.0 * math.pi * d / ngrid)
    _, phi = _solve_modulus_lp(c, w)
    worst = 0.0
    for dd in range(1, ngrid // 2 + 1):
        worst = max(worst, float(np.max(np.abs(phi - np.roll(phi, -dd)) - w[dd - 1])))
    assert worst <= 1e-9


# --------------------------------------------------------------------------
# two-sided normalized bounds

def test_bounds_check_sup_norm_candidate():
    rep = normalized_bounds_check(geometric(0.5), 20, 2, 0.0, s=math.inf)
    assert rep.candidate_lower == 1.0  # ||sin||_C / ||sin||_inf
    assert rep.lower_bound_holds
    assert rep.normalized >= 1.0 - 1e-9
    assert rep.fitted_upper_constant == pytest.approx(rep.normalized * 0.25, rel=1e-12)


def test_bounds_check_small_q_limit():
    # q -> 0: p q^{-n0} E -> ||cos||_{s'} / pi
    for s, s_prime in ((math.inf, 1.0), (2.0, 2.0)):
        target = cosine_norm(s_prime) / math.pi
        prev_err = None
        for q in (0.1, 0.02):
            rep = normalized_bounds_check(geometric(q), 10, 2, 0.0, s=s)
            err = abs(rep.normalized - target) / target
            if prev_err is not None:
                assert err < prev_err
            prev_err = err
        assert prev_err < 0.05


def test_bounds_check_modulus_class():
    rep = normalized_bounds_check(geometric(0.5), 12, 1, 0.0, omega=power_modulus(0.5),
                                  lp_grid=256)
    assert rep.lower_bound_holds
    assert rep.omega_at_scale == pytest.approx(math.sqrt(1.0 / 12.0))
    assert rep.normalized > 0
    assert rep.fitted_upper_constant > 0


def test_bounds_check_requires_geometric():
    with pytest.raises(DomainError):
        normalized_bounds_check(neumann(0.5), 10, 1, 0.0, s=2.0)
    with pytest.raises(DomainError):
        normalized_bounds_check(geometric(0.5), 10, 1, 0.0)


def test_polyharmonic_m1_matches_geometric():
    a = worstcase_Us(polyharmonic(0.5, 1), 14, 3, 0.0, math.inf)
    b = worstcase_Us(geometric(0.5), 14, 3, 0.0, math.inf)
    assert a.value == b.value


def test_polyharmonic_dual_norm_vs_riemann_oracle():
    # m=2 series kernel through the exact L1 path, against direct Riemann
    from vpsums.sequences import psi_eval
    seq = polyharmonic(0.4, 2)
    n, p, beta = 11, 3, 0.3
    res = worstcase_Us(seq, n, p, beta, math.inf, tol=1e-10)
    m = 1 << 20
    t = (np.arange(m) + 0.5) * (2.0 * math.pi / m)
    theta = beta * math.pi / 2.0
    acc = np.zeros(m)
    for k in range(n - p + 1, 140):
        acc += min(1.0, (k - n + p) / p) * psi_eval(seq, k) * np.cos(k * t - theta)
    oracle = 2.0 * float(np.mean(np.abs(acc)))
    assert res.value == pytest.approx(oracle, rel=1e-8)


def test_general_exponent_dual_norm_vs_riemann_oracle():
    # s = 4 -> s' = 4/3 exercises the periodic-rule branch on |K|^{4/3}
    seq = geometric(0.5)
    n, p = 10, 2
    res = worstcase_Us(seq, n, p, 0.0, 4.0, tol=1e-8)
    m = 1 << 21
    t = (np.arange(m) + 0.5) * (2.0 * math.pi / m)
    acc = np.zeros(m)
    k, qq = 9, 0.5 ** 9
    while qq > 1e-18 * 0.5 ** 9:
        acc += min(1.0, (k - n + p) / p) * qq * np.cos(k * t)
        k += 1
        qq *= 0.5
    s_prime = 4.0 / 3.0
    oracle = (np.mean(np.abs(acc) ** s_prime) * 2 * math.pi) ** (1.0 / s_prime) / math.pi
    assert res.value == pytest.approx(float(oracle), rel=1e-6)
