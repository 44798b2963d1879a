import math

import pytest

from vpsums.errors import DomainError
from vpsums.sequences import (
    epsilon_tail,
    epsilon_value,
    geometric,
    log_psi,
    neumann,
    parse_sequence_spec,
    polyharmonic,
    product_ratio_gap,
    psi_eval,
    psi_ratio,
    user_table,
)

ALL_FAMILIES = [geometric(0.5), neumann(0.5), polyharmonic(0.5, 3),
                user_table([0.5 ** k / k for k in range(1, 400)], 0.5)]


def test_psi_eval_examples():
    assert psi_eval(geometric(0.5), 3) == 0.125
    assert psi_eval(neumann(0.5), 2) == 0.125
    # m=1 polyharmonic collapses to the plain geometric coefficients
    assert psi_eval(polyharmonic(0.5, 1), 4) == 0.0625
    # m=2, k=1: q(1 + (1-q^2)/2 * k) = (1/2)(1 + 3/8) = 11/16
    assert psi_eval(polyharmonic(0.5, 2), 1) == pytest.approx(0.6875, abs=1e-15)


def test_psi_domain_errors():
    with pytest.raises(DomainError):
        psi_eval(geometric(0.5), 0)
    with pytest.raises(DomainError):
        psi_eval(user_table([1.0, 0.5, 0.25], 0.5), 4)
    with pytest.raises(DomainError):
        geometric(1.0)
    with pytest.raises(DomainError):
        geometric(0.0)


def test_log_psi_matches_direct_values():
    for seq in ALL_FAMILIES:
        for k in (1, 2, 7, 40):
            assert math.exp(log_psi(seq, k)) == pytest.approx(psi_eval(seq, k), rel=1e-13)


def test_log_psi_survives_underflow():
    seq = geometric(0.5)
    k = 2000  # q^k underflows well before this
    assert psi_eval(seq, k) == 0.0
    assert log_psi(seq, k) == pytest.approx(k * math.log(0.5), rel=1e-15)


def test_epsilon_tail_examples():
    assert epsilon_tail(geometric(0.7), 10).value == 0.0
    # Neumann closed form q/(m+1)
    tail = epsilon_tail(neumann(0.5), 9)
    assert tail.value == pytest.approx(0.05, abs=1e-16)
    # polyharmonic observed sup below the certified cap (2m-3) q / start
    tail = epsilon_tail(polyharmonic(0.5, 2), 20)
    assert tail.certified_bound == pytest.approx(0.025, abs=1e-16)
    assert tail.value <= tail.certified_bound


def test_epsilon_tail_monotone_in_start():
    for seq in ALL_FAMILIES:
        values = [epsilon_tail(seq, m).value for m in range(1, 40)]
        assert all(values[i + 1] <= values[i] + 1e-15 for i in range(len(values) - 1))


def test_epsilon_horizon_validation():
    with pytest.raises(DomainError):
        epsilon_tail(polyharmonic(0.5, 2), 10, horizon=5)
    with pytest.raises(DomainError):
        epsilon_tail(geometric(0.5), 0)


def test_neumann_scan_never_exceeds_closed_form():
    for q in (0.2, 0.5, 0.8):
        seq = neumann(q)
        for m in (1, 3, 10):
            closed = q / (m + 1)
            scan = max(abs(psi_ratio(seq, k) - q) for k in range(m, 20 * m + 1))
            assert scan <= closed + 1e-15


def test_product_ratio_gap_examples():
    assert product_ratio_gap(geometric(0.3), 5, 7) == 0.0
    # Neumann m=4, k=1: |q*4/5 - q| = q/5 and the bound holds with equality
    gap = product_ratio_gap(neumann(0.5), 4, 1)
    eps = epsilon_value(neumann(0.5), 4)
    assert gap == pytest.approx(0.1, abs=1e-15)
    assert gap == pytest.approx((0.5 + eps) - 0.5, abs=1e-15)


@pytest.mark.parametrize("seq", ALL_FAMILIES, ids=lambda s: s.label())
def test_product_ratio_gap_bound(seq):
    for m in (1, 2, 5, 13, 27, 50):
        eps = epsilon_value(seq, m)
        for k in (1, 2, 7, 19, 50):
            if seq.max_index is not None and m + k > seq.max_index:
                continue
            gap = product_ratio_gap(seq, m, k)
            assert gap <= (seq.q + eps) ** k - seq.q ** k + 1e-14


def test_ratio_deviation_shrinks_along_k():
    for seq in (neumann(0.5), polyharmonic(0.5, 3), polyharmonic(0.3, 2)):
        devs = [abs(psi_ratio(seq, k) - seq.q) for k in (10, 100, 1000)]
        assert devs[0] > devs[1] > devs[2]


def test_polyharmonic_certified_cap_on_scan():
    for m in (2, 3, 4):
        for q in (0.3, 0.7):
            seq = polyharmonic(q, m)
            for start in (5, 50):
                tail = epsilon_tail(seq, start, horizon=20 * start)
                assert tail.value <= (2 * m - 3) * q / start + 1e-15


def test_parse_sequence_specs(tmp_path):
    assert parse_sequence_spec("geometric:q=0.5") == geometric(0.5)
    assert parse_sequence_spec("neumann:q=0.25") == neumann(0.25)
    assert parse_sequence_spec("polyharmonic:q=0.5,m=3") == polyharmonic(0.5, 3)
    path = tmp_path / "table.txt"
    path.write_text("q=0.5\n1.0\n0.5\n0.26\n")
    seq = parse_sequence_spec(f"table:@{path}")
    assert seq.q == 0.5
    assert seq.table == (1.0, 0.5, 0.26)
    with pytest.raises(DomainError):
        parse_sequence_spec("exp:q=0.5")
    with pytest.raises(DomainError):
        parse_sequence_spec("geometric:z=0.5")


def test_user_table_needs_positive_entries():
    with pytest.raises(DomainError):
        user_table([1.0, -0.5], 0.5)
    with pytest.raises(DomainError):
        user_table([1.0], 0.5)
