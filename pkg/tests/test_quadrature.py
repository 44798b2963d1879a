import math

import numpy as np
import pytest

from vpsums.errors import AccuracyError, DomainError
from vpsums.kernels import TailKernelSpec, tail_kernel_evaluator
from vpsums.moduli import linear_modulus, power_modulus, zero_modulus
from vpsums.quadrature import cosine_norm, integrate, lp_norm_periodic, omega_sine_integral
from vpsums.sequences import geometric

# frozen 1e6-panel trapezoid oracle values
SQRT_T_SIN_T = 0.977451424291412          # integral_0^{pi/2} sqrt(t) sin t dt
SQRT_2T_SIN_T = 1.3823250607938131        # integral_0^{pi/2} sqrt(2t) sin t dt


def test_cos_norms():
    assert lp_norm_periodic(np.cos, 1.0).value == pytest.approx(4.0, rel=1e-10)
    assert lp_norm_periodic(np.cos, 2.0).value == pytest.approx(math.sqrt(math.pi), rel=1e-12)
    assert lp_norm_periodic(np.cos, math.inf).value == pytest.approx(1.0, rel=1e-12)


def test_cosine_norm_closed_and_quadrature():
    assert cosine_norm(1) == 4.0
    assert cosine_norm(2) == math.sqrt(math.pi)
    assert cosine_norm(math.inf) == 1.0
    # s=4: integral |cos|^4 = 3pi/4
    assert cosine_norm(4.0) == pytest.approx((0.75 * math.pi) ** 0.25, rel=1e-10)


def test_integrate_examples():
    res = integrate(math.sin, 0.0, math.pi / 2.0, tol=1e-12)
    assert res.value == pytest.approx(1.0, abs=1e-12)
    assert res.evaluations > 0
    res = integrate(lambda t: math.sqrt(t) * math.sin(t), 0.0, math.pi / 2.0, tol=1e-10)
    assert res.value == pytest.approx(SQRT_T_SIN_T, abs=1e-8)
    assert integrate(lambda t: 0.0, 1.0, 3.0).value == 0.0


def test_integrate_validation_and_accuracy_error():
    with pytest.raises(DomainError):
        integrate(math.sin, 1.0, 1.0)
    with pytest.raises(DomainError):
        integrate(math.sin, 0.0, 1.0, tol=0.0)
    with pytest.raises(AccuracyError) as err:
        integrate(lambda t: math.sqrt(abs(t)), 0.0, 1.0, tol=1e-14, max_depth=3)
    assert err.value.result is not None
    assert err.value.result.value == pytest.approx(2.0 / 3.0, abs=1e-3)


def test_omega_sine_integral():
    lin = linear_modulus()
    for n in (1, 4, 17):
        assert omega_sine_integral(lin, n).value == pytest.approx(2.0 / n, abs=1e-11)
    assert omega_sine_integral(power_modulus(0.5), 1, tol=1e-10).value == pytest.approx(
        SQRT_2T_SIN_T, abs=1e-9)
    assert omega_sine_integral(zero_modulus(), 5).value == 0.0
    with pytest.raises(DomainError):
        omega_sine_integral(lin, 0)


def test_norm_monotone_in_s_after_normalization(rng):
    # Holder on the normalized measure: ||g||_s / (2pi)^{1/s} is nondecreasing
    from conftest import random_trig_poly
    for _ in range(5):
        f = random_trig_poly(rng, 8)
        vals = []
        for s in (1.0, 2.0, 4.0, math.inf):
            v = lp_norm_periodic(f, s, tol=1e-9).value
            scale = 1.0 if math.isinf(s) else (2 * math.pi) ** (1.0 / s)
            vals.append(v / scale)
        assert all(vals[i] <= vals[i + 1] * (1 + 1e-8) for i in range(len(vals) - 1))


def test_triangle_inequality(rng):
    from conftest import random_trig_poly
    for s in (1.0, 2.0, math.inf):
        for _ in range(3):
            f = random_trig_poly(rng, 6)
            g = random_trig_poly(rng, 6)
            fg = lambda t: f(t) + g(t)
            lhs = lp_norm_periodic(fg, s, tol=1e-9).value
            rhs = (lp_norm_periodic(f, s, tol=1e-9).value
                   + lp_norm_periodic(g, s, tol=1e-9).value)
            assert lhs <= rhs * (1 + 1e-8)


def test_refinement_error_estimate_on_kernel_integrand():
    # halving the mesh changes the value by less than the reported estimate
    kern = tail_kernel_evaluator(TailKernelSpec(geometric(0.5), 16, 2, 0.0), normalized=True)
    for s in (1.0, 2.0):
        coarse = lp_norm_periodic(kern, s, tol=1e-6, min_panels=512)
        fine = lp_norm_periodic(kern, s, tol=1e-8, min_panels=512)
        assert abs(fine.value - coarse.value) <= coarse.abs_error_estimate + 1e-12


def test_sup_norm_uses_polish():
    # grid max alone underestimates an off-grid peak; polish recovers it
    g = lambda t: np.cos(t - 0.3) ** 2
    res = lp_norm_periodic(g, math.inf, min_panels=64)
    assert res.value == pytest.approx(1.0, abs=1e-10)


def test_norm_input_validation():
    with pytest.raises(DomainError):
        lp_norm_periodic(np.cos, 0.5)
    with pytest.raises(DomainError):
        lp_norm_periodic(np.cos, 2.0, tol=-1.0)
