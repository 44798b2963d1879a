"""Worst-case uniform deviations of de la Vallee Poussin sums on classes of
periodic functions with analytic-type coefficient sequences, plus the
asymptotic main terms and remainder envelopes they converge to.
"""
from vpsums._series import BACKEND
from vpsums.asymptotics import (
    AsymptoticReport,
    K_qp,
    K_qp_elliptic,
    corollary_eval,
    elliptic_K,
    gamma_exponent,
    sigma_exponent,
    thm1_transfer,
    thm2_main_term,
    thm2_remainder_envelope,
    thm3_main_term,
    thm3_remainder_envelope,
)
from vpsums.errors import AccuracyError, ConvergenceError, DomainError
from vpsums.fourier import (
    TrigPoly,
    convolve_with_kernel,
    deviation,
    partial_sum,
    psi_beta_derivative,
    tau_weight,
    vp_poly,
    vp_sum,
)
from vpsums.kernels import (
    KernelSpec,
    TailKernelSpec,
    kernel_eval,
    residual_kernel,
    vp_tail_kernel,
)
from vpsums.moduli import (
    ModulusOfContinuity,
    linear_modulus,
    log_modulus,
    parse_omega_spec,
    power_modulus,
    user_modulus,
    zero_modulus,
)
from vpsums.quadrature import QuadratureResult, integrate, lp_norm_periodic, omega_sine_integral
from vpsums.sequences import (
    EpsilonTail,
    PsiSequence,
    epsilon_tail,
    geometric,
    neumann,
    parse_sequence_spec,
    polyharmonic,
    product_ratio_gap,
    psi_eval,
    user_table,
)
from vpsums.worstcase import (
    WorstCaseResult,
    normalized_bounds_check,
    worstcase_Homega_lp,
    worstcase_lower_candidate,
    worstcase_Us,
)

__version__ = "0.1.0"
