"""Asymptotic main terms, remainder envelopes, and the constants they need.

Every O(1) factor in the underlying asymptotic equalities is existential, so
envelopes are reported as explicit bracket values and never asserted equal
to one; ratio diagnostics live in AsymptoticReport.
"""
import math
import warnings
from dataclasses import dataclass

import numpy as np

from vpsums import sequences as seqs
from vpsums.errors import DomainError
from vpsums.kernels import TailKernelSpec
from vpsums.moduli import warn_if_not_divergent
from vpsums.quadrature import cosine_norm, lp_norm_periodic, omega_sine_integral
from vpsums.sequences import epsilon_value, psi_eval
from vpsums.worstcase import conjugate_exponent, worstcase_Homega_lp, worstcase_Us


@dataclass(frozen=True)
class AsymptoticReport:
    main_term: float
    remainder_envelope: float
    exact_value: float = None
    ratio: float = None
    params: dict = None


def elliptic_K(rho, tol=1e-15):
    """Complete elliptic integral of the first kind, K(rho), by AGM iteration.

    K(rho) = pi / (2 AGM(1, sqrt(1-rho^2))); quadratic convergence makes the
    stopping rule |a-b| <= tol*a reach ~1e-16 in at most a dozen sweeps.
    """
    if not 0.0 <= rho < 1.0:
        raise DomainError(f"elliptic modulus must lie in [0,1), got {rho}")
    if rho > 1.0 - 1e-8:
        warnings.warn(
            f"elliptic_K is ill-conditioned for rho={rho!r} (logarithmic blow-up near 1)",
            stacklevel=2,
        )
    a = 1.0
    b = math.sqrt((1.0 - rho) * (1.0 + rho))
    for _ in range(64):
        if abs(a - b) <= tol * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return math.pi / (2.0 * a)


def K_qp(q, p, s_prime, tol=1e-12):
    """The asymptotic constant 2^{-1/s'} || sqrt(1-2q^p cos pt+q^{2p}) / (1-2q cos t+q^2) ||_{s'}.

    The norm runs over [0, 2pi]; for s'=1 evenness halves it onto [0, pi],
    which is how the elliptic identity is usually displayed.
    """
    if not 0.0 < q < 1.0:
        raise DomainError(f"q must lie in (0,1), got {q}")
    if p < 1:
        raise DomainError("p must be >= 1")
    qp = q ** p

    def ratio(t):
        num = np.sqrt(1.0 - 2.0 * qp * np.cos(p * t) + qp * qp)
        den = (1.0 - q) ** 2 + 4.0 * q * np.sin(0.5 * t) ** 2
        return num / den

    scale = 1.0 if math.isinf(s_prime) else 2.0 ** (-1.0 / s_prime)
    norm = lp_norm_periodic(ratio, s_prime, tol=tol, min_panels=1024, freq_hint=p)
    return scale * norm.value


def K_qp_elliptic(q, p):
    """Closed form of K_qp(q, p, 1): 2 (1-q^{2p})/(1-q^2) K(q^p)."""
    return 2.0 * (1.0 - q ** (2 * p)) / (1.0 - q * q) * elliptic_K(q ** p)


def sigma_exponent(s_prime, p):
    """Power of 1/(1-q) in the U_s remainder."""
    if not s_prime >= 1:
        raise DomainError(f"s' must be in [1, inf], got {s_prime}")
    if p < 1:
        raise DomainError("p must be >= 1")
    if p == 1:
        return 1 if s_prime == 1 else 2
    return 3


def gamma_exponent(p):
    """Power of 1/(1-q) in the H_omega remainder."""
    if p < 1:
        raise DomainError("p must be >= 1")
    return 2 if p == 1 else 3


def _min_p_factor(q, p):
    return min(p, 1.0 / (1.0 - q))


def thm2_main_term(seq, n, p, beta, s, tol=1e-12):
    """(psi(n-p+1)/p) (||cos||_{s'} / pi^{1+1/s'}) K_qp(q, p, s')."""
    TailKernelSpec(seq, n, p, beta)  # validates p <= n
    n0 = n - p + 1
    s_prime = conjugate_exponent(s)
    pi_pow = math.pi if math.isinf(s_prime) else math.pi ** (1.0 + 1.0 / s_prime)
    return psi_eval(seq, n0) / p * cosine_norm(s_prime) / pi_pow * K_qp(seq.q, p, s_prime, tol=tol)


def thm2_remainder_envelope(seq, n, p, s):
    """(psi(n0)/p) [ 1/(n0 (1-q)^sigma) + (eps_{n0}/(1-q)^2) min{p, 1/(1-q)} ]."""
    n0 = n - p + 1
    q = seq.q
    sigma = sigma_exponent(conjugate_exponent(s), p)
    eps = epsilon_value(seq, n0)
    bracket = 1.0 / (n0 * (1.0 - q) ** sigma) + eps / (1.0 - q) ** 2 * _min_p_factor(q, p)
    return psi_eval(seq, n0) / p * bracket


def thm3_main_term(seq, n, p, beta, omega, tol=1e-12):
    """(psi(n0)/p) (4/pi^2) ((1-q^{2p})/(1-q^2)) K(q^p) * integral_0^{pi/2} omega(2t/n0) sin t dt."""
    TailKernelSpec(seq, n, p, beta)
    if not omega.convex:
        warnings.warn("omega is not flagged convex; the modulus-class main term assumes convexity",
                      stacklevel=2)
    warn_if_not_divergent(omega)
    n0 = n - p + 1
    q = seq.q
    integral = omega_sine_integral(omega, n0, tol=tol).value
    return (psi_eval(seq, n0) / p * (4.0 / math.pi ** 2)
            * (1.0 - q ** (2 * p)) / (1.0 - q * q) * elliptic_K(q ** p) * integral)


def thm3_remainder_envelope(seq, n, p, omega):
    """(psi(n0)/p) [ omega(pi)/((1-q)^gamma n0) + (eps_{n0}/(1-q)^2) min{p, 1/(1-q)} omega(1/n0) ]."""
    n0 = n - p + 1
    q = seq.q
    eps = epsilon_value(seq, n0)
    bracket = (float(omega(math.pi)) / ((1.0 - q) ** gamma_exponent(p) * n0)
               + eps / (1.0 - q) ** 2 * _min_p_factor(q, p) * float(omega(1.0 / n0)))
    return psi_eval(seq, n0) / p * bracket


def thm1_transfer(seq, n, p, beta, s=None, omega=None, tol=1e-9, lp_grid=None):
    """Transfer residual between the psi-class and its geometric companion.

    main = psi(n0) E(geometric)/q^{n0}; exact = E(psi class); the envelope is
    psi(n0) (eps_{n0}/(p (1-q)^2)) min{p, 1/(1-q)} (times omega(1/n0) for the
    modulus classes).  |exact - main| / envelope is the observed transfer
    constant, uniformly bounded by the underlying theorem.
    """
    if (s is None) == (omega is None):
        raise DomainError("specify exactly one of s / omega")
    n0 = n - p + 1
    q = seq.q
    companion = seqs.geometric(q)
    if s is not None:
        exact = worstcase_Us(seq, n, p, beta, s, tol=tol)
        base = worstcase_Us(companion, n, p, beta, s, tol=tol)
        omega_factor = 1.0
        params = {"s": s}
    else:
        exact = worstcase_Homega_lp(seq, n, p, beta, omega, lp_grid=lp_grid, with_refinement=False)
        base = worstcase_Homega_lp(companion, n, p, beta, omega, lp_grid=lp_grid, with_refinement=False)
        omega_factor = float(omega(1.0 / n0))
        params = {"omega": omega.label()}
    lead = psi_eval(seq, n0)
    eps = epsilon_value(seq, n0)
    main = lead * base.normalized_value  # E(geo)/q^{n0} is its normalized value
    envelope = lead * eps / (p * (1.0 - q) ** 2) * _min_p_factor(q, p) * omega_factor
    params.update({"seq": seq.label(), "n": n, "p": p, "beta": beta})
    return AsymptoticReport(
        main_term=main,
        remainder_envelope=envelope,
        exact_value=exact.value,
        ratio=exact.value / main if main != 0 else None,
        params=params,
    )


def _corollary_prefactor(seq, n0, p):
    if seq.family == seqs.NEUMANN:
        return seq.q ** n0 / (p * n0)
    return psi_eval(seq, n0) / p


def corollary_eval(seq, n, p, beta, s=None, omega=None, tol=1e-12, with_exact=False,
                   exact_tol=1e-9, lp_grid=None):
    """Corollary composition for the Neumann / polyharmonic families.

    Main term as in the U_s or H_omega asymptotics with the family's
    psi(n0)/p prefactor; the remainder envelope replaces eps_{n0} by its
    family closed form (q/(n0+1) for Neumann, (2m-3)q/n0-scale for the
    polyharmonic family), keeping the corollary-specific 1/n0 grouping.
    """
    if seq.family not in (seqs.NEUMANN, seqs.POLYHARMONIC):
        raise DomainError("corollaries cover the Neumann and polyharmonic families")
    if (s is None) == (omega is None):
        raise DomainError("specify exactly one of s / omega")
    n0 = n - p + 1
    q = seq.q
    pref = _corollary_prefactor(seq, n0, p)
    eps_scale = q if seq.family == seqs.NEUMANN else seq.m * q
    if s is not None:
        s_prime = conjugate_exponent(s)
        pi_pow = math.pi if math.isinf(s_prime) else math.pi ** (1.0 + 1.0 / s_prime)
        main = pref * cosine_norm(s_prime) / pi_pow * K_qp(q, p, s_prime, tol=tol)
        bracket = (1.0 / (1.0 - q) ** sigma_exponent(s_prime, p)
                   + eps_scale / (1.0 - q) ** 2 * _min_p_factor(q, p))
        envelope = pref / n0 * bracket
        params = {"s": s}
    else:
        warn_if_not_divergent(omega)
        integral = omega_sine_integral(omega, n0, tol=tol).value
        main = (pref * (4.0 / math.pi ** 2) * (1.0 - q ** (2 * p)) / (1.0 - q * q)
                * elliptic_K(q ** p) * integral)
        bracket = (float(omega(math.pi)) / (1.0 - q) ** gamma_exponent(p)
                   + eps_scale / (1.0 - q) ** 2 * _min_p_factor(q, p) * float(omega(1.0 / n0)))
        envelope = pref / n0 * bracket
        params = {"omega": omega.label()}
    params.update({"seq": seq.label(), "n": n, "p": p, "beta": beta})
    exact = None
    if with_exact:
        if s is not None:
            exact = worstcase_Us(seq, n, p, beta, s, tol=exact_tol).value
        else:
            exact = worstcase_Homega_lp(seq, n, p, beta, omega, lp_grid=lp_grid,
                                        with_refinement=False).value
    return AsymptoticReport(
        main_term=main,
        remainder_envelope=envelope,
        exact_value=exact,
        ratio=exact / main if (exact is not None and main != 0) else None,
        params=params,
    )


HIGH_QP_REGIME = 0.1


def vanishing_qp_main_term(seq, n, p):
    """Main term of the s=infty, p->infty simplification 4/(pi (1-q^2)) * psi(n0)/p.

    Valid as a joint limit n-p -> infty and p -> infty; instances with
    q^p > HIGH_QP_REGIME are flagged as outside the regime.
    """
    q = seq.q
    n0 = n - p + 1
    if q ** p > HIGH_QP_REGIME:
        warnings.warn(
            f"q^p = {q ** p:.3g} > {HIGH_QP_REGIME}; the vanishing-q^p form is "
            "outside its regime here", stacklevel=2)
    return psi_eval(seq, n0) / p * 4.0 / (math.pi * (1.0 - q * q))


def thm2_report(seq, n, p, beta, s, with_exact=False, tol=1e-12, exact_tol=1e-9):
    main = thm2_main_term(seq, n, p, beta, s, tol=tol)
    envelope = thm2_remainder_envelope(seq, n, p, s)
    exact = worstcase_Us(seq, n, p, beta, s, tol=exact_tol).value if with_exact else None
    return AsymptoticReport(
        main_term=main, remainder_envelope=envelope, exact_value=exact,
        ratio=exact / main if (exact is not None and main != 0) else None,
        params={"seq": seq.label(), "n": n, "p": p, "beta": beta, "s": s},
    )


def thm3_report(seq, n, p, beta, omega, with_exact=False, tol=1e-12, lp_grid=None):
    main = thm3_main_term(seq, n, p, beta, omega, tol=tol)
    envelope = thm3_remainder_envelope(seq, n, p, omega)
    exact = None
    if with_exact:
        exact = worstcase_Homega_lp(seq, n, p, beta, omega, lp_grid=lp_grid,
                                    with_refinement=False).value
    return AsymptoticReport(
        main_term=main, remainder_envelope=envelope, exact_value=exact,
        ratio=exact / main if (exact is not None and main != 0) else None,
        params={"seq": seq.label(), "n": n, "p": p, "beta": beta, "omega": omega.label()},
    )
