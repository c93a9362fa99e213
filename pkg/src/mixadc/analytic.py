"""Closed-form approximate uplink rates for the mixed-ADC MRC receiver.

All expressions are large-antenna approximations of the ergodic rate lower
bound ``E{log2(1 + SINR)}``: the expectation is moved inside the logarithm
and the channel moments are evaluated in closed form.  Perfect-CSI and
imperfect-CSI forms are provided together with their Rayleigh special cases,
the strong-LoS limit, and the power-scaling limits.

Conventions: all powers and Rician factors are linear (dB conversion happens
at the CLI/service boundary only); logs are base 2; rates are per-user in
bits/s/Hz.  The two ADC groups are treated as independent sub-arrays, so
deterministic LoS cross-products between the groups are dropped; the Monte
Carlo path keeps the physically contiguous array.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .quantization import AqnmParams
from .scenario import SystemConfig, UserScenario

__all__ = [
    "RateReport",
    "phi",
    "rate_imperfect_csi",
    "rate_imperfect_rayleigh",
    "rate_limit_imperfect_constant",
    "rate_limit_power_scaled_imperfect",
    "rate_limit_power_scaled_perfect",
    "rate_perfect_K_infinity",
    "rate_perfect_csi",
    "rate_perfect_rayleigh",
]

_PHI_SINGULARITY = 1e-12


@dataclass(frozen=True)
class RateReport:
    """Per-user and sum rates with the method that produced them.

    ``method`` is one of ``analytic-perfect``, ``analytic-imperfect``,
    ``mc-perfect``, ``mc-imperfect`` or ``limit-<name>``.  ``mc_stderr`` and
    ``sum_rate_stderr`` are set for Monte Carlo reports only.
    """

    per_user_rate: tuple
    sum_rate: float
    method: str
    mc_stderr: tuple | None = None
    sum_rate_stderr: float | None = None

    def __post_init__(self):
        rates = tuple(float(r) for r in self.per_user_rate)
        if any(not math.isfinite(r) or r < 0 for r in rates):
            raise ValueError("per-user rates must be finite and non-negative")
        object.__setattr__(self, "per_user_rate", rates)
        object.__setattr__(self, "sum_rate", float(sum(rates)))
        if self.mc_stderr is not None:
            object.__setattr__(self, "mc_stderr", tuple(float(s) for s in self.mc_stderr))

    @classmethod
    def from_per_user(cls, rates, method, mc_stderr=None, sum_rate_stderr=None):
        return cls(tuple(rates), 0.0, method, mc_stderr, sum_rate_stderr)


def phi(theta_n: float, theta_i: float, M_j: int, d_over_lambda: float = 0.5) -> float:
    """Coherent alignment of two users' steering vectors on an M_j-element array.

    Dirichlet-kernel ratio ``sin(M_j*x) / sin(x)`` with ``x = pi *
    d_over_lambda * (sin(theta_n) - sin(theta_i))``; bounded by M_j in
    magnitude and continuously extended to M_j when the two angles have equal
    sines.
    """
    if M_j < 0:
        raise ValueError("M_j must be non-negative")
    x = np.pi * d_over_lambda * (math.sin(theta_n) - math.sin(theta_i))
    s = math.sin(x)
    if abs(s) < _PHI_SINGULARITY:
        return float(M_j)
    return math.sin(M_j * x) / s


def _unpack(scenario: UserScenario, config: SystemConfig, aqnm: AqnmParams):
    return (
        scenario.beta,
        scenario.theta,
        scenario.K,
        config.M0,
        config.M1,
        config.p_u,
        aqnm.alpha,
        aqnm.rho,
        config.d_over_lambda,
    )


def rate_perfect_csi(scenario: UserScenario, config: SystemConfig, aqnm: AqnmParams) -> RateReport:
    """Approximate per-user rate with perfect CSI over Rician fading.

    Derivation sketch per user n: the desired-signal moment is
    ``p_u*beta_n*[(2K+1)(M0 + a^2 M1) + (K+1)^2 (M0 + a M1)^2]`` and the
    denominator collects interference (per-interferer second moments of the
    combined MRC products), the AWGN term ``(K+1)^2 (M0 + a M1)``, and the
    quantization-noise moment ``a*rho*p_u*Delta2``.
    """
    beta, theta, K, M0, M1, p_u, a, rho, dol = _unpack(scenario, config, aqnm)
    N = scenario.n_users
    rates = []
    for n in range(N):
        Kn, bn = K[n], beta[n]
        num = p_u * bn * ((2 * Kn + 1) * (M0 + a * a * M1) + (Kn + 1) ** 2 * (M0 + a * M1) ** 2)
        interference = 0.0
        others = 0.0
        for i in range(N):
            if i == n:
                continue
            Ki, bi = K[i], beta[i]
            p0 = phi(theta[n], theta[i], M0, dol)
            p1 = phi(theta[n], theta[i], M1, dol)
            d0 = (Kn * Ki * p0 * p0 + M0 * (Kn + Ki + 1)) / (Ki + 1)
            d1 = (Kn * Ki * p1 * p1 + M1 * (Kn + Ki + 1)) / (Ki + 1)
            interference += bi * (d0 + a * a * d1)
            others += bi
        quant = M1 * (bn * (Kn * Kn + 4 * Kn + 2) + (Kn + 1) ** 2 * others)
        den = p_u * (Kn + 1) * interference + (Kn + 1) ** 2 * (M0 + a * M1) + a * rho * p_u * quant
        rates.append(math.log2(1.0 + num / den))
    return RateReport.from_per_user(rates, "analytic-perfect")


def rate_perfect_rayleigh(scenario: UserScenario, config: SystemConfig, aqnm: AqnmParams) -> RateReport:
    """Rayleigh (K = 0) special case of the perfect-CSI rate.

    Written in terms of M, kappa, alpha and rho: with the per-antenna
    effective gain ``e = alpha + rho*kappa``,

        SINR_n = beta_n * (M*e + (alpha^2 + rho*kappa*(1+alpha)) / e)
                 / (1/p_u + sum_{i != n} beta_i + 2*alpha*rho*(1-kappa)*beta_n / e)

    The second numerator term is O(1/M) relative to the first; keeping it
    makes this expression algebraically identical to the general Rician form
    evaluated at K = 0 (the identity the validation suite checks to 1e-10).
    Ignores the scenario's K values by construction.
    """
    beta = scenario.beta
    M, kappa = config.M, config.kappa
    p_u, a, rho = config.p_u, aqnm.alpha, aqnm.rho
    e = a + rho * kappa
    correction = (a * a + rho * kappa * (1.0 + a)) / e
    total = float(np.sum(beta))
    rates = []
    for n in range(scenario.n_users):
        bn = beta[n]
        num = bn * (M * e + correction)
        den = 1.0 / p_u + (total - bn) + 2.0 * a * rho * (1.0 - kappa) * bn / e
        rates.append(math.log2(1.0 + num / den))
    return RateReport.from_per_user(rates, "limit-rayleigh-perfect")


def rate_perfect_K_infinity(scenario: UserScenario, config: SystemConfig, aqnm: AqnmParams) -> RateReport:
    """Strong-LoS limit of the perfect-CSI rate (all Rician factors -> inf).

    Only the steering-vector geometry survives: interference reduces to the
    squared alignment terms and the quantization noise to the total received
    LoS power on the low-resolution group.  The scenario's K values are
    ignored (this is the limit, not a finite-K evaluation).
    """
    beta, theta, _, M0, M1, p_u, a, rho, dol = _unpack(scenario, config, aqnm)
    N = scenario.n_users
    total = float(np.sum(beta))
    rates = []
    for n in range(N):
        bn = beta[n]
        num = p_u * bn * (M0 + a * M1) ** 2
        interference = 0.0
        for i in range(N):
            if i == n:
                continue
            p0 = phi(theta[n], theta[i], M0, dol)
            p1 = phi(theta[n], theta[i], M1, dol)
            interference += beta[i] * (p0 * p0 + a * a * p1 * p1)
        den = p_u * interference + (M0 + a * M1) + a * rho * p_u * M1 * total
        rates.append(math.log2(1.0 + num / den))
    return RateReport.from_per_user(rates, "limit-K-infinity")


def rate_limit_power_scaled_perfect(E_u: float, beta_n: float, kappa: float, aqnm: AqnmParams) -> float:
    """Rate limit when per-user power is E_u / M and M grows without bound.

    ``log2(1 + E_u * beta_n * (rho*kappa + alpha))`` -- independent of the
    Rician factor (channel hardening) and strictly increasing in both kappa
    and alpha while any quantization remains.
    """
    return math.log2(1.0 + E_u * beta_n * (aqnm.rho * kappa + aqnm.alpha))


def rate_imperfect_csi(scenario: UserScenario, config: SystemConfig, aqnm: AqnmParams) -> RateReport:
    """Approximate per-user rate with MMSE-estimated CSI over Rician fading.

    Uses the pilot quality ``eta_n = p_p*beta_n / (1 + p_p*beta_n)`` and the
    estimation-error variances ``sigma_i^2``; the error contributes an extra
    denominator term proportional to ``p_u * sum_i sigma_i^2``, and the
    quantization moment is evaluated against the true (reconstructed)
    channel.
    """
    beta, theta, K, M0, M1, p_u, a, rho, dol = _unpack(scenario, config, aqnm)
    p_p = config.p_p
    N = scenario.n_users
    eta = p_p * beta / (1.0 + p_p * beta)
    sigma2 = beta / ((1.0 + p_p * beta) * (K + 1.0))
    sigma2_sum = float(np.sum(sigma2))
    rates = []
    for n in range(N):
        Kn, bn, en = K[n], beta[n], eta[n]
        num = p_u * bn * (
            (M0 + a * M1) ** 2 * (Kn + en) ** 2 + (M0 + a * a * M1) * (en * en + 2 * Kn * en)
        )
        interference = 0.0
        cross_gain = 0.0
        for i in range(N):
            if i == n:
                continue
            Ki, bi, ei = K[i], beta[i], eta[i]
            p0 = phi(theta[n], theta[i], M0, dol)
            p1 = phi(theta[n], theta[i], M1, dol)
            interference += (bi / (Ki + 1)) * (
                Kn * Ki * (p0 * p0 + a * a * p1 * p1)
                + (M0 + a * a * M1) * (Ki * en + Kn * ei + en * ei)
            )
            cross_gain += bi * (Ki + ei) / (Ki + 1)
        quant = bn * (Kn * Kn + 4 * Kn * en + 2 * en * en) + (Kn + 1) * (Kn + en) * cross_gain
        den = (
            (M0 + a * M1) * (Kn + en) * (Kn + 1) * (1.0 + p_u * sigma2_sum)
            + p_u * (Kn + 1) * interference
            + a * rho * p_u * M1 * quant
        )
        rates.append(math.log2(1.0 + num / den))
    return RateReport.from_per_user(rates, "analytic-imperfect")


def rate_imperfect_rayleigh(scenario: UserScenario, config: SystemConfig, aqnm: AqnmParams) -> RateReport:
    """Rayleigh (K = 0) special case of the imperfect-CSI rate.

    Error variances reduce to ``beta_i / (1 + p_p*beta_i)`` and the cross
    terms to ``beta_i * eta_i``; algebraically identical to the general form
    at K = 0.  Ignores the scenario's K values by construction.
    """
    beta = scenario.beta
    M0, M1 = config.M0, config.M1
    p_u, p_p, a, rho = config.p_u, config.p_p, aqnm.alpha, aqnm.rho
    eta = p_p * beta / (1.0 + p_p * beta)
    sigma2 = beta / (1.0 + p_p * beta)
    sigma2_sum = float(np.sum(sigma2))
    weighted = beta * eta
    weighted_sum = float(np.sum(weighted))
    rates = []
    for n in range(scenario.n_users):
        bn, en = beta[n], eta[n]
        num = p_u * bn * en * ((M0 + a * M1) ** 2 + (M0 + a * a * M1))
        den = (
            (M0 + a * M1) * (1.0 + p_u * sigma2_sum)
            + p_u * (weighted_sum - bn * en) * (M0 + a * a * M1)
            + a * rho * p_u * M1 * (bn * en + weighted_sum)
        )
        rates.append(math.log2(1.0 + num / den))
    return RateReport.from_per_user(rates, "limit-rayleigh-imperfect")


def rate_limit_power_scaled_imperfect(
    E_u: float,
    beta_n: float,
    K_n: float,
    tau: int,
    kappa: float,
    aqnm: AqnmParams,
    gamma: float = 1.0,
    M: float = 1e6,
) -> float:
    """Large-M rate when per-user power is E_u / M**gamma under imperfect CSI.

    ``log2(1 + (rho*kappa + alpha) * E_u*beta_n*(M**gamma * K_n +
    tau*E_u*beta_n) / (M**(2*gamma - 1) * (K_n + 1)))``.  For gamma = 1 this
    approaches the constant of :func:`rate_limit_imperfect_constant`; for
    K_n = 0 and gamma = 1/2 it is independent of M.
    """
    e = aqnm.rho * kappa + aqnm.alpha
    num = E_u * beta_n * (M**gamma * K_n + tau * E_u * beta_n)
    den = M ** (2.0 * gamma - 1.0) * (K_n + 1.0)
    return math.log2(1.0 + e * num / den)


def rate_limit_imperfect_constant(
    E_u: float, beta_n: float, K_n: float, kappa: float, aqnm: AqnmParams
) -> float:
    """M -> inf constant of the gamma = 1 imperfect-CSI power-scaling law.

    ``log2(1 + (rho*kappa + alpha) * E_u * beta_n * K_n / (K_n + 1))``;
    approaches the perfect-CSI scaling limit as K_n -> inf.
    """
    e = aqnm.rho * kappa + aqnm.alpha
    return math.log2(1.0 + e * E_u * beta_n * K_n / (K_n + 1.0))
