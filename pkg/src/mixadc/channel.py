"""Rician channel realizations for the mixed-ADC receiver.

Each user's channel column is ``sqrt(beta) * (sqrt(K/(K+1)) * hbar +
sqrt(1/(K+1)) * h_w)`` with a deterministic line-of-sight steering vector
``hbar`` and i.i.d. circularly symmetric complex Gaussian scatter ``h_w``.
Rows 0..M0-1 of the stacked matrix feed the high-resolution ADCs (``G0``),
the remaining M1 rows the low-resolution ones (``G1``); the array is one
physically contiguous ULA, so the low-resolution block keeps its absolute
phase offset.

Channel estimates are generated statistically: the scattered part splits
into an estimate component and an independent zero-mean error with the MMSE
per-user error variance, rather than simulating pilot processing.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .scenario import SystemConfig, UserScenario

__all__ = [
    "ChannelRealization",
    "EstimatedChannel",
    "draw_channel",
    "draw_estimated_channel",
    "los_steering",
    "pilot_estimation_stats",
]


def los_steering(theta_n: float, M_ant: int, d_over_lambda: float = 0.5) -> np.ndarray:
    """Unit-modulus ULA steering vector for one arrival angle.

    Entry m (0-based) is ``exp(-1j * m * 2*pi*d_over_lambda * sin(theta_n))``,
    so the first ``M0`` entries of an M-element vector equal the steering
    vector of the leading M0-element sub-array.
    """
    if M_ant < 0:
        raise ValueError("M_ant must be non-negative")
    m = np.arange(M_ant)
    return np.exp(-1j * m * 2 * np.pi * d_over_lambda * np.sin(theta_n))


def _steering_matrix(scenario: UserScenario, M: int, d_over_lambda: float) -> np.ndarray:
    # M x N, column n is the steering vector of user n.
    m = np.arange(M)[:, None]
    return np.exp(-1j * m * 2 * np.pi * d_over_lambda * np.sin(scenario.theta)[None, :])


def _complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    # Two independent real Gaussians scaled by 1/sqrt(2) per entry.
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) * np.sqrt(0.5)


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class ChannelRealization:
    """True channel split across ADC groups: G0 is M0 x N, G1 is M1 x N."""

    G0: np.ndarray
    G1: np.ndarray

    @property
    def G(self) -> np.ndarray:
        """Stacked M x N channel matrix."""
        return np.vstack([self.G0, self.G1])


@dataclass(frozen=True)
class EstimatedChannel:
    """MMSE channel estimate and its error, split like the true channel.

    The error is defined as estimate minus truth, so ``G = Ghat - Xi``
    entrywise, and Xi is independent of Ghat.
    """

    Ghat0: np.ndarray
    Ghat1: np.ndarray
    Xi0: np.ndarray
    Xi1: np.ndarray

    @property
    def Ghat(self) -> np.ndarray:
        return np.vstack([self.Ghat0, self.Ghat1])

    @property
    def Xi(self) -> np.ndarray:
        return np.vstack([self.Xi0, self.Xi1])


def draw_channel(
    scenario: UserScenario,
    config: SystemConfig,
    rng: np.random.Generator,
    los_only: bool = False,
) -> ChannelRealization:
    """Draw one Rician channel realization.

    ``los_only`` gives the strong-LoS limit: columns are exactly
    ``sqrt(beta) * hbar`` with no scattered component (no RNG draws).
    """
    M = config.M
    hbar = _steering_matrix(scenario, M, config.d_over_lambda)
    beta, K = scenario.beta, scenario.K
    if los_only:
        G = np.sqrt(beta)[None, :] * hbar
    else:
        los_amp = np.sqrt(beta * K / (K + 1.0))
        scatter_amp = np.sqrt(beta / (K + 1.0))
        G = los_amp[None, :] * hbar + scatter_amp[None, :] * _complex_normal(rng, (M, scenario.n_users))
    return ChannelRealization(_freeze(G[: config.M0]), _freeze(G[config.M0 :]))


def pilot_estimation_stats(scenario: UserScenario, p_p: float):
    """Per-user MMSE estimation quality for pilot power ``p_p``.

    Returns ``(eta, sigma2)`` where ``eta = p_p*beta / (1 + p_p*beta)`` is the
    fraction of scattered power captured by the estimate and ``sigma2 =
    beta / ((1 + p_p*beta) * (K + 1))`` is the per-entry error variance.
    Their sum times ``1/(K+1)``-scaling reconstructs the full scattered
    variance ``beta/(K+1)``.
    """
    if not p_p > 0:
        raise ValueError("pilot power must be positive")
    beta, K = scenario.beta, scenario.K
    eta = p_p * beta / (1.0 + p_p * beta)
    sigma2 = beta / ((1.0 + p_p * beta) * (K + 1.0))
    return eta, sigma2


def draw_estimated_channel(
    scenario: UserScenario,
    config: SystemConfig,
    rng: np.random.Generator,
    perfect_pilots: bool = False,
):
    """Draw a channel together with its MMSE estimate.

    The estimate keeps the deterministic LoS mean and a scattered part with
    per-entry variance ``beta*eta/(K+1)``; the error has variance ``sigma2``
    and is drawn independently (estimate first, then error).  The true
    channel is reconstructed as ``G = Ghat - Xi`` and has the same marginal
    statistics as :func:`draw_channel`.

    With ``perfect_pilots`` the error is exactly zero and ``Ghat = G``.

    Returns ``(ChannelRealization, EstimatedChannel)``.
    """
    M, M0 = config.M, config.M0
    n = scenario.n_users
    hbar = _steering_matrix(scenario, M, config.d_over_lambda)
    beta, K = scenario.beta, scenario.K
    los = np.sqrt(beta * K / (K + 1.0))[None, :] * hbar

    if perfect_pilots:
        eta = np.ones(n)
        sigma2 = np.zeros(n)
    else:
        eta, sigma2 = pilot_estimation_stats(scenario, config.p_p)

    Ghat = los + np.sqrt(beta * eta / (K + 1.0))[None, :] * _complex_normal(rng, (M, n))
    Xi = np.sqrt(sigma2)[None, :] * _complex_normal(rng, (M, n))
    G = Ghat - Xi
    realization = ChannelRealization(_freeze(G[:M0]), _freeze(G[M0:]))
    estimate = EstimatedChannel(
        _freeze(Ghat[:M0]), _freeze(Ghat[M0:]), _freeze(Xi[:M0]), _freeze(Xi[M0:])
    )
    return realization, estimate
