"""Brute-force Monte Carlo rate oracle for the mixed-ADC MRC receiver.

Per realization the exact channel-conditional SINR is evaluated under the
linearized ADC model and averaged as ``E{log2(1 + SINR)}``.  The AWGN and the
identity part of the quantization-noise covariance are taken in conditional
expectation given the channel (they merge into ``|g0|^2 + alpha*|g1|^2``
since ``alpha^2 + alpha*rho = alpha``), which removes their sampling noise;
only the channel itself is sampled.

Realization t always draws from the RNG stream spawned as child t of the
seed, and per-realization results are stored by index before a single
reduction, so results are bit-identical for a fixed (seed, n_realizations)
regardless of the worker count.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .analytic import RateReport
from .channel import draw_channel, draw_estimated_channel, pilot_estimation_stats
from .quantization import AqnmParams
from .scenario import SystemConfig, UserScenario

__all__ = ["McSettings", "mc_rate", "realization_rng", "sinr_imperfect", "sinr_perfect"]

CSI_MODES = ("perfect", "imperfect")


@dataclass(frozen=True)
class McSettings:
    """Monte Carlo controls: sample count, base seed, workers, CI level."""

    n_realizations: int
    seed: int
    workers: int = 1
    ci_level: float = 0.95

    def __post_init__(self):
        if self.n_realizations < 1:
            raise ValueError("n_realizations must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if not 0 < self.ci_level < 1:
            raise ValueError("ci_level must lie in (0, 1)")


def realization_rng(seed: int, index: int) -> np.random.Generator:
    """Independent RNG stream for one realization, derived from (seed, index)."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))


def _sinr_all_perfect(G0, G1, p_u, aqnm: AqnmParams) -> np.ndarray:
    a, rho = aqnm.alpha, aqnm.rho
    gram0 = G0.conj().T @ G0
    gram1 = G1.conj().T @ G1
    combined = gram0 + a * gram1
    cross_power = np.abs(combined) ** 2
    desired = p_u * np.diag(cross_power)
    interference = p_u * (cross_power.sum(axis=1) - np.diag(cross_power))
    awgn = np.diag(gram0).real + a * np.diag(gram1).real
    row_power = np.sum(np.abs(G1) ** 2, axis=1)
    quant = a * rho * p_u * ((np.abs(G1) ** 2).T @ row_power)
    return desired / (interference + awgn + quant)


def sinr_perfect(G0: np.ndarray, G1: np.ndarray, n: int, p_u: float, aqnm: AqnmParams) -> float:
    """Channel-conditional SINR of user n under perfect CSI.

    Desired power ``p_u * |g_n0^H g_n0 + alpha g_n1^H g_n1|^2`` over the sum
    of interuser interference, the merged AWGN/identity term ``|g_n0|^2 +
    alpha*|g_n1|^2``, and the channel-dependent quantization noise
    ``alpha*rho*p_u * g_n1^H diag(G1 G1^H) g_n1``.
    """
    return float(_sinr_all_perfect(np.asarray(G0), np.asarray(G1), p_u, aqnm)[n])


def _sinr_all_imperfect(Ghat0, Ghat1, G1, sigma2_sum, p_u, aqnm: AqnmParams) -> np.ndarray:
    a, rho = aqnm.alpha, aqnm.rho
    gram0 = Ghat0.conj().T @ Ghat0
    gram1 = Ghat1.conj().T @ Ghat1
    combined = gram0 + a * gram1
    cross_power = np.abs(combined) ** 2
    desired = p_u * np.diag(cross_power)
    interference = p_u * (cross_power.sum(axis=1) - np.diag(cross_power))
    norm0 = np.diag(gram0).real
    norm1 = np.diag(gram1).real
    awgn = norm0 + a * norm1
    estimation = p_u * (norm0 + a * a * norm1) * sigma2_sum
    row_power = np.sum(np.abs(G1) ** 2, axis=1)  # true low-res channel
    quant = a * rho * p_u * ((np.abs(Ghat1) ** 2).T @ row_power)
    return desired / (interference + awgn + estimation + quant)


def sinr_imperfect(
    Ghat0: np.ndarray,
    Ghat1: np.ndarray,
    G1: np.ndarray,
    scenario: UserScenario,
    n: int,
    p_u: float,
    p_p: float,
    aqnm: AqnmParams,
) -> float:
    """Channel-conditional SINR of user n when combining with the estimate.

    Like :func:`sinr_perfect` but over the estimated columns, with an extra
    estimation-error term ``p_u * (|ghat_n0|^2 + alpha^2 |ghat_n1|^2) *
    sum_i sigma_i^2`` and the quantization noise evaluated against the true
    low-resolution channel ``G1``.
    """
    _, sigma2 = pilot_estimation_stats(scenario, p_p)
    return float(
        _sinr_all_imperfect(
            np.asarray(Ghat0), np.asarray(Ghat1), np.asarray(G1), float(np.sum(sigma2)), p_u, aqnm
        )[n]
    )


def mc_rate(
    scenario: UserScenario,
    config: SystemConfig,
    aqnm: AqnmParams,
    csi_mode: str,
    settings: McSettings,
) -> RateReport:
    """Monte Carlo per-user rates: mean of log2(1 + SINR) over realizations.

    Reports the per-user standard errors and the standard error of the sum
    rate (per-realization sums).  Deterministic for a fixed seed and
    independent of ``settings.workers``.
    """
    if csi_mode not in CSI_MODES:
        raise ValueError(f"csi_mode must be one of {CSI_MODES}, got {csi_mode!r}")
    T, N = settings.n_realizations, scenario.n_users
    p_u = config.p_u
    if csi_mode == "imperfect":
        _, sigma2 = pilot_estimation_stats(scenario, config.p_p)
        sigma2_sum = float(np.sum(sigma2))
    log_rates = np.empty((T, N))

    def run_block(start: int, stop: int) -> None:
        for t in range(start, stop):
            rng = realization_rng(settings.seed, t)
            if csi_mode == "perfect":
                ch = draw_channel(scenario, config, rng)
                sinr = _sinr_all_perfect(ch.G0, ch.G1, p_u, aqnm)
            else:
                ch, est = draw_estimated_channel(scenario, config, rng)
                sinr = _sinr_all_imperfect(est.Ghat0, est.Ghat1, ch.G1, sigma2_sum, p_u, aqnm)
            log_rates[t] = np.log2(1.0 + sinr)

    workers = min(settings.workers, T)
    if workers == 1:
        run_block(0, T)
    else:
        bounds = np.linspace(0, T, workers + 1).astype(int)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(run_block, bounds[w], bounds[w + 1]) for w in range(workers)]
            for f in futures:
                f.result()

    per_user = log_rates.mean(axis=0)
    if T > 1:
        stderr = log_rates.std(axis=0, ddof=1) / np.sqrt(T)
        sum_stderr = float(log_rates.sum(axis=1).std(ddof=1) / np.sqrt(T))
    else:
        stderr = np.zeros(N)
        sum_stderr = 0.0
    return RateReport.from_per_user(
        per_user,
        "mc-perfect" if csi_mode == "perfect" else "mc-imperfect",
        mc_stderr=tuple(stderr),
        sum_rate_stderr=sum_stderr,
    )
