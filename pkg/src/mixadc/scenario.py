"""System configuration and the random user-geometry model.

Large-scale parameters (pathloss/shadowing gain ``beta``, angle of arrival
``theta``, Rician factor ``K``) are drawn once per scenario and then treated
as fixed constants by the channel, rate and sweep layers (block large-scale
fading). Everything here is immutable after construction and safe to share
across workers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "GeometryParams",
    "SystemConfig",
    "UserScenario",
    "db_to_linear",
    "linear_to_db",
    "fixed_user_scenario",
    "sample_user_scenario",
]


def db_to_linear(x_db):
    """Convert a dB quantity to linear units (10^(x/10))."""
    return 10.0 ** (np.asarray(x_db, dtype=float) / 10.0) if np.ndim(x_db) else 10.0 ** (x_db / 10.0)


def linear_to_db(x):
    """Convert a linear power ratio to dB."""
    return 10.0 * np.log10(x)


@dataclass(frozen=True)
class GeometryParams:
    """Single hexagonal cell with a base station at its center.

    ``cell_radius_m`` is the center-to-vertex distance of a flat-topped
    hexagon.  Users closer than ``min_distance_m`` are resampled, and the
    pathloss is normalized so that a user at the minimum distance with unit
    shadowing has gain 1.
    """

    cell_radius_m: float = 1000.0
    min_distance_m: float = 100.0
    pathloss_exponent: float = 3.8
    shadowing_std_db: float = 8.0

    def __post_init__(self):
        if not self.min_distance_m > 0:
            raise ValueError("min_distance_m must be positive")
        if self.min_distance_m >= self.cell_radius_m:
            raise ValueError("min_distance_m must be smaller than cell_radius_m")
        if not self.pathloss_exponent > 0:
            raise ValueError("pathloss_exponent must be positive")
        if self.shadowing_std_db < 0:
            raise ValueError("shadowing_std_db must be non-negative")


@dataclass(frozen=True)
class SystemConfig:
    """Static uplink configuration of the mixed-ADC receiver.

    Parameters
    ----------
    M : total number of BS antennas.
    M0 : antennas wired to high-resolution ADC pairs; the remaining
        ``M1 = M - M0`` antennas feed low-resolution pairs.
    N : number of single-antenna users.
    b : low-resolution ADC bits (1..12).
    p_u : per-user uplink transmit power, linear units.
    tau : pilot symbols per coherence block; must allow N orthogonal pilots.
    d_over_lambda : antenna spacing in wavelengths (uniform linear array).
    W_hz : transmission bandwidth in Hz (used for energy efficiency).
    """

    M: int
    M0: int
    N: int
    b: int
    p_u: float
    tau: int
    d_over_lambda: float = 0.5
    W_hz: float = 1e9

    def __post_init__(self):
        if self.M < 1:
            raise ValueError("M must be a positive integer")
        if not 0 <= self.M0 <= self.M:
            raise ValueError("M0 must satisfy 0 <= M0 <= M")
        if self.N < 1:
            raise ValueError("N must be a positive integer")
        if not (isinstance(self.b, (int, np.integer)) and 1 <= self.b <= 12):
            raise ValueError("b must be an integer in 1..12")
        if not (math.isfinite(self.p_u) and self.p_u > 0):
            raise ValueError("p_u must be positive and finite")
        if self.tau < self.N:
            raise ValueError("tau must be >= N (orthogonal pilots)")
        if not self.d_over_lambda > 0:
            raise ValueError("d_over_lambda must be positive")
        if not self.W_hz > 0:
            raise ValueError("W_hz must be positive")

    @property
    def M1(self) -> int:
        return self.M - self.M0

    @property
    def kappa(self) -> float:
        """Fraction of antennas on high-resolution ADC pairs, in [0, 1]."""
        return self.M0 / self.M

    @property
    def p_p(self) -> float:
        """Pilot power tau * p_u (never stored independently)."""
        return self.tau * self.p_u


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class UserScenario:
    """Per-user large-scale parameters: gain beta, AoA theta, Rician K."""

    beta: np.ndarray
    theta: np.ndarray
    K: np.ndarray

    def __post_init__(self):
        beta = _readonly(np.atleast_1d(self.beta))
        theta = _readonly(np.atleast_1d(self.theta))
        K = _readonly(np.atleast_1d(self.K))
        if beta.size == 0:
            raise ValueError("scenario must contain at least one user")
        if not (beta.shape == theta.shape == K.shape):
            raise ValueError("beta, theta and K must have equal length")
        if not np.all(np.isfinite(beta)) or np.any(beta <= 0):
            raise ValueError("all beta must be positive and finite")
        if np.any(np.abs(theta) > np.pi / 2 + 1e-12):
            raise ValueError("theta must lie in [-pi/2, pi/2]")
        if not np.all(np.isfinite(K)) or np.any(K < 0):
            raise ValueError("K must be non-negative and finite")
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "K", K)

    @property
    def n_users(self) -> int:
        return self.beta.size

    def with_K(self, K) -> "UserScenario":
        """Same users, different Rician factor(s); K is scalar or per-user."""
        K = np.broadcast_to(np.asarray(K, dtype=float), self.beta.shape)
        return UserScenario(self.beta, self.theta, K)


def fixed_user_scenario(betas, thetas, Ks) -> UserScenario:
    """Build a scenario exactly as given (no randomness).

    Lists must have equal length; values are validated against the scenario
    invariants (beta > 0, |theta| <= pi/2, K >= 0 finite).
    """
    betas = np.atleast_1d(np.asarray(betas, dtype=float))
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    Ks = np.atleast_1d(np.asarray(Ks, dtype=float))
    if not (betas.shape == thetas.shape == Ks.shape):
        raise ValueError("betas, thetas and Ks must have equal length")
    return UserScenario(betas, thetas, Ks)


def _inside_flat_top_hexagon(x, y, radius):
    # Flat-topped hexagon, vertices at (+-R, 0) and (+-R/2, +-sqrt(3)R/2).
    s3 = math.sqrt(3.0)
    return (np.abs(y) <= s3 * radius / 2 + 1e-9) & (s3 * np.abs(x) + np.abs(y) <= s3 * radius + 1e-9)


def sample_user_scenario(
    n_users: int,
    geometry: GeometryParams | None = None,
    K=0.0,
    rng_seed: int = 0,
    normalized_beta: bool = False,
) -> UserScenario:
    """Draw a random user drop for one cell.

    Positions are uniform over the hexagonal cell (rejection sampling in the
    bounding box), resampled until the BS distance is at least the minimum
    distance.  The large-scale gain is ``s * (r / r_min)**(-v)`` with ``s``
    log-normal shadowing of the configured dB standard deviation, and the
    AoAs are uniform on [-pi/2, pi/2].  ``K`` (linear) may be a scalar shared
    by all users or one value per user.  Deterministic for a fixed seed.

    With ``normalized_beta`` the position and shadowing draws are skipped and
    every user gets beta = 1 (clean analytic comparisons); only theta is
    random.
    """
    if n_users < 1:
        raise ValueError("n_users must be >= 1")
    geometry = geometry or GeometryParams()
    rng = np.random.default_rng(rng_seed)

    if normalized_beta:
        beta = np.ones(n_users)
    else:
        radius = geometry.cell_radius_m
        r_min = geometry.min_distance_m
        half_height = math.sqrt(3.0) * radius / 2
        r = np.empty(n_users)
        filled = 0
        while filled < n_users:
            need = n_users - filled
            x = rng.uniform(-radius, radius, need)
            y = rng.uniform(-half_height, half_height, need)
            dist = np.hypot(x, y)
            ok = _inside_flat_top_hexagon(x, y, radius) & (dist >= r_min)
            taken = int(np.count_nonzero(ok))
            r[filled : filled + taken] = dist[ok]
            filled += taken
        shadow_db = rng.normal(0.0, geometry.shadowing_std_db, n_users)
        beta = 10.0 ** (shadow_db / 10.0) * (r / r_min) ** (-geometry.pathloss_exponent)

    theta = rng.uniform(-np.pi / 2, np.pi / 2, n_users)
    K = np.broadcast_to(np.asarray(K, dtype=float), (n_users,))
    return UserScenario(beta, theta, K)
