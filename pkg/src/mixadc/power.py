"""Receiver power-consumption model and energy efficiency.

One shared local oscillator, per-antenna RF chains (LNA, hybrid/LO buffer,
two mixers for I/Q), per-ADC-pair AGCs, ADCs whose power follows Walden's
figure of merit ``FOM_W * f_s * 2**b``, and a baseband block.  One-bit ADC
pairs need no AGC.  All constants are carried in watts internally; milliwatt
and femtojoule conversions happen at the I/O boundary only.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .analytic import RateReport
from .scenario import SystemConfig

__all__ = ["PowerBreakdown", "PowerParams", "adc_power", "energy_efficiency", "total_power"]


@dataclass(frozen=True)
class PowerParams:
    """Component power constants (watts) and the ADC figure of merit."""

    p_lo_w: float = 22.5e-3
    p_lna_w: float = 5.4e-3
    p_h_w: float = 3e-3
    p_m_w: float = 0.3e-3
    p_agc_w: float = 2e-3
    p_bb_w: float = 200e-3
    fom_w_j_per_step: float = 15e-15
    f_s_hz: float = 1e9

    def __post_init__(self):
        for name in (
            "p_lo_w",
            "p_lna_w",
            "p_h_w",
            "p_m_w",
            "p_agc_w",
            "p_bb_w",
            "fom_w_j_per_step",
            "f_s_hz",
        ):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise ValueError(f"{name} must be non-negative and finite")


@dataclass(frozen=True)
class PowerBreakdown:
    """Per-component receiver power in watts; total is their exact sum."""

    lo_w: float
    rf_chains_w: float
    agc_w: float
    adc_high_w: float
    adc_low_w: float
    baseband_w: float

    @property
    def total_w(self) -> float:
        return (
            self.lo_w
            + self.rf_chains_w
            + self.agc_w
            + self.adc_high_w
            + self.adc_low_w
            + self.baseband_w
        )

    def as_dict(self) -> dict:
        return {
            "lo_w": self.lo_w,
            "rf_chains_w": self.rf_chains_w,
            "agc_w": self.agc_w,
            "adc_high_w": self.adc_high_w,
            "adc_low_w": self.adc_low_w,
            "baseband_w": self.baseband_w,
            "total_w": self.total_w,
        }


def adc_power(b: int, params: PowerParams) -> float:
    """Power of a single b-bit ADC: FOM_W * f_s * 2**b (watts)."""
    if b < 1:
        raise ValueError("b must be >= 1")
    return params.fom_w_j_per_step * params.f_s_hz * 2.0**b


def total_power(config: SystemConfig, b_high: int = 12, params: PowerParams | None = None) -> PowerBreakdown:
    """Total receiver power of the mixed-ADC front end.

    ``P_LO + M*(P_LNA + P_H + 2*P_M) + 2*M0*(P_AGC + P_ADC(b_high)) +
    2*M1*(c*P_AGC + P_ADC(b)) + P_BB`` where the AGC flag ``c`` is 0 for
    one-bit low-resolution ADCs and 1 otherwise.
    """
    params = params or PowerParams()
    if b_high < config.b:
        raise ValueError("b_high must be at least the low-resolution bit depth")
    M, M0, M1 = config.M, config.M0, config.M1
    agc_flag = 0.0 if config.b == 1 else 1.0
    return PowerBreakdown(
        lo_w=params.p_lo_w,
        rf_chains_w=M * (params.p_lna_w + params.p_h_w + 2.0 * params.p_m_w),
        agc_w=2.0 * M0 * params.p_agc_w + 2.0 * M1 * agc_flag * params.p_agc_w,
        adc_high_w=2.0 * M0 * adc_power(b_high, params),
        adc_low_w=2.0 * M1 * adc_power(config.b, params),
        baseband_w=params.p_bb_w,
    )


def energy_efficiency(rate_report: RateReport, config: SystemConfig, breakdown: PowerBreakdown) -> float:
    """Bits per joule: sum rate times bandwidth over total receiver power."""
    return rate_report.sum_rate * config.W_hz / breakdown.total_w
