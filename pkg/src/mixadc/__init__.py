"""Mixed-ADC massive MIMO uplink over Rician fading.

Simulation (Monte Carlo rate oracle), closed-form approximate rates with
their special cases and limits, receiver power / energy-efficiency modeling,
and reproducible figure-style sweeps, exposed through a FastAPI service with
a thin CLI client.
"""

__version__ = "0.1.0"

from .analytic import (  # noqa: E402
    RateReport,
    phi,
    rate_imperfect_csi,
    rate_imperfect_rayleigh,
    rate_limit_imperfect_constant,
    rate_limit_power_scaled_imperfect,
    rate_limit_power_scaled_perfect,
    rate_perfect_K_infinity,
    rate_perfect_csi,
    rate_perfect_rayleigh,
)
from .channel import (  # noqa: E402
    ChannelRealization,
    EstimatedChannel,
    draw_channel,
    draw_estimated_channel,
    los_steering,
    pilot_estimation_stats,
)
from .montecarlo import McSettings, mc_rate, sinr_imperfect, sinr_perfect  # noqa: E402
from .power import PowerBreakdown, PowerParams, adc_power, energy_efficiency, total_power  # noqa: E402
from .quantization import (  # noqa: E402
    AqnmParams,
    ScalarQuantizer,
    distortion_factor,
    empirical_distortion,
    lloyd_max_design,
    quantization_noise_covariance_diag,
)
from .scenario import (  # noqa: E402
    GeometryParams,
    SystemConfig,
    UserScenario,
    db_to_linear,
    fixed_user_scenario,
    linear_to_db,
    sample_user_scenario,
)

__all__ = [
    "AqnmParams",
    "ChannelRealization",
    "EstimatedChannel",
    "GeometryParams",
    "McSettings",
    "PowerBreakdown",
    "PowerParams",
    "RateReport",
    "ScalarQuantizer",
    "SystemConfig",
    "UserScenario",
    "adc_power",
    "db_to_linear",
    "distortion_factor",
    "draw_channel",
    "draw_estimated_channel",
    "empirical_distortion",
    "energy_efficiency",
    "fixed_user_scenario",
    "linear_to_db",
    "lloyd_max_design",
    "los_steering",
    "mc_rate",
    "phi",
    "pilot_estimation_stats",
    "quantization_noise_covariance_diag",
    "rate_imperfect_csi",
    "rate_imperfect_rayleigh",
    "rate_limit_imperfect_constant",
    "rate_limit_power_scaled_imperfect",
    "rate_limit_power_scaled_perfect",
    "rate_perfect_K_infinity",
    "rate_perfect_csi",
    "rate_perfect_rayleigh",
    "sample_user_scenario",
    "sinr_imperfect",
    "sinr_perfect",
    "total_power",
]
