"""Payoff maps and Monte Carlo estimators."""

from .payoffs import SMOOTHING_CONSTANT, SMOOTHING_DEGREE, Indicator, Smoother, g0, indicator_eval, smooth_eval
from .mlmc import (
    LevelStats,
    MlmcEstimate,
    SmcResult,
    combine_levels,
    level_correction_stats,
    level_differences,
    mlmc_estimate,
    smc_estimate,
    stats_from_samples,
)

__all__ = [
    "SMOOTHING_CONSTANT",
    "SMOOTHING_DEGREE",
    "Indicator",
    "Smoother",
    "g0",
    "indicator_eval",
    "smooth_eval",
    "LevelStats",
    "MlmcEstimate",
    "SmcResult",
    "combine_levels",
    "level_correction_stats",
    "level_differences",
    "mlmc_estimate",
    "smc_estimate",
    "stats_from_samples",
]
