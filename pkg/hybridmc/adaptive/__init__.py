"""Adaptive multilevel controller."""

from .budget import DEFAULT_WEIGHTS, ErrorBudget, split_budget
from .allocation import continuous_replications, cost_weights, required_replications
from .rates import DEFAULT_ALPHA, DecayFit, bias_accepted, bias_bound, fit_decay_rate, fit_or_default, smoothing_gap
from .controller import (
    AdaptiveConfig,
    AdaptiveMLMC,
    AdaptiveState,
    EstimateReport,
    LevelRow,
    adaptive_mlmc,
    initial_cost,
    level_rows,
)

__all__ = [
    "DEFAULT_WEIGHTS",
    "ErrorBudget",
    "split_budget",
    "continuous_replications",
    "cost_weights",
    "required_replications",
    "DEFAULT_ALPHA",
    "DecayFit",
    "bias_accepted",
    "bias_bound",
    "fit_decay_rate",
    "fit_or_default",
    "smoothing_gap",
    "AdaptiveConfig",
    "AdaptiveMLMC",
    "AdaptiveState",
    "EstimateReport",
    "LevelRow",
    "adaptive_mlmc",
    "initial_cost",
    "level_rows",
]
