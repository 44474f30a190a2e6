"""
Split of the target accuracy between smoothing, bias and variance.
"""

import math
from dataclasses import dataclass

from hybridmc.estimators.payoffs import SMOOTHING_CONSTANT

DEFAULT_WEIGHTS = (4.0, 2.0, 2.0)


def split_budget(epsilon: float, a1: float, a2: float, a3: float) -> float:
    """epsilon* = epsilon / (a1 + a2 + a3)."""
    for name, value in (("epsilon", epsilon), ("a1", a1), ("a2", a2), ("a3", a3)):
        if not (math.isfinite(value) and value > 0):
            raise ValueError(f"{name} must be positive and finite, got {value}")
    return epsilon / (a1 + a2 + a3)


@dataclass(frozen=True)
class ErrorBudget:
    """
    Target accuracy epsilon with weights (a1, a2, a3).

    The smoothed mean squared error splits into a smoothing term bounded by
    a1 epsilon*, a bias term bounded by a2 epsilon* and a variance term
    bounded by a3^2 epsilon*^2. The limits below are the acceptance
    thresholds the controller checks its estimates against.
    """

    epsilon: float
    a1: float = DEFAULT_WEIGHTS[0]
    a2: float = DEFAULT_WEIGHTS[1]
    a3: float = DEFAULT_WEIGHTS[2]

    def __post_init__(self):
        split_budget(self.epsilon, self.a1, self.a2, self.a3)

    @property
    def epsilon_star(self) -> float:
        return split_budget(self.epsilon, self.a1, self.a2, self.a3)

    @property
    def variance_limit(self) -> float:
        return (self.a3 * self.epsilon_star) ** 2

    @property
    def smoothing_limit(self) -> float:
        return self.a1 * (SMOOTHING_CONSTANT - 1) * self.epsilon_star

    def bias_limit(self, alpha: float) -> float:
        return self.a2 * (2.0**alpha - 1.0) * self.epsilon_star
