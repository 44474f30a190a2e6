"""
Payoff maps g applied to functional values Y.

The indicator 1{Y <= s*} is the quantity of interest; the smoother g^delta
replaces it by a cubic transition of half-width delta = 2^-m around s*.
Both send the never-exits sentinel (+inf) to 0.
"""

import math
from dataclasses import dataclass

import numpy as np

# Degree of the smoothing polynomial and C_r = 2^(r+1).
SMOOTHING_DEGREE = 3
SMOOTHING_CONSTANT = 2 ** (SMOOTHING_DEGREE + 1)


def g0(x):
    """
    Base transition: 1 below -1, 0 above 1, 1/2 + (5x^3 - 9x)/8 in between.

    Accepts scalars or arrays; +inf maps to 0.
    """
    x = np.asarray(x, dtype=float)
    c = np.clip(x, -1.0, 1.0)
    inner = 0.5 + (5.0 * c**3 - 9.0 * c) / 8.0
    out = np.where(x > 1.0, 0.0, np.where(x < -1.0, 1.0, inner))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class Smoother:
    """g^delta(y) = g0((y - threshold) / delta) with delta = 2^-m."""

    m: int
    threshold: float

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"smoothing index must be >= 1, got {self.m}")
        if not math.isfinite(self.threshold):
            raise ValueError(f"threshold must be finite, got {self.threshold}")

    @property
    def delta(self) -> float:
        return 2.0**-self.m

    @property
    def reach(self) -> float:
        """How far above the threshold the payoff still depends on Y."""
        return self.delta

    @property
    def label(self) -> str:
        return f"m{self.m}"

    def __call__(self, y):
        return g0((np.asarray(y, dtype=float) - self.threshold) / self.delta)


@dataclass(frozen=True)
class Indicator:
    """1{y <= threshold}."""

    threshold: float

    reach = 0.0
    label = "indicator"

    def __call__(self, y):
        out = (np.asarray(y, dtype=float) <= self.threshold).astype(float)
        return float(out) if out.ndim == 0 else out


def smooth_eval(smoother: Smoother, y: float) -> float:
    return float(smoother(y))


def indicator_eval(threshold: float, y: float) -> float:
    return float(Indicator(threshold)(y))
