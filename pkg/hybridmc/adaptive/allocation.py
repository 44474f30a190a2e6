"""
Replication numbers minimising the modelled cost sum N_l (2^l + 1)
subject to sum v_l / N_l <= a3^2 epsilon*^2.
"""

import math
from typing import Sequence

import numpy as np

from hybridmc.errors import AllocationError

# Relative slack absorbed before rounding up, so round-off never adds a sample.
_ROUNDING_SLACK = 1e-12


def cost_weights(max_level: int) -> np.ndarray:
    """Modelled per-sample cost 2^l + 1 of levels 0..L."""
    return 2.0 ** np.arange(max_level + 1) + 1.0


def continuous_replications(variances: Sequence[float], epsilon_star: float, a3: float) -> np.ndarray:
    """
    Real-valued optimum N'_l before rounding.

    N'_l = sqrt(v_l / w_l) * sum_j sqrt(v_j w_j) / (a3 epsilon*)^2 with
    w_l = 2^l + 1. Levels with zero variance get 0.
    """
    v = np.asarray(variances, dtype=float)
    if v.ndim != 1 or len(v) == 0:
        raise AllocationError("need one variance per level")
    if np.any(v < 0) or not np.all(np.isfinite(v)):
        raise AllocationError(f"variances must be finite and non-negative, got {v.tolist()}")
    if not np.any(v > 0):
        raise AllocationError("all level variances are zero; allocation is undefined")
    if not (epsilon_star > 0 and a3 > 0):
        raise AllocationError("epsilon* and a3 must be positive")

    w = cost_weights(len(v) - 1)
    total = float(np.sum(np.sqrt(v * w)))
    return np.sqrt(v / w) * total / (a3 * epsilon_star) ** 2


def required_replications(
    variances: Sequence[float],
    epsilon_star: float,
    a3: float,
    current: Sequence[int] | None = None,
) -> list[int]:
    """
    Rounded-up replication numbers N'_0..N'_L.

    Levels with zero variance keep their current count (0 when no current
    allocation is given).

    Raises:
        AllocationError: If every variance is zero
    """
    optimum = continuous_replications(variances, epsilon_star, a3)
    if current is not None and len(current) != len(optimum):
        raise AllocationError(f"expected {len(optimum)} current counts, got {len(current)}")
    counts = []
    for level, (n, v) in enumerate(zip(optimum, variances)):
        if v == 0:
            counts.append(int(current[level]) if current is not None else 0)
        else:
            counts.append(max(1, math.ceil(n * (1.0 - _ROUNDING_SLACK))))
    return counts
