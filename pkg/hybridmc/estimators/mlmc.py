"""
Standard and fixed-parameter multilevel Monte Carlo estimators.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from hybridmc.models.functionals import PathFunctional
from hybridmc.models.shs import ShsModel
from hybridmc.simulate.levels import LevelParams
from hybridmc.simulate.noise import NoiseStream
from hybridmc.simulate.sampling import DEFAULT_BATCH_ELEMENTS, LevelSamples, sample_level

logger = logging.getLogger(__name__)

Payoff = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class LevelStats:
    """
    Empirical statistics of one level.

    Attributes:
        level: Level ell
        n_samples: Replication count N_ell
        b_hat: Mean of the level payoff (ell = 0) or correction (ell >= 1)
        v_hat: Variance with 1/N normalisation
        cost: Euler steps executed for these samples
    """

    level: int
    n_samples: int
    b_hat: float
    v_hat: float
    cost: int


@dataclass(frozen=True)
class MlmcEstimate:
    """Sum of the level estimators with the per-level table and sum of v_hat / N."""

    estimate: float
    levels: tuple[LevelStats, ...]
    variance_bound: float

    @property
    def max_level(self) -> int:
        return len(self.levels) - 1

    @property
    def cost(self) -> int:
        return sum(s.cost for s in self.levels)


@dataclass(frozen=True)
class SmcResult:
    estimate: float
    variance: float
    cost: int


def level_differences(samples: LevelSamples, payoff: Payoff) -> np.ndarray:
    """g(Y_fine) at level 0, g(Y_fine) - g(Y_coarse) above."""
    fine = np.asarray(payoff(samples.fine), dtype=float)
    if samples.coarse is None:
        return fine
    return fine - np.asarray(payoff(samples.coarse), dtype=float)


def stats_from_samples(samples: LevelSamples, payoff: Payoff) -> LevelStats:
    """Mean and 1/N variance of the payoff differences of cached samples."""
    if samples.count < 1:
        raise ValueError(f"level {samples.level} has no samples")
    d = level_differences(samples, payoff)
    if np.all(d == d[0]):
        return LevelStats(samples.level, samples.count, float(d[0]), 0.0, samples.cost)
    b_hat = float(np.mean(d))
    v_hat = float(np.mean((d - b_hat) ** 2))
    return LevelStats(samples.level, samples.count, b_hat, v_hat, samples.cost)


def smc_estimate(
    model: ShsModel,
    functional: PathFunctional,
    payoff: Payoff,
    params: LevelParams,
    n_samples: int,
    noise: NoiseStream,
    threads: int = 1,
    batch_elements: int = DEFAULT_BATCH_ELEMENTS,
) -> SmcResult:
    """
    Empirical mean of g(Y) over N single-level paths.

    Returns the estimate, the unbiased sample variance of the payoffs
    (0 when N = 1) and the cost N * n.
    """
    if n_samples < 1:
        raise ValueError(f"need at least one replication, got {n_samples}")
    samples = sample_level(
        model, functional, params.level, params.kappa, params.horizon, noise, range(n_samples),
        threads=threads, batch_elements=batch_elements, coupled=False,
    )
    values = np.asarray(payoff(samples.fine), dtype=float)
    variance = float(np.var(values, ddof=1)) if n_samples > 1 else 0.0
    logger.info(f"SMC at level {params.level}: {n_samples} paths, estimate {float(np.mean(values)):.6g}")
    return SmcResult(float(np.mean(values)), variance, samples.cost)


def level_correction_stats(
    model: ShsModel,
    functional: PathFunctional,
    payoff: Payoff,
    level: int,
    kappa: int,
    horizon: float,
    n_samples: int,
    noise: NoiseStream,
    threads: int = 1,
    batch_elements: int = DEFAULT_BATCH_ELEMENTS,
) -> LevelStats:
    """Statistics of N fresh replications of level ell (replication indices 0..N-1)."""
    if n_samples < 1:
        raise ValueError(f"need at least one replication, got {n_samples}")
    samples = sample_level(
        model, functional, level, kappa, horizon, noise, range(n_samples),
        threads=threads, batch_elements=batch_elements,
    )
    return stats_from_samples(samples, payoff)


def combine_levels(levels: Sequence[LevelStats]) -> MlmcEstimate:
    """Telescoping sum of level means and the variance bound sum v_hat / N."""
    for expected, stats in enumerate(levels):
        if stats.level != expected:
            raise ValueError(f"levels must be contiguous from 0, found {stats.level} at position {expected}")
    estimate = float(sum(s.b_hat for s in levels))
    bound = float(sum(s.v_hat / s.n_samples for s in levels))
    return MlmcEstimate(estimate, tuple(levels), bound)


def mlmc_estimate(
    model: ShsModel,
    functional: PathFunctional,
    payoff: Payoff,
    max_level: int,
    replications: Sequence[int],
    kappa: int,
    horizon: float,
    noise: NoiseStream,
    threads: int = 1,
    batch_elements: int = DEFAULT_BATCH_ELEMENTS,
) -> MlmcEstimate:
    """
    Multilevel estimate with fixed L and replication numbers (N_0..N_L).

    Args:
        model: The hybrid system
        functional: Path functional Y
        payoff: Map applied to Y
        max_level: Finest level L
        replications: N_ell for ell = 0..L
        kappa: Steps at level 0
        horizon: Simulated time window
        noise: Noise source

    Returns:
        MlmcEstimate with the per-level statistics
    """
    if max_level < 0:
        raise ValueError(f"finest level must be >= 0, got {max_level}")
    if len(replications) != max_level + 1:
        raise ValueError(f"expected {max_level + 1} replication numbers, got {len(replications)}")
    if any(n < 1 for n in replications):
        raise ValueError("every level needs at least one replication")

    levels = [
        level_correction_stats(
            model, functional, payoff, level, kappa, horizon, n, noise,
            threads=threads, batch_elements=batch_elements,
        )
        for level, n in enumerate(replications)
    ]
    result = combine_levels(levels)
    logger.info(f"MLMC with L={max_level}: estimate {result.estimate:.6g}, variance bound {result.variance_bound:.3g}")
    return result
