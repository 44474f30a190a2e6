"""Euler-Maruyama discretisation of hybrid executions."""

from .levels import LevelParams
from .noise import NoiseStream
from .euler import euler_step, euler_update
from .paths import (
    CoupledPaths,
    DiscretePath,
    PathBatch,
    derive_coarse_noise,
    sample_coupled,
    sample_path,
    simulate_batch,
    simulate_path,
)
from .sampling import LevelSamples, sample_level, steps_per_sample

__all__ = [
    "LevelParams",
    "NoiseStream",
    "euler_step",
    "euler_update",
    "CoupledPaths",
    "DiscretePath",
    "PathBatch",
    "derive_coarse_noise",
    "sample_coupled",
    "sample_path",
    "simulate_batch",
    "simulate_path",
    "LevelSamples",
    "sample_level",
    "steps_per_sample",
]
