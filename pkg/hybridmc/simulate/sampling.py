"""
Batched sampling of functional values per level.

Replications are split into fixed-size blocks; blocks may run on a thread
pool but results are always assembled in replication order, so the output
does not depend on the worker count.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from hybridmc.models.functionals import PathFunctional
from hybridmc.models.shs import ShsModel
from hybridmc.simulate.levels import LevelParams
from hybridmc.simulate.noise import NoiseStream
from hybridmc.simulate.paths import derive_coarse_noise, simulate_batch

logger = logging.getLogger(__name__)

DEFAULT_BATCH_ELEMENTS = 2**20


@dataclass(frozen=True)
class LevelSamples:
    """
    Raw functional values of one level.

    Attributes:
        level: Level ell
        fine: (N,) values of Y on the level-ell grid
        coarse: (N,) values on the coupled level-(ell-1) grid, None at level 0
        cost: Euler steps spent
    """

    level: int
    fine: np.ndarray
    coarse: np.ndarray | None
    cost: int

    @property
    def count(self) -> int:
        return len(self.fine)

    def extend(self, more: "LevelSamples") -> "LevelSamples":
        """Append samples drawn for later replication indices."""
        if more.level != self.level:
            raise ValueError("cannot merge samples of different levels")
        coarse = None if self.coarse is None else np.concatenate([self.coarse, more.coarse])
        return LevelSamples(self.level, np.concatenate([self.fine, more.fine]), coarse, self.cost + more.cost)


def steps_per_sample(level: int, kappa: int) -> int:
    """Euler steps per replication: n at level 0, n_f + n_c above."""
    n_fine = kappa * 2**level
    return n_fine if level == 0 else n_fine + n_fine // 2


def sample_level(
    model: ShsModel,
    functional: PathFunctional,
    level: int,
    kappa: int,
    horizon: float,
    noise: NoiseStream,
    replications: range,
    threads: int = 1,
    batch_elements: int = DEFAULT_BATCH_ELEMENTS,
    coupled: bool | None = None,
) -> LevelSamples:
    """
    Functional values for the given replication indices of one level.

    Level 0 draws single paths; levels >= 1 draw coupled fine/coarse pairs
    unless `coupled` is False, as for single-level estimates.
    """
    params = LevelParams(kappa, level, horizon)
    coupled = level >= 1 if coupled is None else coupled and level >= 1
    if len(replications) == 0:
        empty = np.empty(0)
        return LevelSamples(level, empty, empty.copy() if coupled else None, 0)

    block = max(1, batch_elements // ((params.n_steps + 1) * max(model.dim, model.noise_dim)))
    blocks = [
        range(start, min(start + block, replications.stop))
        for start in range(replications.start, replications.stop, block)
    ]

    def run_block(indices: range) -> tuple[np.ndarray, np.ndarray | None]:
        w, u = noise.batch(level, indices, params.n_steps, model.noise_dim, model.needs_uniforms)
        fine = simulate_batch(model, params, w, u)
        y_fine = functional.evaluate_batch(fine.modes, fine.states, params.dt)
        if not coupled:
            return y_fine, None
        coarse_params = params.coarser()
        w_coarse, u_coarse = derive_coarse_noise(w, u)
        coarse = simulate_batch(model, coarse_params, w_coarse, u_coarse)
        return y_fine, functional.evaluate_batch(coarse.modes, coarse.states, coarse_params.dt)

    if threads > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run_block, blocks))
    else:
        results = [run_block(b) for b in blocks]

    fine = np.concatenate([r[0] for r in results])
    coarse = np.concatenate([r[1] for r in results]) if coupled else None
    cost = len(replications) * (steps_per_sample(level, kappa) if coupled else params.n_steps)
    logger.debug(
        f"Level {level}: sampled replications {replications.start}..{replications.stop - 1} "
        f"in {len(blocks)} block(s), {cost} Euler steps"
    )
    return LevelSamples(level, fine, coarse, cost)
