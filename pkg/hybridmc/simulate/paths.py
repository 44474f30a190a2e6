"""
Discrete executions: single-level paths and coupled fine/coarse pairs.
"""

from dataclasses import dataclass

import numpy as np

from hybridmc.models.shs import HybridState, ShsModel
from hybridmc.simulate.euler import euler_step
from hybridmc.simulate.levels import LevelParams
from hybridmc.simulate.noise import NoiseStream

_SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class DiscretePath:
    """
    Grid of hybrid states (q_k, z_k), k = 0..n, at times k * dt.

    The continuous-time execution is the piecewise-constant interpolation
    of the grid values. `switch_steps` lists the grid indices reached by a
    jump.
    """

    params: LevelParams
    modes: np.ndarray
    states: np.ndarray
    switch_steps: tuple[int, ...] = ()

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.params.n_steps + 1) * self.params.dt

    def state(self, k: int) -> HybridState:
        return HybridState(int(self.modes[k]), tuple(self.states[k]))

    def __len__(self) -> int:
        return len(self.modes)


@dataclass(frozen=True)
class CoupledPaths:
    """Fine path at level ell and coarse path at level ell - 1 driven by shared noise."""

    fine: DiscretePath
    coarse: DiscretePath


@dataclass(frozen=True)
class PathBatch:
    """B paths on one grid: modes (B, n+1), states (B, n+1, dim), jumps (B, n)."""

    params: LevelParams
    modes: np.ndarray
    states: np.ndarray
    jumps: np.ndarray

    def path(self, row: int) -> DiscretePath:
        switches = tuple(int(k) + 1 for k in np.flatnonzero(self.jumps[row]))
        return DiscretePath(self.params, self.modes[row], self.states[row], switches)


def simulate_batch(model: ShsModel, params: LevelParams, w: np.ndarray, u: np.ndarray | None = None) -> PathBatch:
    """
    Iterate the Euler update over n steps for a batch of driving sequences.

    Args:
        model: The hybrid system
        params: Level parameters; n_steps must match w
        w: (B, n, m) standard normal increments
        u: (B, n) kernel variates or None

    Returns:
        PathBatch starting from the model's initial state
    """
    batch, n_steps = w.shape[0], w.shape[1]
    if n_steps != params.n_steps:
        raise ValueError(f"noise has {n_steps} steps, level needs {params.n_steps}")

    modes = np.empty((batch, n_steps + 1), dtype=np.int64)
    states = np.empty((batch, n_steps + 1, model.dim))
    jumps = np.zeros((batch, n_steps), dtype=bool)

    q = np.full(batch, model.x0.mode, dtype=np.int64)
    z = np.tile(model.x0.z, (batch, 1))
    modes[:, 0] = q
    states[:, 0] = z
    dt = params.dt
    for k in range(n_steps):
        q, z, jumps[:, k] = euler_step(model, q, z, dt, w[:, k], None if u is None else u[:, k])
        modes[:, k + 1] = q
        states[:, k + 1] = z
    return PathBatch(params, modes, states, jumps)


def derive_coarse_noise(w: np.ndarray, u: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray | None]:
    """
    Coarse driving sequence from fine increments.

    Coarse step k uses (W_{2k} + W_{2k+1}) / sqrt(2) and the fine kernel
    variate of step 2k. Works on (n, m) or (B, n, m) arrays.
    """
    w_coarse = (w[..., 0::2, :] + w[..., 1::2, :]) / _SQRT2
    u_coarse = None if u is None else u[..., 0::2]
    return w_coarse, u_coarse


def simulate_path(model: ShsModel, params: LevelParams, w: np.ndarray, u: np.ndarray | None = None) -> DiscretePath:
    """Single path driven by explicit increments w (n, m) and variates u (n,)."""
    batch = simulate_batch(model, params, w[np.newaxis], None if u is None else u[np.newaxis])
    return batch.path(0)


def _draw(model: ShsModel, params: LevelParams, noise: NoiseStream, replication: int):
    w = noise.normals(params.level, replication, params.n_steps, model.noise_dim)
    u = noise.uniforms(params.level, replication, params.n_steps) if model.needs_uniforms else None
    return w, u


def sample_path(model: ShsModel, params: LevelParams, noise: NoiseStream, replication: int) -> DiscretePath:
    """Path of replication i at the given level, driven by addresses (level, i, k)."""
    w, u = _draw(model, params, noise, replication)
    return simulate_path(model, params, w, u)


def sample_coupled(
    model: ShsModel,
    level: int,
    kappa: int,
    horizon: float,
    noise: NoiseStream,
    replication: int,
) -> CoupledPaths:
    """
    Coupled fine (level) and coarse (level - 1) paths of one replication.

    Only fine-step addresses are drawn; the coarse increments are derived.
    """
    if level < 1:
        raise ValueError("coupled sampling needs level >= 1; level 0 uses sample_path")
    fine_params = LevelParams(kappa, level, horizon)
    w, u = _draw(model, fine_params, noise, replication)
    fine = simulate_path(model, fine_params, w, u)
    coarse = simulate_path(model, fine_params.coarser(), *derive_coarse_noise(w, u))
    return CoupledPaths(fine, coarse)
