"""
Counter-based Gaussian noise addressed by (level, replication, step).

Every (level, replication) pair owns a Philox stream whose counter block is
(0, kind, level, replication) under a key derived from the master seed.
Step k reads the k-th m-vector of that stream, so a vector depends only on
its address and never on call order or thread scheduling.
"""

from dataclasses import dataclass, field

import numpy as np

_NORMALS = 0
_UNIFORMS = 1


@dataclass(frozen=True)
class NoiseStream:
    """Reproducible standard normal vectors for every simulation address."""

    seed: int
    stream: int = 0
    _key: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.seed < 0 or self.stream < 0:
            raise ValueError(f"seed and stream must be non-negative, got {self.seed}, {self.stream}")
        # stream 0 is the master stream; others are independent children of the same seed
        spawn_key = (self.stream,) if self.stream else ()
        key = np.random.SeedSequence(self.seed, spawn_key=spawn_key).generate_state(2, dtype=np.uint64)
        object.__setattr__(self, "_key", key)

    def _generator(self, kind: int, level: int, replication: int) -> np.random.Generator:
        counter = np.array([0, kind, level, replication], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(counter=counter, key=self._key))

    def normals(self, level: int, replication: int, n_steps: int, dim: int = 1) -> np.ndarray:
        """(n_steps, dim) array; row k is the vector at address (level, replication, k)."""
        return self._generator(_NORMALS, level, replication).standard_normal((n_steps, dim))

    def normal(self, level: int, replication: int, step: int, dim: int = 1) -> np.ndarray:
        """Single vector at address (level, replication, step)."""
        return self.normals(level, replication, step + 1, dim)[step]

    def uniforms(self, level: int, replication: int, n_steps: int) -> np.ndarray:
        """Kernel variates; step k reads entry k."""
        return self._generator(_UNIFORMS, level, replication).random(n_steps)

    def batch(
        self,
        level: int,
        replications: range,
        n_steps: int,
        dim: int = 1,
        with_uniforms: bool = True,
    ) -> tuple[np.ndarray, np.ndarray | None]:
        """
        Noise for a contiguous block of replications.

        Returns:
            (W, U): W has shape (B, n_steps, dim); U has shape (B, n_steps) or is None
        """
        w = np.empty((len(replications), n_steps, dim))
        for row, i in enumerate(replications):
            w[row] = self.normals(level, i, n_steps, dim)
        if not with_uniforms:
            return w, None
        u = np.empty((len(replications), n_steps))
        for row, i in enumerate(replications):
            u[row] = self.uniforms(level, i, n_steps)
        return w, u
