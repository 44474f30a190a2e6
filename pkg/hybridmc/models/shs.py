"""
Stochastic hybrid system models.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Callable, Optional, Sequence

import numpy as np

from hybridmc.errors import ModelError
from hybridmc.models.invariants import BoxInvariant

logger = logging.getLogger(__name__)

KERNEL_TOLERANCE = 1e-12

# (q: (B,), z: (B, n)) -> (B, n)
DriftField = Callable[[np.ndarray, np.ndarray], np.ndarray]
# (q: (B,), z: (B, n)) -> (B, n, m)
DiffusionField = Callable[[np.ndarray, np.ndarray], np.ndarray]
# (q, z on the boundary of X(q)) -> probability vector over modes
BoundaryKernel = Callable[[int, np.ndarray], Sequence[float]]
# (q: (B,), z: (B, n)) -> (B,) modes
ModeLaw = Callable[[np.ndarray, np.ndarray], np.ndarray]


class ModeSemantics(str, Enum):
    """How the discrete mode is updated after an Euler step."""

    # Project onto the invariant boundary, then draw the new mode from the kernel.
    PROJECTION = "projection"
    # Keep the Euler state and recompute the mode from it at every grid point.
    DIGITAL = "digital"


@dataclass(frozen=True)
class HybridState:
    """Hybrid state (q, z): mode index and continuous vector."""

    mode: int
    continuous: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "mode", int(self.mode))
        values = np.atleast_1d(np.asarray(self.continuous, dtype=float))
        object.__setattr__(self, "continuous", tuple(float(v) for v in values))

    @property
    def z(self) -> np.ndarray:
        return np.asarray(self.continuous, dtype=float)


@dataclass(frozen=True)
class ShsModel:
    """
    Continuous-time stochastic hybrid system with forced transitions.

    Attributes:
        name: Short identifier used in reports
        invariants: One box per mode; leaving it forces a transition
        drift: Vectorised drift field b(q, z)
        diffusion: Vectorised diffusion field sigma(q, z)
        noise_dim: Dimension m of the driving Wiener process
        x0: Initial hybrid state
        kernel: Boundary transition kernel r(q, z)
        semantics: Mode-update rule used by the Euler scheme
        mode_law: Optional vectorised mode law for DIGITAL semantics; when
            absent the kernel is sampled at the clamped boundary point
    """

    name: str
    invariants: tuple[BoxInvariant, ...]
    drift: DriftField
    diffusion: DiffusionField
    noise_dim: int
    x0: HybridState
    kernel: BoundaryKernel
    semantics: ModeSemantics = ModeSemantics.PROJECTION
    mode_law: Optional[ModeLaw] = field(default=None, compare=False)

    @property
    def n_modes(self) -> int:
        return len(self.invariants)

    @property
    def dim(self) -> int:
        return len(self.x0.continuous)

    @cached_property
    def lower_bounds(self) -> np.ndarray:
        """(Q, n) array of invariant lower bounds."""
        return np.array([inv.lower for inv in self.invariants], dtype=float)

    @cached_property
    def upper_bounds(self) -> np.ndarray:
        return np.array([inv.upper for inv in self.invariants], dtype=float)

    @property
    def needs_uniforms(self) -> bool:
        """Whether Euler steps may consume kernel variates."""
        return self.semantics is ModeSemantics.PROJECTION or self.mode_law is None

    def inside(self, q: np.ndarray, z: np.ndarray) -> np.ndarray:
        """Strict invariant membership for a batch of states."""
        return np.all((z > self.lower_bounds[q]) & (z < self.upper_bounds[q]), axis=-1)

    def inside_closure(self, q: np.ndarray, z: np.ndarray) -> np.ndarray:
        return np.all((z >= self.lower_bounds[q]) & (z <= self.upper_bounds[q]), axis=-1)

    def clamp(self, q: np.ndarray, z: np.ndarray) -> np.ndarray:
        """Clamp a batch of states to their modes' invariant closures."""
        return np.clip(z, self.lower_bounds[q], self.upper_bounds[q])


@dataclass
class ValidationResult:
    """Outcome of validate_model; violations are human-readable strings."""

    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def kernel_row(model: ShsModel, q: int, z) -> np.ndarray:
    """Evaluate the kernel and check that the row is a probability vector."""
    probs = np.asarray(model.kernel(int(q), np.asarray(z, dtype=float)), dtype=float).reshape(-1)
    if probs.shape != (model.n_modes,):
        raise ModelError(
            f"kernel row for mode {q} has {probs.size} entries, expected {model.n_modes}"
        )
    if not np.all(np.isfinite(probs)) or np.any(probs < 0.0):
        raise ModelError(f"kernel not stochastic: negative or non-finite entry for mode {q}")
    if abs(probs.sum() - 1.0) > KERNEL_TOLERANCE:
        raise ModelError(f"kernel not stochastic: row for mode {q} sums to {probs.sum():.12g}")
    return probs


def sample_kernel(model: ShsModel, q: int, z, u: float) -> int:
    """
    Draw the post-jump mode by inverse CDF on the kernel row r(q, z).

    Args:
        model: The hybrid system
        q: Mode whose invariant boundary was hit
        z: Boundary point
        u: Uniform(0, 1) variate

    Returns:
        The new mode index
    """
    probs = kernel_row(model, q, z)
    cumulative = np.cumsum(probs)
    index = int(np.searchsorted(cumulative, u, side="right"))
    return min(index, model.n_modes - 1)


def _sample_points(model: ShsModel, inv: BoxInvariant, rng: np.random.Generator, count: int) -> np.ndarray:
    """Points in the invariant closure used to spot-check the fields."""
    points = np.empty((count, inv.dim))
    anchor = model.x0.z if model.x0.z.shape == (inv.dim,) else np.zeros(inv.dim)
    for i, (lo, hi) in enumerate(zip(inv.lower, inv.upper)):
        if np.isfinite(lo) and np.isfinite(hi):
            points[:, i] = rng.uniform(lo, hi, count)
        elif np.isfinite(lo):
            points[:, i] = lo + rng.exponential(1.0, count)
        elif np.isfinite(hi):
            points[:, i] = hi - rng.exponential(1.0, count)
        else:
            points[:, i] = anchor[i] + rng.standard_normal(count)
    return points


def _boundary_points(inv: BoxInvariant, interior: np.ndarray) -> list[np.ndarray]:
    points = []
    for base in interior:
        for i in range(inv.dim):
            for bound in (inv.lower[i], inv.upper[i]):
                if np.isfinite(bound):
                    point = base.copy()
                    point[i] = bound
                    points.append(point)
    return points


def validate_model(model: ShsModel, samples_per_mode: int = 8) -> ValidationResult:
    """
    Check a model for structural problems without raising.

    Returns:
        ValidationResult listing every violation found
    """
    result = ValidationResult()
    violations = result.violations

    if model.n_modes < 1:
        violations.append("model has no modes")
        return result
    if model.noise_dim < 1:
        violations.append(f"noise dimension must be >= 1, got {model.noise_dim}")
    dim = model.dim
    for q, inv in enumerate(model.invariants):
        if inv.dim != dim:
            violations.append(f"dimension mismatch: invariant of mode {q} has dimension {inv.dim}, state has {dim}")
    if violations:
        return result

    q0 = model.x0.mode
    if not 0 <= q0 < model.n_modes:
        violations.append(f"initial mode {q0} out of range 0..{model.n_modes - 1}")
        return result
    if not model.invariants[q0].contains(model.x0.z):
        violations.append(
            f"initial state outside invariant: z0={list(model.x0.continuous)} not in mode {q0} invariant"
        )

    rng = np.random.default_rng(0)
    for q, inv in enumerate(model.invariants):
        points = _sample_points(model, inv, rng, samples_per_mode)
        modes = np.full(samples_per_mode, q, dtype=int)
        try:
            b = np.asarray(model.drift(modes, points), dtype=float)
            if b.shape != (samples_per_mode, dim):
                violations.append(f"dimension mismatch: drift of mode {q} returned shape {b.shape}")
            elif not np.all(np.isfinite(b)):
                violations.append(f"drift not finite on invariant of mode {q}")
        except Exception as e:
            violations.append(f"drift failed on mode {q}: {e}")
        try:
            s = np.asarray(model.diffusion(modes, points), dtype=float)
            if s.shape != (samples_per_mode, dim, model.noise_dim):
                violations.append(f"dimension mismatch: diffusion of mode {q} returned shape {s.shape}")
            elif not np.all(np.isfinite(s)):
                violations.append(f"diffusion not finite on invariant of mode {q}")
        except Exception as e:
            violations.append(f"diffusion failed on mode {q}: {e}")

        for point in _boundary_points(inv, points[:2]):
            try:
                kernel_row(model, q, point)
            except ModelError as e:
                violations.append(f"{e} at z={point.tolist()}")
                break
            except Exception as e:
                violations.append(f"kernel failed on mode {q}: {e}")
                break

        if model.mode_law is not None:
            try:
                new_modes = np.asarray(model.mode_law(modes, points))
                if new_modes.shape != modes.shape or np.any((new_modes < 0) | (new_modes >= model.n_modes)):
                    violations.append(f"mode law returned invalid modes for mode {q}")
            except Exception as e:
                violations.append(f"mode law failed on mode {q}: {e}")

    if violations:
        logger.debug(f"Model {model.name} has {len(violations)} violation(s)")
    return result
