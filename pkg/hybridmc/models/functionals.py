"""
Path functionals Y evaluated on piecewise-constant discrete paths.
"""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, replace
from typing import TYPE_CHECKING, Sequence

import numpy as np

from hybridmc.errors import FunctionalError
from hybridmc.models.invariants import BoxInvariant

if TYPE_CHECKING:
    from hybridmc.models.shs import ShsModel
    from hybridmc.simulate.paths import DiscretePath

# First exit time of a path that stays in the safe set; greater than any horizon.
NEVER_EXITS = math.inf

_GRID_SLACK = 1e-9


def grid_points_within(horizon: float, dt: float, n_steps: int) -> int:
    """Index of the last grid point k*dt that does not exceed the horizon."""
    if n_steps * dt < horizon * (1.0 - 1e-12):
        raise FunctionalError(
            f"path covers [0, {n_steps * dt:.12g}] but the functional needs [0, {horizon:.12g}]"
        )
    return min(n_steps, int(math.floor(horizon / dt + _GRID_SLACK)))


@dataclass(frozen=True)
class PathFunctional(ABC):
    """A real-valued functional of an execution over [0, horizon]."""

    horizon: float

    def __post_init__(self):
        if not self.horizon > 0:
            raise FunctionalError(f"horizon must be positive, got {self.horizon}")

    @property
    @abstractmethod
    def kind(self) -> str:
        """Variant tag."""

    @abstractmethod
    def evaluate_batch(self, modes: np.ndarray, states: np.ndarray, dt: float) -> np.ndarray:
        """
        Evaluate on a batch of paths.

        Args:
            modes: (B, n+1) mode indices
            states: (B, n+1, dim) continuous states
            dt: Grid spacing

        Returns:
            (B,) functional values
        """

    def windowed(self, threshold: float, reach: float) -> "PathFunctional":
        """Functional whose window covers what a payoff at `threshold` needs."""
        return self

    def _check_coordinate(self, coordinate: int, states: np.ndarray) -> None:
        if not 0 <= coordinate < states.shape[-1]:
            raise FunctionalError(
                f"coordinate {coordinate} out of range for a {states.shape[-1]}-dimensional state"
            )


@dataclass(frozen=True)
class FirstExitTime(PathFunctional):
    """
    First grid time at which the path leaves the safe set.

    The safe set is given per mode as an open box; use `within` to intersect
    the boxes with the model's invariants.
    """

    safe_set: tuple[BoxInvariant, ...] = ()

    def __post_init__(self):
        super().__post_init__()
        if not self.safe_set:
            raise FunctionalError("first exit time needs one safe box per mode")
        object.__setattr__(self, "safe_set", tuple(self.safe_set))

    @classmethod
    def within(cls, model: "ShsModel", boxes: Sequence[BoxInvariant], horizon: float) -> "FirstExitTime":
        """Intersect per-mode safe boxes with the model invariants."""
        if len(boxes) == 1 and model.n_modes > 1:
            boxes = list(boxes) * model.n_modes
        if len(boxes) != model.n_modes:
            raise FunctionalError(f"expected {model.n_modes} safe boxes, got {len(boxes)}")
        safe = []
        for box, inv in zip(boxes, model.invariants):
            lower = np.maximum(box.lower_array, inv.lower_array)
            upper = np.minimum(box.upper_array, inv.upper_array)
            safe.append(BoxInvariant(tuple(lower), tuple(upper)))
        return cls(horizon=horizon, safe_set=tuple(safe))

    @property
    def kind(self) -> str:
        return "first_exit"

    def windowed(self, threshold: float, reach: float) -> "FirstExitTime":
        needed = threshold + reach
        return replace(self, horizon=needed) if needed > self.horizon else self

    def evaluate_batch(self, modes: np.ndarray, states: np.ndarray, dt: float) -> np.ndarray:
        n_steps = states.shape[1] - 1
        last = grid_points_within(self.horizon, dt, n_steps)
        lower = np.array([box.lower for box in self.safe_set], dtype=float)
        upper = np.array([box.upper for box in self.safe_set], dtype=float)
        if lower.shape[1] != states.shape[-1]:
            raise FunctionalError("safe set dimension does not match the state dimension")
        q = modes[:, : last + 1]
        z = states[:, : last + 1]
        safe = np.all((z > lower[q]) & (z < upper[q]), axis=-1)
        exited = ~safe
        first = np.argmax(exited, axis=1)
        return np.where(exited.any(axis=1), first * dt, NEVER_EXITS)


@dataclass(frozen=True)
class RunningMax(PathFunctional):
    """Maximum of one coordinate over the grid points in [0, horizon]."""

    coordinate: int = 0

    @property
    def kind(self) -> str:
        return "running_max"

    def evaluate_batch(self, modes: np.ndarray, states: np.ndarray, dt: float) -> np.ndarray:
        self._check_coordinate(self.coordinate, states)
        last = grid_points_within(self.horizon, dt, states.shape[1] - 1)
        return states[:, : last + 1, self.coordinate].max(axis=1)


@dataclass(frozen=True)
class TerminalValue(PathFunctional):
    """Coordinate value at the last grid point not after the horizon."""

    coordinate: int = 0

    @property
    def kind(self) -> str:
        return "terminal_value"

    def evaluate_batch(self, modes: np.ndarray, states: np.ndarray, dt: float) -> np.ndarray:
        self._check_coordinate(self.coordinate, states)
        last = grid_points_within(self.horizon, dt, states.shape[1] - 1)
        return states[:, last, self.coordinate].copy()


def evaluate_functional(functional: PathFunctional, path: "DiscretePath") -> float:
    """Apply the functional to a single discrete path."""
    values = functional.evaluate_batch(path.modes[np.newaxis], path.states[np.newaxis], path.params.dt)
    return float(values[0])
