"""
Axis-aligned box invariants.
"""

import math
from dataclasses import dataclass

import numpy as np

from hybridmc.errors import ModelError, ProjectionError


@dataclass(frozen=True)
class BoxInvariant:
    """
    Open product region (lower_1, upper_1) x ... x (lower_n, upper_n).

    Bounds may be -inf / +inf. Membership uses strict inequalities in
    every dimension; the closure adds the finite faces.
    """

    lower: tuple[float, ...]
    upper: tuple[float, ...]

    def __post_init__(self):
        lower = tuple(float(v) for v in self.lower)
        upper = tuple(float(v) for v in self.upper)
        if len(lower) != len(upper) or not lower:
            raise ModelError("box bounds must be non-empty and of equal dimension")
        for i, (lo, hi) in enumerate(zip(lower, upper)):
            if math.isnan(lo) or math.isnan(hi) or not lo < hi:
                raise ModelError(f"box dimension {i}: lower {lo} must be < upper {hi}")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def interval(cls, lower: float = -math.inf, upper: float = math.inf) -> "BoxInvariant":
        """One-dimensional invariant (lower, upper)."""
        return cls((lower,), (upper,))

    @classmethod
    def whole_space(cls, dim: int) -> "BoxInvariant":
        return cls((-math.inf,) * dim, (math.inf,) * dim)

    @property
    def dim(self) -> int:
        return len(self.lower)

    @property
    def lower_array(self) -> np.ndarray:
        return np.asarray(self.lower, dtype=float)

    @property
    def upper_array(self) -> np.ndarray:
        return np.asarray(self.upper, dtype=float)

    def contains(self, z) -> bool:
        """Strict membership test for a single point."""
        z = np.asarray(z, dtype=float).reshape(self.dim)
        return bool(np.all(z > self.lower_array) and np.all(z < self.upper_array))

    def contains_closure(self, z) -> bool:
        z = np.asarray(z, dtype=float).reshape(self.dim)
        return bool(np.all(z >= self.lower_array) and np.all(z <= self.upper_array))

    def clamp(self, z) -> np.ndarray:
        """Componentwise clamp to the closure; identity on interior points."""
        return np.clip(np.asarray(z, dtype=float), self.lower_array, self.upper_array)


def project_to_boundary(inv: BoxInvariant, z) -> np.ndarray:
    """
    Normal projection of an outside point onto the box boundary.

    For boxes this is the componentwise clamp: coordinates already within
    bounds are kept, the others move to the violated face.
    """
    z = np.asarray(z, dtype=float).reshape(inv.dim)
    if inv.contains(z):
        raise ProjectionError(f"point {z.tolist()} lies inside the invariant; projection undefined")
    return inv.clamp(z)
