"""
Time-discretisation levels.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class LevelParams:
    """
    Level ell of the Euler scheme: n = kappa * 2**ell steps over [0, horizon].
    """

    kappa: int
    level: int
    horizon: float

    def __post_init__(self):
        if self.kappa < 1:
            raise ValueError(f"kappa must be >= 1, got {self.kappa}")
        if self.level < 0:
            raise ValueError(f"level must be >= 0, got {self.level}")
        if not self.horizon > 0:
            raise ValueError(f"horizon must be positive, got {self.horizon}")

    @property
    def n_steps(self) -> int:
        return self.kappa * 2**self.level

    @property
    def dt(self) -> float:
        return self.horizon / self.n_steps

    def coarser(self) -> "LevelParams":
        """Parameters of level ell - 1 on the same horizon."""
        return LevelParams(self.kappa, self.level - 1, self.horizon)
