"""
Exception hierarchy. Every error is also a ValueError.
"""


class HybridMCError(ValueError):
    """Base class for HybridMC errors."""


class ModelError(HybridMCError):
    """Invalid model definition or kernel row."""


class ProjectionError(HybridMCError):
    """Projection requested for a point inside the invariant."""


class FunctionalError(HybridMCError):
    """Functional cannot be evaluated on the given path."""


class AllocationError(HybridMCError):
    """Replication numbers cannot be allocated (all variances vanish)."""


class RateFitError(HybridMCError):
    """Not enough usable levels for the decay-rate regression."""


class RateNotIdentifiedError(HybridMCError):
    """Bias constraint cannot be certified without a positive decay rate."""


class ConfigError(HybridMCError):
    """Experiment configuration could not be parsed or validated."""

    def __init__(self, message: str, diagnostics: list[str] | None = None):
        self.diagnostics = list(diagnostics or [])
        detail = "\n".join(f"  - {d}" for d in self.diagnostics)
        super().__init__(f"{message}\n{detail}" if detail else message)


class CostCapError(HybridMCError):
    """Cost cap too small for the initial samples of an adaptive run."""
