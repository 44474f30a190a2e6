"""Stochastic hybrid system models and path functionals."""

from .invariants import BoxInvariant, project_to_boundary
from .shs import HybridState, ModeSemantics, ShsModel, ValidationResult, sample_kernel, validate_model
from .functionals import (
    NEVER_EXITS,
    FirstExitTime,
    PathFunctional,
    RunningMax,
    TerminalValue,
    evaluate_functional,
)
from .library import TclParams, brownian_barrier_model, linear_model, reflection_cdf, tcl_model

__all__ = [
    "BoxInvariant",
    "project_to_boundary",
    "HybridState",
    "ModeSemantics",
    "ShsModel",
    "ValidationResult",
    "sample_kernel",
    "validate_model",
    "NEVER_EXITS",
    "FirstExitTime",
    "PathFunctional",
    "RunningMax",
    "TerminalValue",
    "evaluate_functional",
    "TclParams",
    "brownian_barrier_model",
    "linear_model",
    "reflection_cdf",
    "tcl_model",
]
