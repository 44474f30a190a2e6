"""
Turn validated config sections into models, functionals and payoffs.
"""

import dataclasses
import inspect
import math
from dataclasses import dataclass

from hybridmc.errors import ConfigError, HybridMCError
from hybridmc.estimators.payoffs import Indicator, Smoother
from hybridmc.experiments.schema import ExperimentConfig, FunctionalSpec, ModelSpec
from hybridmc.models.functionals import FirstExitTime, PathFunctional, RunningMax, TerminalValue
from hybridmc.models.invariants import BoxInvariant
from hybridmc.models.library import TclParams, brownian_barrier_model, linear_model, tcl_model
from hybridmc.models.shs import ModeSemantics, ShsModel

_INT_PARAMS = {"initial_mode"}


@dataclass(frozen=True)
class Problem:
    """A model with the functional Y and the threshold s* of P(Y <= s*)."""

    model: ShsModel
    functional: PathFunctional
    threshold: float


def _check_params(name: str, params: dict, allowed: set[str]) -> None:
    unknown = sorted(set(params) - allowed)
    if unknown:
        raise ConfigError(
            f"unknown parameters for model {name}",
            [f"model.params.{key}: not one of {sorted(allowed)}" for key in unknown],
        )


def _tcl_params(params: dict) -> TclParams:
    allowed = {f.name for f in dataclasses.fields(TclParams)}
    _check_params("tcl", params, allowed)
    values = {k: int(v) if k in _INT_PARAMS else float(v) for k, v in params.items()}
    return TclParams(**values)


def build_model(spec: ModelSpec) -> ShsModel:
    """Instantiate a built-in model with overrides."""
    try:
        if spec.name == "tcl":
            semantics = ModeSemantics(spec.semantics) if spec.semantics else ModeSemantics.DIGITAL
            return tcl_model(_tcl_params(spec.params), semantics=semantics)
        factory = {"brownian": brownian_barrier_model, "linear": linear_model}[spec.name]
        allowed = set(inspect.signature(factory).parameters)
        _check_params(spec.name, spec.params, allowed)
        if spec.semantics not in (None, "projection"):
            raise ConfigError(f"model {spec.name} supports projection semantics only")
        return factory(**{k: float(v) for k, v in spec.params.items()})
    except ConfigError:
        raise
    except (HybridMCError, TypeError) as e:
        raise ConfigError(f"invalid parameters for model {spec.name}", [str(e)]) from e


def _defaults(spec: ModelSpec) -> dict:
    if spec.name == "tcl":
        return {"variant": "running_max", "horizon": 1.0, "threshold": _tcl_params(spec.params).max_threshold}
    if spec.name == "brownian":
        return {"variant": "running_max", "horizon": 1.0, "threshold": 1.0}
    return {"variant": "terminal_value", "horizon": 1.0, "threshold": None}


def _safe_box(spec: FunctionalSpec, dim: int) -> BoxInvariant:
    lower = spec.safe_lower if spec.safe_lower is not None else [-math.inf] * dim
    upper = spec.safe_upper if spec.safe_upper is not None else [math.inf] * dim
    if len(lower) != dim or len(upper) != dim:
        raise ConfigError("invalid safe set", [f"functional.safe_lower/safe_upper: need {dim} entries"])
    return BoxInvariant(tuple(float(x) for x in lower), tuple(float(x) for x in upper))


def build_problem(config: ExperimentConfig) -> Problem:
    """Model, functional and threshold for an experiment."""
    model = build_model(config.model)
    spec = config.functional
    preset = _defaults(config.model)
    variant = spec.variant or preset["variant"]
    horizon = spec.horizon if spec.horizon is not None else preset["horizon"]
    threshold = spec.threshold if spec.threshold is not None else preset["threshold"]
    if threshold is None:
        raise ConfigError("missing threshold", [f"functional.threshold: required for model {config.model.name}"])
    if variant != "first_exit" and (spec.safe_lower is not None or spec.safe_upper is not None):
        raise ConfigError("safe set given for a non first-exit functional", ["functional.safe_lower/safe_upper"])

    try:
        if variant == "first_exit":
            functional = FirstExitTime.within(model, [_safe_box(spec, model.dim)], horizon)
        elif variant == "running_max":
            functional = RunningMax(horizon, coordinate=spec.coordinate)
        else:
            functional = TerminalValue(horizon, coordinate=spec.coordinate)
    except ConfigError:
        raise
    except HybridMCError as e:
        raise ConfigError("invalid functional", [str(e)]) from e
    if getattr(functional, "coordinate", 0) >= model.dim:
        raise ConfigError("invalid functional", [f"functional.coordinate: model state has {model.dim} coordinate(s)"])
    barrier = config.model.params.get("barrier", math.inf) if config.model.name == "brownian" else math.inf
    if variant == "running_max" and threshold >= barrier:
        raise ConfigError("threshold at or above the barrier", [
            f"functional.threshold: the clamped running maximum never exceeds the barrier {barrier}",
        ])
    return Problem(model, functional, float(threshold))


def build_payoff(smoothing: int | None, threshold: float) -> Smoother | Indicator:
    return Indicator(threshold) if smoothing is None else Smoother(smoothing, threshold)
