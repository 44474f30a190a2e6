import math

import pytest

from hybridmc.errors import ConfigError
from hybridmc.estimators import Indicator, Smoother
from hybridmc.experiments import build_problem, parse_config
from hybridmc.experiments.builders import build_model, build_payoff
from hybridmc.experiments.schema import ModelSpec
from hybridmc.models import FirstExitTime, RunningMax, TerminalValue
from hybridmc.models.shs import ModeSemantics


def _config(model, functional=None, **run):
    data = {"model": model, "run": {"mode": "smc", "seed": 1, **run}}
    if functional is not None:
        data["functional"] = functional
    return parse_config(data)


def test_tcl_preset():
    problem = build_problem(_config("tcl"))
    assert problem.model.name == "tcl"
    assert problem.model.semantics == ModeSemantics.DIGITAL
    assert isinstance(problem.functional, RunningMax)
    assert problem.functional.horizon == 1.0
    assert problem.threshold == pytest.approx(20.3)


def test_tcl_parameter_override_moves_default_threshold():
    problem = build_problem(_config({"name": "tcl", "params": {"setpoint": 21.0}}))
    assert problem.threshold == pytest.approx(21.3)


def test_tcl_projection_semantics():
    model = build_model(ModelSpec(name="tcl", semantics="projection"))
    assert model.semantics == ModeSemantics.PROJECTION


def test_unknown_parameter_rejected():
    with pytest.raises(ConfigError) as info:
        build_model(ModelSpec(name="tcl", params={"setpiont": 20.0}))
    assert info.value.diagnostics[0].startswith("model.params.setpiont")


def test_brownian_needs_its_parameters():
    with pytest.raises(ConfigError):
        build_model(ModelSpec(name="brownian"))
    model = build_model(ModelSpec(name="brownian", params={"mu": 0.0, "sigma": 1.0}))
    assert model.name == "brownian"


def test_invalid_parameter_value_becomes_config_error():
    with pytest.raises(ConfigError):
        build_model(ModelSpec(name="brownian", params={"mu": 0.0, "sigma": -1.0}))


def test_linear_needs_threshold():
    with pytest.raises(ConfigError):
        build_problem(_config({"name": "linear", "params": {"rate": -1.0}}))
    problem = build_problem(_config({"name": "linear", "params": {"rate": -1.0}}, {"threshold": 0.5}))
    assert isinstance(problem.functional, TerminalValue)


def test_first_exit_safe_set_intersects_invariants():
    problem = build_problem(_config(
        {"name": "tcl", "semantics": "projection"},
        {"variant": "first_exit", "threshold": 1.0, "safe_lower": [19.8], "safe_upper": [20.2]},
    ))
    functional = problem.functional
    assert isinstance(functional, FirstExitTime)
    assert len(functional.safe_set) == problem.model.n_modes
    for box in functional.safe_set:
        assert box.lower[0] >= 19.8 and box.upper[0] <= 20.2


def test_safe_set_only_for_first_exit():
    with pytest.raises(ConfigError):
        build_problem(_config("tcl", {"safe_upper": [20.2]}))


def test_coordinate_out_of_range():
    with pytest.raises(ConfigError):
        build_problem(_config("tcl", {"coordinate": 1}))


def test_running_max_threshold_must_lie_below_the_barrier():
    model = {"name": "brownian", "params": {"mu": 0.0, "sigma": 1.0, "barrier": 1.5}}
    for threshold in (1.5, 2.0):
        with pytest.raises(ConfigError) as info:
            build_problem(_config(model, {"threshold": threshold}))
        assert info.value.diagnostics[0].startswith("functional.threshold")
    assert build_problem(_config(model, {"threshold": 1.0})).threshold == 1.0
    exit_time = build_problem(_config(model, {"variant": "first_exit", "threshold": 2.0, "safe_upper": [1.5]}))
    assert isinstance(exit_time.functional, FirstExitTime)


def test_payoff_choice():
    assert isinstance(build_payoff(None, 1.0), Indicator)
    smoother = build_payoff(3, 1.0)
    assert isinstance(smoother, Smoother)
    assert smoother.delta == 2.0**-3
    assert math.isfinite(smoother.threshold)
