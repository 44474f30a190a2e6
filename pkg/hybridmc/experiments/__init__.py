"""Experiment configuration, orchestration and result files."""

from .schema import ExperimentConfig, FunctionalSpec, ModelSpec, RunSpec, load_config, parse_config
from .builders import Problem, build_model, build_payoff, build_problem
from .runner import (
    CostComparison,
    DecayTable,
    estimate,
    run_cost_comparison,
    run_decay_diagnostics,
    run_estimate,
    smc_cost_model,
)
from .output import write_csv, write_json, write_report

__all__ = [
    "ExperimentConfig",
    "FunctionalSpec",
    "ModelSpec",
    "RunSpec",
    "load_config",
    "parse_config",
    "Problem",
    "build_model",
    "build_payoff",
    "build_problem",
    "CostComparison",
    "DecayTable",
    "estimate",
    "run_cost_comparison",
    "run_decay_diagnostics",
    "run_estimate",
    "smc_cost_model",
    "write_csv",
    "write_json",
    "write_report",
]
