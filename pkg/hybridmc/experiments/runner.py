"""
Experiment orchestration: estimates, decay diagnostics and cost comparison.
"""

import dataclasses
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from hybridmc.adaptive.controller import AdaptiveConfig, EstimateReport, adaptive_mlmc, level_rows
from hybridmc.adaptive.rates import fit_decay_rate
from hybridmc.config import get_settings
from hybridmc.errors import RateFitError, RateNotIdentifiedError
from hybridmc.estimators.mlmc import LevelStats, mlmc_estimate, smc_estimate, stats_from_samples
from hybridmc.estimators.payoffs import Indicator, Smoother
from hybridmc.experiments.builders import Problem, build_payoff, build_problem
from hybridmc.experiments.output import COST_HEADER, DECAY_HEADER, write_csv, write_json, write_report
from hybridmc.experiments.schema import ExperimentConfig, RunSpec
from hybridmc.simulate.levels import LevelParams
from hybridmc.simulate.noise import NoiseStream
from hybridmc.simulate.sampling import sample_level

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Execution:
    """Worker settings for one run."""

    threads: int
    batch_elements: int


def execution_for(run: RunSpec, threads: int | None = None) -> Execution:
    """CLI override, then the config file, then HYBRIDMC_* settings."""
    settings = get_settings()
    return Execution(threads or run.threads or settings.threads, settings.batch_elements)


def _payoff_description(payoff) -> str:
    if isinstance(payoff, Smoother):
        return f"smoothed(m={payoff.m}, threshold={payoff.threshold!r})"
    return f"indicator(threshold={payoff.threshold!r})"


def _safety(problem: Problem, estimate: float) -> float | None:
    return 1.0 - estimate if problem.functional.kind == "first_exit" else None


def adaptive_config(run: RunSpec, execution: Execution) -> AdaptiveConfig:
    return AdaptiveConfig(
        seed=run.seed,
        kappa=run.kappa,
        a1=run.a1,
        a2=run.a2,
        a3=run.a3,
        max_level=run.max_level,
        max_smoothing=run.max_smoothing,
        max_cost=run.max_cost,
        threads=execution.threads,
        batch_elements=execution.batch_elements,
    )


def estimate(config: ExperimentConfig, threads: int | None = None) -> EstimateReport:
    """Run an adaptive, fixed-parameter multilevel or single-level estimate."""
    run = config.run
    if run.mode not in ("adaptive", "fixed-mlmc", "smc"):
        raise ValueError(f"mode {run.mode} does not produce an estimate report")
    problem = build_problem(config)
    execution = execution_for(run, threads)

    if run.mode == "adaptive":
        return adaptive_mlmc(problem.model, problem.functional, problem.threshold, run.epsilon,
                             adaptive_config(run, execution))

    payoff = build_payoff(run.smoothing, problem.threshold)
    functional = problem.functional.windowed(problem.threshold, payoff.reach)
    noise = NoiseStream(run.seed)

    if run.mode == "smc":
        params = LevelParams(run.kappa, run.level, functional.horizon)
        result = smc_estimate(problem.model, functional, payoff, params, run.samples, noise,
                              threads=execution.threads, batch_elements=execution.batch_elements)
        row = LevelStats(run.level, run.samples, result.estimate, result.variance, result.cost)
        return EstimateReport(
            mode="smc", payoff=_payoff_description(payoff), estimate=result.estimate, m=run.smoothing,
            L=run.level, epsilon=None, epsilon_star=None, alpha_hat=None, bias_bound=None,
            variance_bound=result.variance / run.samples, smoothing_gap=None,
            safety_probability=_safety(problem, result.estimate), total_cost_steps=result.cost,
            seed=run.seed, converged=True, levels=level_rows([row]),
        )

    counts = run.samples if isinstance(run.samples, list) else [run.samples] * (run.levels + 1)
    result = mlmc_estimate(problem.model, functional, payoff, run.levels, counts, run.kappa, functional.horizon,
                           noise, threads=execution.threads, batch_elements=execution.batch_elements)
    return EstimateReport(
        mode="fixed-mlmc", payoff=_payoff_description(payoff), estimate=result.estimate, m=run.smoothing,
        L=run.levels, epsilon=None, epsilon_star=None, alpha_hat=None, bias_bound=None,
        variance_bound=result.variance_bound, smoothing_gap=None,
        safety_probability=_safety(problem, result.estimate), total_cost_steps=result.cost,
        seed=run.seed, converged=True, levels=level_rows(list(result.levels)),
    )


def run_estimate(config: ExperimentConfig, out_dir: str | Path | None = None,
                 threads: int | None = None) -> EstimateReport:
    """Estimate and write report.json and levels.csv."""
    report = estimate(config, threads)
    out = Path(out_dir or config.run.output_dir)
    write_report(report, out)
    logger.info(f"Wrote report to {out} (estimate {report.estimate:.6g}, converged={report.converged})")
    return report


@dataclass(frozen=True)
class DecayTable:
    """Per-level statistics of one payoff at a fixed sample count."""

    payoff: str
    rows: tuple[LevelStats, ...]
    alpha_hat: float | None
    beta_hat: float | None


def _fitted(levels: list[int], values: list[float]) -> float | None:
    try:
        return fit_decay_rate(levels, values).alpha
    except RateFitError:
        return None


def decay_tables(problem: Problem, payoffs: list, top_level: int, n_samples: int, kappa: int,
                 noise: NoiseStream, execution: Execution) -> list[DecayTable]:
    """
    Correction statistics of several payoffs on shared samples of levels 1..top_level.

    Each level is simulated once; all payoffs are evaluated on the same
    functional values.
    """
    reach = max(p.reach for p in payoffs)
    functional = problem.functional.windowed(problem.threshold, reach)
    per_payoff: dict[str, list[LevelStats]] = {p.label: [] for p in payoffs}
    for level in range(1, top_level + 1):
        samples = sample_level(problem.model, functional, level, kappa, functional.horizon, noise,
                               range(n_samples), threads=execution.threads,
                               batch_elements=execution.batch_elements)
        for p in payoffs:
            per_payoff[p.label].append(stats_from_samples(samples, p))
        logger.info(f"Decay diagnostics: level {level} done ({n_samples} samples)")

    tables = []
    for p in payoffs:
        rows = per_payoff[p.label]
        levels = [s.level for s in rows]
        tables.append(DecayTable(
            payoff=p.label,
            rows=tuple(rows),
            alpha_hat=_fitted(levels, [s.b_hat for s in rows]),
            beta_hat=_fitted(levels, [s.v_hat for s in rows]),
        ))
    return tables


def run_decay_diagnostics(config: ExperimentConfig, out_dir: str | Path | None = None,
                          threads: int | None = None) -> list[DecayTable]:
    """Write decay_<payoff>.csv per payoff plus decay_summary.json."""
    run = config.run
    problem = build_problem(config)
    execution = execution_for(run, threads)
    payoffs = [Indicator(problem.threshold)] + [Smoother(m, problem.threshold) for m in run.smoothing_indices]
    tables = decay_tables(problem, payoffs, run.levels, run.samples, run.kappa, NoiseStream(run.seed), execution)

    out = Path(out_dir or run.output_dir)
    for table in tables:
        rows = [(s.level, table.payoff, s.b_hat, s.v_hat, s.n_samples) for s in table.rows]
        write_csv(out / f"decay_{table.payoff}.csv", DECAY_HEADER, rows)
    summary = {t.payoff: {"alpha_hat": t.alpha_hat, "beta_hat": t.beta_hat} for t in tables}
    write_json(out / "decay_summary.json", summary)
    logger.info(f"Wrote {len(tables)} decay tables to {out}")
    return tables


@dataclass(frozen=True)
class CostRow:
    """Adaptive runs at one epsilon against the modelled single-level cost."""

    epsilon: float
    smc_cost: float
    mlmc_cost: float
    mlmc_cost_std: float
    estimate: float
    estimate_std: float
    gain: float
    runs: int
    converged_runs: int

    @property
    def converged(self) -> bool:
        return self.converged_runs == self.runs


@dataclass(frozen=True)
class CostComparison:
    alpha_bar: float
    rows: tuple[CostRow, ...]


# Noise stream of the rate precalculation; the adaptive runs use stream 0.
PRECALC_STREAM = 1


def smc_cost_model(epsilon: float, alpha_bar: float) -> float:
    """Modelled single-level cost epsilon^(-2 - 1/alpha)."""
    if not alpha_bar > 0:
        raise RateNotIdentifiedError(f"SMC cost model needs a positive rate, got {alpha_bar}")
    return epsilon ** (-2.0 - 1.0 / alpha_bar)


def _spread(values: list[float]) -> float:
    return float(np.std(values, ddof=1)) if len(values) > 1 else 0.0


def run_cost_comparison(config: ExperimentConfig, out_dir: str | Path | None = None,
                        threads: int | None = None) -> CostComparison:
    """
    Measured adaptive cost against the modelled single-level cost per epsilon.

    The rate alpha_bar comes from a precalculation with the indicator payoff
    on levels 1..precalc_levels, drawn from its own noise stream; its cost is
    not counted. Each epsilon runs `repeats` adaptive estimates with seeds
    seed, seed + 1, ... and reports the mean and standard deviation of their
    cost and estimate.
    """
    run = config.run
    problem = build_problem(config)
    execution = execution_for(run, threads)
    noise = NoiseStream(run.seed, stream=PRECALC_STREAM)

    (precalc,) = decay_tables(problem, [Indicator(problem.threshold)], run.precalc_levels,
                              run.precalc_samples, run.kappa, noise, execution)
    if precalc.alpha_hat is None:
        raise RateNotIdentifiedError("precalculation found fewer than two levels with a non-zero mean correction")
    alpha_bar = precalc.alpha_hat
    logger.info(f"Cost comparison: precalculated alpha_bar = {alpha_bar:.4g}")

    rows = []
    base = adaptive_config(run, execution)
    for eps in run.epsilon_grid:
        reports = [
            adaptive_mlmc(problem.model, problem.functional, problem.threshold, eps,
                          dataclasses.replace(base, seed=run.seed + r))
            for r in range(run.repeats)
        ]
        costs = [float(rep.total_cost_steps) for rep in reports]
        estimates = [rep.estimate for rep in reports]
        smc = smc_cost_model(eps, alpha_bar)
        mean_cost = float(np.mean(costs))
        rows.append(CostRow(
            epsilon=eps,
            smc_cost=smc,
            mlmc_cost=mean_cost,
            mlmc_cost_std=_spread(costs),
            estimate=float(np.mean(estimates)),
            estimate_std=_spread(estimates),
            gain=smc / mean_cost,
            runs=len(reports),
            converged_runs=sum(rep.converged for rep in reports),
        ))
        logger.info(f"epsilon={eps:.6g}: mean MLMC cost {mean_cost:.6g} over {len(reports)} run(s), "
                    f"SMC model {smc:.4g}")

    out = Path(out_dir or run.output_dir)
    write_csv(out / "cost_comparison.csv", COST_HEADER, [
        (r.epsilon, r.smc_cost, r.mlmc_cost, r.mlmc_cost_std, r.estimate, r.estimate_std,
         r.gain, r.runs, r.converged_runs, r.converged)
        for r in rows
    ])
    write_json(out / "cost_summary.json", {
        "alpha_bar": alpha_bar,
        "precalc_levels": run.precalc_levels,
        "precalc_samples": run.precalc_samples,
        "precalc_stream": PRECALC_STREAM,
        "repeats": run.repeats,
    })
    return CostComparison(alpha_bar, tuple(rows))
