"""
Command-line interface.

    python main.py estimate --config configs/tcl_adaptive.toml
    python main.py decay --config configs/tcl_decay.toml --threads 4
    python main.py cost-compare --config configs/tcl_cost.toml
    python main.py validate --config configs/tcl_adaptive.toml
    python main.py runs
    python main.py serve

Exit codes: 0 success (converged), 2 unconverged, 3 configuration error.
"""

import argparse
import logging
import sys

from hybridmc.config import get_settings
from hybridmc.errors import ConfigError, HybridMCError
from hybridmc.experiments.builders import build_model
from hybridmc.experiments.runner import run_cost_comparison, run_decay_diagnostics, run_estimate
from hybridmc.experiments.schema import ESTIMATE_MODES, ExperimentConfig, load_config
from hybridmc.models.shs import validate_model

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_UNCONVERGED = 2
EXIT_CONFIG = 3

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def configure_logging(quiet: bool = False) -> None:
    level = logging.WARNING if quiet else getattr(logging, get_settings().log_level.upper(), logging.INFO)
    logging.basicConfig(level=level, format=LOG_FORMAT, force=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hybridmc",
        description="Adaptive multilevel Monte Carlo for stochastic hybrid systems",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def experiment(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="TOML experiment file")
        p.add_argument("--seed", type=int, help="override run.seed")
        p.add_argument("--out", help="override run.output_dir")
        p.add_argument("--threads", type=int, help="sampling worker threads")
        p.add_argument("--quiet", action="store_true", help="only warnings and errors")
        return p

    est = experiment("estimate", "adaptive, fixed-mlmc or smc estimate")
    est.add_argument("--record", action="store_true", help="append the report to the run ledger")
    experiment("decay", "per-level mean and variance decay tables")
    experiment("cost-compare", "adaptive cost against the single-level cost model")

    val = sub.add_parser("validate", help="check the configured model")
    val.add_argument("--config", required=True, help="TOML experiment file")
    val.add_argument("--quiet", action="store_true")

    runs = sub.add_parser("runs", help="list the run ledger")
    runs.add_argument("--limit", type=int, default=20)
    runs.add_argument("--quiet", action="store_true")

    serve = sub.add_parser("serve", help="start the HTTP service")
    serve.add_argument("--host")
    serve.add_argument("--port", type=int)
    serve.add_argument("--quiet", action="store_true")
    return parser


def _with_overrides(config: ExperimentConfig, args: argparse.Namespace) -> ExperimentConfig:
    updates = {}
    if args.seed is not None:
        if args.seed < 0:
            raise ConfigError("invalid override", ["--seed: must be non-negative"])
        updates["seed"] = args.seed
    if args.out is not None:
        updates["output_dir"] = args.out
    if args.threads is not None:
        if args.threads < 1:
            raise ConfigError("invalid override", ["--threads: must be >= 1"])
        updates["threads"] = args.threads
    if not updates:
        return config
    return config.model_copy(update={"run": config.run.model_copy(update=updates)})


def _expect_mode(config: ExperimentConfig, allowed: tuple[str, ...], command: str) -> None:
    if config.run.mode not in allowed:
        raise ConfigError(
            f"'{command}' cannot run mode '{config.run.mode}'",
            [f"run.mode: expected one of {list(allowed)}"],
        )


def cmd_estimate(args) -> int:
    config = _with_overrides(load_config(args.config), args)
    _expect_mode(config, ESTIMATE_MODES, "estimate")
    report = run_estimate(config)
    if args.record:
        from hybridmc.database import get_store
        run_id = get_store().record(report)
        logger.info(f"Recorded run {run_id}")
    if not args.quiet:
        print(f"estimate = {report.estimate!r}")
        print(f"converged = {str(report.converged).lower()}  cost = {report.total_cost_steps} Euler steps")
    return EXIT_OK if report.converged else EXIT_UNCONVERGED


def cmd_decay(args) -> int:
    config = _with_overrides(load_config(args.config), args)
    _expect_mode(config, ("decay-diagnostics",), "decay")
    tables = run_decay_diagnostics(config)
    if not args.quiet:
        for t in tables:
            print(f"{t.payoff}: alpha_hat = {t.alpha_hat!r}  beta_hat = {t.beta_hat!r}")
    return EXIT_OK


def cmd_cost_compare(args) -> int:
    config = _with_overrides(load_config(args.config), args)
    _expect_mode(config, ("cost-comparison",), "cost-compare")
    result = run_cost_comparison(config)
    if not args.quiet:
        print(f"alpha_bar = {result.alpha_bar!r}")
        for r in result.rows:
            print(f"epsilon = {r.epsilon!r}  mlmc_cost = {r.mlmc_cost:.4g}  gain = {r.gain:.4g}  "
                  f"converged = {r.converged_runs}/{r.runs}")
    return EXIT_OK if all(r.converged for r in result.rows) else EXIT_UNCONVERGED


def cmd_validate(args) -> int:
    config = load_config(args.config)
    model = build_model(config.model)
    result = validate_model(model)
    if result.ok:
        print(f"model {model.name}: ok")
        return EXIT_OK
    for violation in result.violations:
        print(f"model {model.name}: {violation}", file=sys.stderr)
    return EXIT_CONFIG


def cmd_runs(args) -> int:
    from hybridmc.database import get_store
    for r in get_store().list_runs(args.limit):
        print(f"{r.id}\t{r.created_at}\t{r.mode}\tseed={r.seed}\tepsilon={r.epsilon}\t"
              f"estimate={r.estimate!r}\tconverged={str(r.converged).lower()}")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn
    settings = get_settings()
    host = args.host or settings.host
    port = args.port or settings.port
    logger.info(f"Starting server on {host}:{port}")
    uvicorn.run("main:app", host=host, port=port)
    return EXIT_OK


COMMANDS = {
    "estimate": cmd_estimate,
    "decay": cmd_decay,
    "cost-compare": cmd_cost_compare,
    "validate": cmd_validate,
    "runs": cmd_runs,
    "serve": cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.quiet)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except HybridMCError as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_CONFIG
