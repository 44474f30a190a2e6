"""
Experiment configuration: a TOML file with `model`, `functional` and `run`
sections, validated with pydantic.

Minimal example:

    model = "tcl"

    [run]
    mode = "adaptive"
    epsilon = 0.125
    seed = 42

Run keys may also be written at the top level.
"""

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Annotated, Any, Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from hybridmc.adaptive.controller import initial_cost
from hybridmc.errors import ConfigError

Positive = Annotated[float, Field(gt=0, allow_inf_nan=False)]
Finite = Annotated[float, Field(allow_inf_nan=False)]
Bound = Annotated[float, Field()]  # may be +-inf

MODES = ("adaptive", "fixed-mlmc", "smc", "decay-diagnostics", "cost-comparison")
ESTIMATE_MODES = ("adaptive", "fixed-mlmc", "smc")


class ModelSpec(BaseModel):
    """Built-in model and parameter overrides."""

    model_config = ConfigDict(extra="forbid")

    name: Literal["tcl", "brownian", "linear"]
    semantics: Literal["projection", "digital"] | None = None
    params: dict[str, Finite] = Field(default_factory=dict)


class FunctionalSpec(BaseModel):
    """Path functional and threshold. Unset fields take the model preset."""

    model_config = ConfigDict(extra="forbid")

    variant: Literal["first_exit", "running_max", "terminal_value"] | None = None
    horizon: Positive | None = None
    threshold: Finite | None = None
    coordinate: Annotated[int, Field(ge=0)] = 0
    safe_lower: list[Bound] | None = None
    safe_upper: list[Bound] | None = None


class RunSpec(BaseModel):
    """What to run and how."""

    model_config = ConfigDict(extra="forbid")

    mode: Literal["adaptive", "fixed-mlmc", "smc", "decay-diagnostics", "cost-comparison"]
    seed: Annotated[int, Field(ge=0)]
    epsilon: Positive | None = None
    epsilons: list[Positive] | None = None
    a1: Positive = 4.0
    a2: Positive = 2.0
    a3: Positive = 2.0
    kappa: Annotated[int, Field(ge=1)] = 1
    output_dir: str = "results"
    # smc: level of the single-level estimator
    level: Annotated[int, Field(ge=0)] = 8
    # fixed-mlmc: finest level L; decay-diagnostics: levels 1..levels
    levels: Annotated[int, Field(ge=0)] = 6
    # smc / decay: one count; fixed-mlmc: one count for every level or N_0..N_L
    samples: Annotated[int, Field(ge=1)] | list[Annotated[int, Field(ge=1)]] = 10_000
    # fixed-mlmc / smc payoff: smoothing index, or the indicator when unset
    smoothing: Annotated[int, Field(ge=1)] | None = None
    smoothing_indices: list[Annotated[int, Field(ge=1)]] = Field(default_factory=lambda: [3, 4])
    precalc_levels: Annotated[int, Field(ge=2)] = 6
    precalc_samples: Annotated[int, Field(ge=2)] = 10_000
    # cost-comparison: adaptive runs per epsilon, seeds seed..seed+repeats-1
    repeats: Annotated[int, Field(ge=1)] = 1
    max_level: Annotated[int, Field(ge=2)] = 14
    max_smoothing: Annotated[int, Field(ge=3)] = 10
    max_cost: Positive = 1e10
    threads: Annotated[int, Field(ge=1)] | None = None

    @model_validator(mode="after")
    def check_mode_fields(self) -> "RunSpec":
        if self.mode == "adaptive" and self.epsilon is None:
            raise ValueError("adaptive mode needs epsilon")
        if self.mode == "cost-comparison":
            if not self.epsilons and self.epsilon is None:
                raise ValueError("cost-comparison mode needs epsilons (or epsilon)")
        if self.mode in ("adaptive", "cost-comparison") and self.max_cost < initial_cost(self.kappa):
            raise ValueError(f"max_cost must cover the {initial_cost(self.kappa)} Euler steps of the initial samples")
        if self.mode == "fixed-mlmc" and isinstance(self.samples, list):
            if len(self.samples) != self.levels + 1:
                raise ValueError(f"samples lists N_0..N_L and needs {self.levels + 1} entries, got {len(self.samples)}")
        if self.mode in ("smc", "decay-diagnostics") and isinstance(self.samples, list):
            raise ValueError(f"{self.mode} mode takes a single sample count")
        if self.mode == "decay-diagnostics" and self.levels < 1:
            raise ValueError("decay-diagnostics needs levels >= 1")
        return self

    @property
    def epsilon_grid(self) -> list[float]:
        return list(self.epsilons) if self.epsilons else [self.epsilon]


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    model: ModelSpec
    functional: FunctionalSpec = Field(default_factory=FunctionalSpec)
    run: RunSpec

    @model_validator(mode="before")
    @classmethod
    def normalise_layout(cls, data: Any) -> Any:
        """Accept `model = "name"` and run keys written at the top level."""
        if not isinstance(data, dict):
            return data
        data = dict(data)
        if isinstance(data.get("model"), str):
            data["model"] = {"name": data["model"]}
        run_keys = set(RunSpec.model_fields) & set(data)
        if run_keys:
            run = dict(data.get("run") or {})
            for key in run_keys:
                run.setdefault(key, data.pop(key))
            data["run"] = run
        return data


def _diagnostics(exc: ValidationError) -> list[str]:
    lines = []
    for err in exc.errors():
        where = ".".join(str(part) for part in err["loc"]) or "<root>"
        lines.append(f"{where}: {err['msg']}")
    return lines


def parse_config(data: dict) -> ExperimentConfig:
    """Validate an already parsed mapping."""
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError("invalid experiment configuration", _diagnostics(e)) from e


def load_config(path: str | Path) -> ExperimentConfig:
    """
    Read and validate a TOML experiment file.

    Raises:
        ConfigError: With line/column for syntax errors and one entry per
            failing field for validation errors
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config {path}", [str(e)]) from e
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"cannot parse config {path}", [str(e)]) from e
    return parse_config(data)
