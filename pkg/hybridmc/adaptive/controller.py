"""
Adaptive multilevel Monte Carlo with smoothing.

Three nested loops: the innermost grows replication numbers until the
variance constraint holds, the middle one adds levels until the geometric
bias bound is small enough, and the outer one refines the smoothing index
until consecutive smoothers agree on the finest level.
"""

import logging
import math
from dataclasses import dataclass, field

from pydantic import BaseModel

from hybridmc.adaptive.allocation import required_replications
from hybridmc.adaptive.budget import DEFAULT_WEIGHTS, ErrorBudget
from hybridmc.adaptive.rates import bias_accepted, bias_bound, fit_or_default, smoothing_gap
from hybridmc.errors import AllocationError, CostCapError, RateNotIdentifiedError
from hybridmc.estimators.mlmc import LevelStats, combine_levels, stats_from_samples
from hybridmc.estimators.payoffs import Smoother
from hybridmc.models.functionals import PathFunctional
from hybridmc.models.shs import ShsModel
from hybridmc.simulate.noise import NoiseStream
from hybridmc.simulate.sampling import DEFAULT_BATCH_ELEMENTS, LevelSamples, sample_level, steps_per_sample

logger = logging.getLogger(__name__)

INITIAL_LEVEL = 2
INITIAL_SMOOTHING = 2
INITIAL_SAMPLES = 100
# Extra simulated time after a time-valued threshold; covers delta_m for every m >= 2.
THRESHOLD_REACH = 2.0**-INITIAL_SMOOTHING

# Relative tolerance on the variance constraint for round-off in the allocation.
_VARIANCE_TOLERANCE = 1e-9


def initial_cost(kappa: int) -> int:
    """Euler steps of the initial samples on levels 0..INITIAL_LEVEL."""
    return INITIAL_SAMPLES * sum(steps_per_sample(level, kappa) for level in range(INITIAL_LEVEL + 1))


@dataclass(frozen=True)
class AdaptiveConfig:
    """
    Controller settings.

    Attributes:
        seed: Master seed of the noise stream
        kappa: Euler steps at level 0
        a1, a2, a3: Error budget weights
        max_level: Largest admissible L
        max_smoothing: Largest admissible m
        max_cost: Largest admissible total number of Euler steps
        threads: Worker threads for sampling
        batch_elements: Floats per simulated block
    """

    seed: int
    kappa: int = 1
    a1: float = DEFAULT_WEIGHTS[0]
    a2: float = DEFAULT_WEIGHTS[1]
    a3: float = DEFAULT_WEIGHTS[2]
    max_level: int = 14
    max_smoothing: int = 10
    max_cost: float = 1e10
    threads: int = 1
    batch_elements: int = DEFAULT_BATCH_ELEMENTS

    def __post_init__(self):
        if self.kappa < 1:
            raise ValueError(f"kappa must be >= 1, got {self.kappa}")
        if self.max_level < INITIAL_LEVEL:
            raise ValueError(f"max_level must be >= {INITIAL_LEVEL}, got {self.max_level}")
        if self.max_smoothing <= INITIAL_SMOOTHING:
            raise ValueError(f"max_smoothing must be > {INITIAL_SMOOTHING}, got {self.max_smoothing}")
        if not self.max_cost > 0:
            raise ValueError(f"max_cost must be positive, got {self.max_cost}")


@dataclass
class AdaptiveState:
    """Mutable controller state: cached raw samples per level and the last diagnostics."""

    m: int = INITIAL_SMOOTHING
    samples: list[LevelSamples] = field(default_factory=list)
    alpha_hat: float | None = None
    c_hat: float | None = None
    bias_bound: float | None = None
    smoothing_gap: float | None = None
    regression_levels: tuple[int, ...] = ()
    rate_defaulted: bool = False

    @property
    def max_level(self) -> int:
        return len(self.samples) - 1

    @property
    def counts(self) -> list[int]:
        return [s.count for s in self.samples]

    @property
    def cost(self) -> int:
        return sum(s.cost for s in self.samples)

    def stats(self, payoff) -> list[LevelStats]:
        return [stats_from_samples(s, payoff) for s in self.samples]


class LevelRow(BaseModel):
    level: int
    N: int
    b_hat: float
    v_hat: float
    cost: int


class EstimateReport(BaseModel):
    """Result of one estimation run. Adaptive-only fields are None for fixed runs."""

    mode: str
    payoff: str
    estimate: float
    m: int | None
    L: int
    epsilon: float | None
    epsilon_star: float | None
    alpha_hat: float | None
    bias_bound: float | None
    variance_bound: float
    smoothing_gap: float | None
    smoothing_limit: float | None = None
    bias_limit: float | None = None
    variance_limit: float | None = None
    variance_ok: bool | None = None
    bias_ok: bool | None = None
    smoothing_ok: bool | None = None
    rate_defaulted: bool = False
    safety_probability: float | None = None
    total_cost_steps: int
    seed: int
    converged: bool
    unconverged_reason: str | None = None
    levels: list[LevelRow]


def level_rows(stats: list[LevelStats]) -> list[LevelRow]:
    return [LevelRow(level=s.level, N=s.n_samples, b_hat=s.b_hat, v_hat=s.v_hat, cost=s.cost) for s in stats]


class _CapReached(Exception):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class AdaptiveMLMC:
    """
    Adaptive controller bound to one model, functional and threshold.

    Raw functional values are cached per level, so changing the smoothing
    index re-evaluates payoffs without simulating again. Each level draws
    replication indices 0, 1, 2, ... in order and never reuses one.
    """

    def __init__(
        self,
        model: ShsModel,
        functional: PathFunctional,
        threshold: float,
        budget: ErrorBudget,
        config: AdaptiveConfig,
    ):
        self.model = model
        self.threshold = float(threshold)
        self.functional = functional.windowed(self.threshold, THRESHOLD_REACH)
        self.budget = budget
        self.config = config
        self.noise = NoiseStream(config.seed)
        self.state = AdaptiveState()

    @property
    def horizon(self) -> float:
        return self.functional.horizon

    def _grow(self, targets: list[int]) -> bool:
        """Extend every level to at least its target count. Returns True if anything was sampled."""
        planned = sum(
            max(0, target - have) * steps_per_sample(level, self.config.kappa)
            for level, (target, have) in enumerate(zip(targets, self.state.counts + [0] * len(targets)))
        )
        if planned == 0:
            return False
        if self.state.cost + planned > self.config.max_cost:
            raise _CapReached("max_cost")
        for level, target in enumerate(targets):
            have = self.state.samples[level].count if level <= self.state.max_level else 0
            if target <= have:
                continue
            fresh = sample_level(
                self.model, self.functional, level, self.config.kappa, self.horizon, self.noise,
                range(have, target), threads=self.config.threads, batch_elements=self.config.batch_elements,
            )
            if level <= self.state.max_level:
                self.state.samples[level] = self.state.samples[level].extend(fresh)
            else:
                self.state.samples.append(fresh)
        return True

    def _fill_variance(self, payoff: Smoother) -> None:
        """Grow N until sum v_l / N_l <= a3^2 epsilon*^2."""
        limit = self.budget.variance_limit * (1.0 + _VARIANCE_TOLERANCE)
        while True:
            counts = self.state.counts
            variances = [s.v_hat for s in self.state.stats(payoff)]
            try:
                targets = required_replications(variances, self.budget.epsilon_star, self.budget.a3, counts)
            except AllocationError:
                targets = counts
            grown = self._grow([max(n, t) for n, t in zip(counts, targets)])
            bound = combine_levels(self.state.stats(payoff)).variance_bound
            logger.debug(f"m={self.state.m} L={self.state.max_level} N={self.state.counts} variance bound {bound:.4g}")
            # without new samples the allocation is already optimal for the current estimates
            if bound <= limit or not grown:
                return

    def _bias_check(self, payoff: Smoother) -> bool:
        b_hat = [s.b_hat for s in self.state.stats(payoff)]
        fit = fit_or_default(b_hat)
        state = self.state
        state.alpha_hat, state.regression_levels, state.rate_defaulted = fit.alpha, fit.levels, fit.defaulted
        state.c_hat = None if fit.defaulted else fit.c
        state.bias_bound = bias_bound(b_hat, fit.alpha, state.max_level)
        try:
            return bias_accepted(state.bias_bound, fit.alpha, self.budget.epsilon_star, self.budget.a2)
        except RateNotIdentifiedError as exc:
            logger.info(f"L={state.max_level}: {exc}; adding a level")
            return False

    def _smoothing_gap(self) -> float:
        finest = self.state.samples[-1].fine
        m = self.state.m
        return smoothing_gap(Smoother(m, self.threshold)(finest), Smoother(m - 1, self.threshold)(finest))

    def run(self) -> EstimateReport:
        """Run the three loops and return the smoothed multilevel estimate."""
        state = self.state
        reason = None
        logger.info(
            f"Adaptive MLMC: epsilon={self.budget.epsilon:.6g} epsilon*={self.budget.epsilon_star:.6g} "
            f"seed={self.config.seed} horizon={self.horizon:.6g}"
        )
        try:
            self._grow([INITIAL_SAMPLES] * (INITIAL_LEVEL + 1))
        except _CapReached:
            raise CostCapError(
                f"max_cost {self.config.max_cost:g} is below the {initial_cost(self.config.kappa)} Euler steps "
                f"of the initial samples"
            )
        try:
            while True:
                if state.m + 1 > self.config.max_smoothing:
                    raise _CapReached("max_smoothing")
                state.m += 1
                payoff = Smoother(state.m, self.threshold)
                new_level = False
                while True:
                    if new_level:
                        if state.max_level + 1 > self.config.max_level:
                            raise _CapReached("max_level")
                        self._grow(state.counts + [INITIAL_SAMPLES])
                    self._fill_variance(payoff)
                    accepted = self._bias_check(payoff)
                    logger.info(
                        f"m={state.m} L={state.max_level} N={state.counts} alpha={state.alpha_hat:.4g} "
                        f"B={state.bias_bound:.4g} bias {'accepted' if accepted else 'rejected'}"
                    )
                    if accepted:
                        break
                    new_level = True
                state.smoothing_gap = self._smoothing_gap()
                logger.info(
                    f"m={state.m}: smoothing gap {state.smoothing_gap:.4g} "
                    f"(limit {self.budget.smoothing_limit:.4g})"
                )
                if state.smoothing_gap <= self.budget.smoothing_limit:
                    break
        except _CapReached as cap:
            reason = cap.reason
            logger.warning(f"Adaptive MLMC stopped unconverged: {reason} (m={state.m}, L={state.max_level})")

        return self._report(reason)

    def _report(self, reason: str | None) -> EstimateReport:
        state = self.state
        payoff = Smoother(state.m, self.threshold)
        stats = state.stats(payoff)
        result = combine_levels(stats)

        # diagnostics of the final state, also when a cap interrupted a phase
        bias_ok = None
        if state.max_level >= INITIAL_LEVEL:
            bias_ok = self._bias_check(payoff)
        gap = self._smoothing_gap()
        variance_ok = result.variance_bound <= self.budget.variance_limit * (1.0 + _VARIANCE_TOLERANCE)
        smoothing_ok = gap <= self.budget.smoothing_limit
        converged = reason is None and bool(variance_ok and bias_ok and smoothing_ok)
        if reason is None and not converged:
            reason = "constraints_not_met"

        alpha = state.alpha_hat
        estimate = result.estimate
        return EstimateReport(
            mode="adaptive",
            payoff=f"smoothed(m={state.m}, threshold={self.threshold!r})",
            estimate=estimate,
            m=state.m,
            L=state.max_level,
            epsilon=self.budget.epsilon,
            epsilon_star=self.budget.epsilon_star,
            alpha_hat=alpha,
            bias_bound=state.bias_bound,
            variance_bound=result.variance_bound,
            smoothing_gap=gap,
            smoothing_limit=self.budget.smoothing_limit,
            bias_limit=None if alpha is None else self.budget.bias_limit(alpha),
            variance_limit=self.budget.variance_limit,
            variance_ok=variance_ok,
            bias_ok=bias_ok,
            smoothing_ok=smoothing_ok,
            rate_defaulted=state.rate_defaulted,
            safety_probability=1.0 - estimate if self.functional.kind == "first_exit" else None,
            total_cost_steps=state.cost,
            seed=self.config.seed,
            converged=converged,
            unconverged_reason=None if converged else reason,
            levels=level_rows(stats),
        )


def adaptive_mlmc(
    model: ShsModel,
    functional: PathFunctional,
    threshold: float,
    epsilon: float,
    config: AdaptiveConfig,
) -> EstimateReport:
    """
    Estimate E g(Y) for the indicator of {Y <= threshold} to accuracy epsilon.

    Args:
        model: The hybrid system
        functional: Path functional Y; time-valued functionals are simulated
            over max(horizon, threshold + 1/4)
        threshold: Evaluation point s* of the distribution function
        epsilon: Target accuracy
        config: Seed, kappa, weights and caps

    Returns:
        EstimateReport; `converged` is False when a cap stopped the run
    """
    budget = ErrorBudget(epsilon, config.a1, config.a2, config.a3)
    if not math.isfinite(threshold):
        raise ValueError(f"threshold must be finite, got {threshold}")
    return AdaptiveMLMC(model, functional, threshold, budget, config).run()
