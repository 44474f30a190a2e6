import numpy as np
import pytest

from hybridmc.estimators import (
    Indicator,
    LevelStats,
    Smoother,
    combine_levels,
    level_correction_stats,
    mlmc_estimate,
    smc_estimate,
    stats_from_samples,
)
from hybridmc.models import RunningMax, TerminalValue, linear_model, reflection_cdf
from hybridmc.simulate import LevelParams, NoiseStream, sample_path
from hybridmc.simulate.sampling import LevelSamples


def test_correction_stats_use_population_variance():
    samples = LevelSamples(1, np.array([0.1, -0.1]), np.array([0.0, 0.0]), 6)
    stats = stats_from_samples(samples, lambda y: y)
    assert stats.b_hat == 0.0
    assert stats.v_hat == pytest.approx(0.01, abs=1e-15)


def test_identical_payoffs_have_zero_variance():
    samples = LevelSamples(0, np.full(5, 3.0), None, 5)
    stats = stats_from_samples(samples, lambda y: y)
    assert (stats.b_hat, stats.v_hat) == (3.0, 0.0)


def test_deterministic_model_has_zero_variance(decay, noise):
    payoff = Smoother(2, 0.3)
    for level in range(0, 5):
        stats = level_correction_stats(decay, TerminalValue(1.0), payoff, level, 1, 1.0, 20, noise)
        assert stats.v_hat == 0.0
        assert stats.n_samples == 20


def test_constant_path_has_zero_corrections(noise):
    still = linear_model(rate=0.0, sigma=0.0, z0=0.4)
    for level in range(1, 4):
        stats = level_correction_stats(still, RunningMax(1.0), Smoother(3, 0.5), level, 1, 1.0, 10, noise)
        assert stats.b_hat == 0.0


def test_correction_cost(tcl, noise):
    stats = level_correction_stats(tcl, RunningMax(1.0), Indicator(20.3), 3, 2, 1.0, 7, noise)
    assert stats.cost == 7 * (16 + 8)
    assert level_correction_stats(tcl, RunningMax(1.0), Indicator(20.3), 0, 2, 1.0, 7, noise).cost == 14


def test_smc_indicator_average(tcl, noise):
    result = smc_estimate(tcl, RunningMax(1.0), Indicator(20.3), LevelParams(1, 4, 1.0), 200, noise)
    assert 0.0 <= result.estimate <= 1.0
    assert (result.estimate * 200) == pytest.approx(round(result.estimate * 200))
    assert result.cost == 200 * 16


def test_smc_single_sample_has_zero_variance(tcl, noise):
    assert smc_estimate(tcl, RunningMax(1.0), Indicator(20.3), LevelParams(1, 2, 1.0), 1, noise).variance == 0.0


@pytest.mark.parametrize("top", [2, 3, 4])
def test_deterministic_telescoping(tcl_deterministic, top):
    payoff = Smoother(3, 20.3)
    f = RunningMax(1.0)
    noise = NoiseStream(0)
    result = mlmc_estimate(tcl_deterministic, f, payoff, top, [3] * (top + 1), 1, 1.0, noise)
    finest = sample_path(tcl_deterministic, LevelParams(1, top, 1.0), noise, 0)
    assert result.estimate == pytest.approx(float(payoff(finest.states[:, 0].max())), abs=1e-12)
    assert result.variance_bound == 0.0


def test_single_level_mlmc_equals_smc(tcl):
    f = RunningMax(1.0)
    payoff = Smoother(3, 20.3)
    noise = NoiseStream(21)
    multi = mlmc_estimate(tcl, f, payoff, 0, [500], 4, 1.0, noise)
    single = smc_estimate(tcl, f, payoff, LevelParams(4, 0, 1.0), 500, noise)
    assert multi.estimate == single.estimate
    assert multi.cost == single.cost


def test_combine_levels_requires_contiguous_levels():
    rows = [LevelStats(0, 10, 0.5, 0.1, 10), LevelStats(2, 10, 0.1, 0.01, 30)]
    with pytest.raises(ValueError):
        combine_levels(rows)
    result = combine_levels([LevelStats(0, 10, 0.5, 0.1, 10), LevelStats(1, 20, 0.1, 0.02, 60)])
    assert result.estimate == pytest.approx(0.6)
    assert result.variance_bound == pytest.approx(0.01 + 0.001)
    assert result.max_level == 1


def test_replication_numbers_must_match_levels(tcl, noise):
    with pytest.raises(ValueError):
        mlmc_estimate(tcl, RunningMax(1.0), Indicator(20.3), 2, [10, 10], 1, 1.0, noise)
    with pytest.raises(ValueError):
        mlmc_estimate(tcl, RunningMax(1.0), Indicator(20.3), 1, [10, 0], 1, 1.0, noise)


@pytest.mark.slow
def test_smc_brownian_oracle(brownian):
    lp = LevelParams(1, 8, 1.0)
    result = smc_estimate(brownian, RunningMax(1.0), Indicator(1.0), lp, 100_000, NoiseStream(99))
    # discrete monitoring shifts the barrier by about 0.5826 sqrt(dt)
    shifted = reflection_cdf(0.0, 1.0, 1.0, 1.0 + 0.5826 * np.sqrt(lp.dt))
    assert result.estimate == pytest.approx(shifted, abs=0.01)
    assert result.estimate == pytest.approx(0.682689, abs=0.03)


@pytest.mark.slow
def test_mlmc_brownian_oracle(brownian):
    payoff = Smoother(5, 1.0)
    counts = [40_000, 20_000, 10_000, 6_000, 4_000, 3_000, 2_000, 2_000]
    result = mlmc_estimate(brownian, RunningMax(1.0), payoff, 7, counts, 1, 1.0, NoiseStream(5))
    shifted = reflection_cdf(0.0, 1.0, 1.0, 1.0 + 0.5826 * np.sqrt(1 / 128))
    assert result.estimate == pytest.approx(shifted, abs=0.015)
    assert result.estimate == pytest.approx(0.682689, abs=0.05)


@pytest.mark.slow
def test_tcl_mlmc_agrees_with_smc_at_the_finest_level(tcl):
    f = RunningMax(1.0)
    payoff = Smoother(3, 20.3)
    counts = [4000, 2000, 1000, 500, 250]
    outside = 0
    for seed in range(1, 21):
        multi = mlmc_estimate(tcl, f, payoff, 4, counts, 1, 1.0, NoiseStream(seed))
        single = smc_estimate(tcl, f, payoff, LevelParams(1, 4, 1.0), 4000, NoiseStream(seed + 1000))
        se = np.sqrt(multi.variance_bound + single.variance / 4000)
        outside += abs(multi.estimate - single.estimate) > 3 * se
    assert outside <= 1
