import numpy as np

from hybridmc.models import RunningMax
from hybridmc.simulate import LevelParams, NoiseStream, sample_coupled, sample_level, sample_path, steps_per_sample


def test_batched_values_match_single_paths(tcl):
    noise = NoiseStream(5)
    f = RunningMax(1.0)
    samples = sample_level(tcl, f, 3, 1, 1.0, noise, range(10, 40))
    for row, i in enumerate(range(10, 40)):
        pair = sample_coupled(tcl, 3, 1, 1.0, noise, i)
        assert samples.fine[row] == pair.fine.states[:, 0].max()
        assert samples.coarse[row] == pair.coarse.states[:, 0].max()


def test_level_zero_has_no_coarse_values(tcl):
    noise = NoiseStream(5)
    samples = sample_level(tcl, RunningMax(1.0), 0, 2, 1.0, noise, range(5))
    assert samples.coarse is None
    path = sample_path(tcl, LevelParams(2, 0, 1.0), noise, 3)
    assert samples.fine[3] == path.states[:, 0].max()


def test_results_do_not_depend_on_threads_or_blocks(tcl):
    f = RunningMax(1.0)
    reference = sample_level(tcl, f, 5, 1, 1.0, NoiseStream(8), range(300))
    for threads, block in ((4, 33 * 40), (3, 33 * 7), (1, 10**6)):
        other = sample_level(tcl, f, 5, 1, 1.0, NoiseStream(8), range(300), threads=threads, batch_elements=block)
        assert np.array_equal(reference.fine, other.fine)
        assert np.array_equal(reference.coarse, other.coarse)


def test_cost_counts_euler_steps(tcl):
    noise = NoiseStream(1)
    f = RunningMax(1.0)
    assert sample_level(tcl, f, 0, 3, 1.0, noise, range(10)).cost == 30
    assert sample_level(tcl, f, 4, 1, 1.0, noise, range(10)).cost == 10 * (16 + 8)
    assert steps_per_sample(4, 2) == 3 * 2 * 2**3


def test_extend_appends_later_replications(tcl):
    noise = NoiseStream(6)
    f = RunningMax(1.0)
    whole = sample_level(tcl, f, 2, 1, 1.0, noise, range(50))
    parts = sample_level(tcl, f, 2, 1, 1.0, noise, range(20)).extend(sample_level(tcl, f, 2, 1, 1.0, noise, range(20, 50)))
    assert np.array_equal(whole.fine, parts.fine)
    assert np.array_equal(whole.coarse, parts.coarse)
    assert whole.cost == parts.cost and parts.count == 50


def test_empty_range(tcl):
    samples = sample_level(tcl, RunningMax(1.0), 2, 1, 1.0, NoiseStream(0), range(0))
    assert samples.count == 0 and samples.cost == 0


def test_uncoupled_level_draws_fine_paths_only(tcl, noise):
    f = RunningMax(1.0)
    coupled = sample_level(tcl, f, 4, 1, 1.0, noise, range(12))
    single = sample_level(tcl, f, 4, 1, 1.0, noise, range(12), coupled=False)
    assert single.coarse is None
    assert single.cost == 12 * 16
    np.testing.assert_array_equal(single.fine, coupled.fine)
