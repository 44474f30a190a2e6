import numpy as np
import pytest

from hybridmc.models import linear_model
from hybridmc.simulate import (
    LevelParams,
    NoiseStream,
    derive_coarse_noise,
    sample_coupled,
    sample_path,
    simulate_path,
)


def test_deterministic_decay_grid(decay, noise):
    path = sample_path(decay, LevelParams(1, 1, 1.0), noise, 0)
    assert path.states[:, 0].tolist() == [1.0, 0.5, 0.25]
    assert path.times.tolist() == [0.0, 0.5, 1.0]


def test_level_zero_takes_one_step(decay, noise):
    path = sample_path(decay, LevelParams(1, 0, 1.0), noise, 0)
    assert len(path) == 2


def test_paths_are_reproducible(tcl):
    lp = LevelParams(1, 5, 1.0)
    a = sample_path(tcl, lp, NoiseStream(9), 17)
    b = sample_path(tcl, lp, NoiseStream(9), 17)
    assert np.array_equal(a.states, b.states) and np.array_equal(a.modes, b.modes)


def test_path_starts_at_initial_state(tcl, noise):
    path = sample_path(tcl, LevelParams(1, 3, 1.0), noise, 0)
    assert path.state(0) == tcl.x0


def test_coupled_deterministic_terminals(decay, noise):
    pair = sample_coupled(decay, 1, 1, 1.0, noise, 0)
    assert pair.fine.states[-1, 0] == 0.25
    assert pair.coarse.states[-1, 0] == 0.0
    assert pair.coarse.params.level == 0


def test_coupling_needs_level_one(decay, noise):
    with pytest.raises(ValueError):
        sample_coupled(decay, 0, 1, 1.0, noise, 0)


def test_coarse_path_replays_from_derived_increments(tcl):
    noise = NoiseStream(31)
    for level in range(1, 7):
        fine = LevelParams(1, level, 1.0)
        for i in range(100):
            pair = sample_coupled(tcl, level, 1, 1.0, noise, i)
            w = noise.normals(level, i, fine.n_steps, 1)
            replay = simulate_path(tcl, fine.coarser(), *derive_coarse_noise(w))
            assert np.array_equal(pair.coarse.states, replay.states)
            assert np.array_equal(pair.coarse.modes, replay.modes)


def test_projection_replay_uses_even_fine_variates(tcl_projection):
    noise = NoiseStream(4)
    fine = LevelParams(1, 4, 1.0)
    for i in range(20):
        pair = sample_coupled(tcl_projection, 4, 1, 1.0, noise, i)
        w = noise.normals(4, i, fine.n_steps, 1)
        u = noise.uniforms(4, i, fine.n_steps)
        replay = simulate_path(tcl_projection, fine.coarser(), *derive_coarse_noise(w, u))
        assert np.array_equal(pair.coarse.states, replay.states)


def test_derived_increments_have_unit_variance():
    w = np.random.default_rng(0).standard_normal((20_000, 8, 1))
    coarse, _ = derive_coarse_noise(w)
    assert coarse.shape == (20_000, 4, 1)
    assert np.var(coarse) == pytest.approx(1.0, abs=0.03)


@pytest.mark.parametrize("fixture", ["tcl", "tcl_projection"])
def test_states_stay_in_invariant_closure(fixture, request):
    model = request.getfixturevalue(fixture)
    noise = NoiseStream(12)
    lp = LevelParams(1, 6, 1.0)
    for i in range(30):
        path = sample_path(model, lp, noise, i)
        assert np.all(model.inside_closure(path.modes, path.states))


def test_switch_steps_mark_mode_changes(tcl):
    path = sample_path(tcl, LevelParams(1, 7, 1.0), NoiseStream(2), 0)
    changes = {k for k in range(1, len(path)) if path.modes[k] != path.modes[k - 1]}
    assert set(path.switch_steps) == changes
    assert changes


@pytest.mark.slow
def test_brownian_terminal_moments():
    model = linear_model(rate=0.0, sigma=1.0, z0=0.0)
    from hybridmc.models import TerminalValue
    from hybridmc.simulate import sample_level

    samples = sample_level(model, TerminalValue(1.0), 4, 1, 1.0, NoiseStream(77), range(100_000))
    assert abs(samples.fine.mean()) <= 4 / np.sqrt(100_000)
    assert samples.fine.var() == pytest.approx(1.0, rel=0.05)
