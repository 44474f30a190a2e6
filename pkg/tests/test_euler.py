import numpy as np
import pytest

from hybridmc.models import HybridState, linear_model
from hybridmc.models.library import OFF, ON
from hybridmc.simulate import euler_step, euler_update


def test_step_inside_invariant(tcl):
    state = euler_update(tcl, HybridState(OFF, (20.0,)), 0.25, [0.0])
    assert state.mode == OFF
    assert state.continuous[0] == pytest.approx(20.2)


def test_projection_on_upper_threshold(tcl_projection):
    # z_aux = 20.2 + 0.7867 * 0.25 + 0.2 * 0.5 * 3 > 20.25
    state = euler_update(tcl_projection, HybridState(OFF, (20.2,)), 0.25, [3.0])
    assert state.mode == ON
    assert state.continuous == (20.25,)


def test_digital_controller_keeps_euler_state(tcl):
    state = euler_update(tcl, HybridState(OFF, (20.2,)), 0.25, [3.0])
    assert state.mode == ON
    expected = 20.2 + (32.0 - 20.2) / 15.0 * 0.25 + 0.2 * 0.5 * 3.0
    assert state.continuous[0] == pytest.approx(expected)


def test_semantics_differ_only_in_the_post_jump_state(tcl, tcl_projection):
    start = HybridState(OFF, (20.2,))
    digital = euler_update(tcl, start, 0.25, [3.0])
    projected = euler_update(tcl_projection, start, 0.25, [3.0])
    assert digital.mode == projected.mode == ON
    assert digital.continuous[0] > 20.25
    assert projected.continuous == (20.25,)


def test_zero_dynamics_leave_state_unchanged():
    model = linear_model(rate=0.0, sigma=0.0, z0=0.3)
    for dt, w in ((0.1, -2.0), (5.0, 7.0)):
        assert euler_update(model, HybridState(0, (0.3,)), dt, [w]) == HybridState(0, (0.3,))


def test_step_size_must_be_positive(tcl):
    with pytest.raises(ValueError):
        euler_update(tcl, tcl.x0, 0.0, [0.0])


def test_batch_step_reports_jumps(tcl_projection):
    q = np.array([OFF, OFF, ON])
    z = np.array([[20.0], [20.24], [19.76]])
    w = np.array([[0.0], [5.0], [-5.0]])
    q_next, z_next, jumped = euler_step(tcl_projection, q, z, 0.01, w, np.full(3, 0.5))
    assert jumped.tolist() == [False, True, True]
    assert q_next.tolist() == [OFF, ON, OFF]
    assert z_next[1, 0] == 20.25 and z_next[2, 0] == 19.75
