"""
Euler-Maruyama state update for hybrid states.
"""

import math

import numpy as np

from hybridmc.models.shs import HybridState, ModeSemantics, ShsModel, sample_kernel


def euler_step(
    model: ShsModel,
    q: np.ndarray,
    z: np.ndarray,
    dt: float,
    w: np.ndarray,
    u: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Advance a batch of hybrid states by one step of size dt.

    Computes z_aux = z + b(q, z) dt + sigma(q, z) sqrt(dt) W. Rows whose
    z_aux leaves the invariant of their mode jump: under PROJECTION the
    state is clamped onto the boundary and the mode drawn from the kernel;
    under DIGITAL the Euler state is kept and the mode is recomputed.

    Args:
        model: The hybrid system
        q: (B,) current modes
        z: (B, n) current continuous states
        dt: Step size
        w: (B, m) standard normal increments
        u: (B,) kernel variates; 0.5 is used when omitted

    Returns:
        (q_next, z_next, jumped) with jumped a (B,) boolean mask
    """
    b = model.drift(q, z)
    s = model.diffusion(q, z)
    z_aux = z + b * dt + np.einsum("bij,bj->bi", s, w) * math.sqrt(dt)

    if model.semantics is ModeSemantics.DIGITAL and model.mode_law is not None:
        q_next = np.asarray(model.mode_law(q, z_aux), dtype=q.dtype)
        return q_next, z_aux, q_next != q

    jumped = ~model.inside(q, z_aux)
    if not jumped.any():
        return q.copy(), z_aux, jumped

    boundary = model.clamp(q, z_aux)
    q_next = q.copy()
    for row in np.flatnonzero(jumped):
        variate = 0.5 if u is None else float(u[row])
        q_next[row] = sample_kernel(model, int(q[row]), boundary[row], variate)

    if model.semantics is ModeSemantics.PROJECTION:
        z_next = np.where(jumped[:, np.newaxis], boundary, z_aux)
    else:
        z_next = z_aux
    return q_next, z_next, jumped


def euler_update(model: ShsModel, state: HybridState, dt: float, w, u: float = 0.5) -> HybridState:
    """
    Single-state update (q_k, z_k) -> (q_{k+1}, z_{k+1}).

    Under digital semantics the next mode is read from the unprojected
    post-step state: an OFF TCL with z_aux = 20.5 switches ON and keeps
    z_aux = 20.5. Under projection semantics a state leaving the mode
    invariant is first clamped to its boundary (20.25 for theta_plus) and
    the kernel then draws the new mode.

    Args:
        model: The hybrid system
        state: Current hybrid state
        dt: Step size, must be positive
        w: m-dimensional standard normal vector
        u: Kernel variate, only consulted on a jump

    Returns:
        The updated hybrid state
    """
    if not dt > 0:
        raise ValueError(f"step size must be positive, got {dt}")
    q = np.array([state.mode])
    z = state.z[np.newaxis]
    w = np.asarray(w, dtype=float).reshape(1, model.noise_dim)
    q_next, z_next, _ = euler_step(model, q, z, dt, w, np.array([u]))
    return HybridState(int(q_next[0]), tuple(z_next[0]))
