"""
Decay-rate regression, geometric bias bound and smoothing gap.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from hybridmc.errors import RateFitError, RateNotIdentifiedError

# Rate used when fewer than two levels have a non-zero mean correction.
DEFAULT_ALPHA = 0.5


@dataclass(frozen=True)
class DecayFit:
    """|b_l| ~ c 2^(-alpha l) fitted on `levels`."""

    alpha: float
    c: float
    levels: tuple[int, ...]
    defaulted: bool = False


def fit_decay_rate(levels: Sequence[int], magnitudes: Sequence[float]) -> DecayFit:
    """
    Least-squares fit of log2 |b_l| = log2 c - alpha l.

    Levels with a zero magnitude are skipped.

    Raises:
        RateFitError: If fewer than two usable levels remain
    """
    if len(levels) != len(magnitudes):
        raise RateFitError("levels and magnitudes differ in length")
    pairs = [(int(l), abs(float(b))) for l, b in zip(levels, magnitudes) if b != 0 and np.isfinite(b)]
    if len(pairs) < 2:
        raise RateFitError(f"decay fit needs two levels with non-zero magnitude, got {len(pairs)}")
    ell = np.array([p[0] for p in pairs], dtype=float)
    y = np.log2([p[1] for p in pairs])
    design = np.column_stack([np.ones_like(ell), -ell])
    (log_c, alpha), *_ = np.linalg.lstsq(design, y, rcond=None)
    return DecayFit(float(alpha), float(2.0**log_c), tuple(p[0] for p in pairs))


def fit_or_default(b_hat: Sequence[float]) -> DecayFit:
    """Fit on levels 1..L of a per-level mean table; fall back to DEFAULT_ALPHA."""
    levels = list(range(1, len(b_hat)))
    try:
        return fit_decay_rate(levels, list(b_hat[1:]))
    except RateFitError:
        return DecayFit(DEFAULT_ALPHA, float("nan"), (), defaulted=True)


def bias_bound(b_hat: Sequence[float], alpha: float, max_level: int) -> float:
    """
    Geometric bias bound B_L from the last two or three levels.

    Args:
        b_hat: Per-level means indexed 0..L
        alpha: Fitted decay rate
        max_level: L, at least 2
    """
    if max_level < 2:
        raise ValueError(f"bias bound needs L >= 2, got {max_level}")
    if len(b_hat) <= max_level:
        raise ValueError(f"need means for levels 0..{max_level}")
    depth = 2 if max_level == 2 else 3
    return float(max(abs(b_hat[max_level - j]) / 2.0 ** (j * alpha) for j in range(depth)))


def bias_accepted(bound: float, alpha: float, epsilon_star: float, a2: float) -> bool:
    """
    True iff B_L <= a2 (2^alpha - 1) epsilon*.

    Raises:
        RateNotIdentifiedError: If alpha <= 0 and the bound is non-zero
    """
    if bound == 0:
        return True
    if not alpha > 0:
        raise RateNotIdentifiedError(f"bias rate not identified (alpha = {alpha:.4g})")
    return bound <= a2 * (2.0**alpha - 1.0) * epsilon_star


def smoothing_gap(payoffs_m: Sequence[float], payoffs_prev: Sequence[float]) -> float:
    """|mean(g^m(y) - g^(m-1)(y))| over the same finest-level samples."""
    a = np.asarray(payoffs_m, dtype=float)
    b = np.asarray(payoffs_prev, dtype=float)
    if a.shape != b.shape or a.size == 0:
        raise ValueError("smoothing gap needs two equally sized, non-empty payoff samples")
    return float(abs(np.mean(a - b)))
