"""Phase-transition detection by comparing log-log decay slopes.

A convergence slowdown shows up as the late-window slope of log(value) vs
log(iteration) moving closer to zero than the early-window slope.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_MARGIN = 0.1


@dataclass(frozen=True)
class PhaseReport:
    slope_early: float
    slope_late: float
    margin: float
    transition_detected: bool


def _window_slope(iters, values, lo, hi, label):
    mask = (iters >= lo) & (iters <= hi) & (iters > 0)
    if np.count_nonzero(mask) < 2:
        raise ValueError(f"{label} window [{lo}, {hi}] contains fewer than 2 positive iterations")
    vals = values[mask]
    if np.any(vals <= 0):
        raise ValueError(
            f"{label} window contains nonpositive values; pass a second-moment "
            "or absolute-mean series (signed means can cross zero)")
    slope, _ = np.polyfit(np.log(iters[mask]), np.log(vals), 1)
    return float(slope)


def detect_phase_transition(iters, values, early_window, late_window,
                            margin: float = DEFAULT_MARGIN) -> PhaseReport:
    """Least-squares slopes of log(value) vs log(iter) on two windows.

    Slopes of a decaying series are negative; a transition is reported when
    the late slope exceeds the early slope by more than ``margin``, i.e. the
    decay visibly slows down.
    """
    iters = np.asarray(iters, dtype=float)
    values = np.asarray(values, dtype=float)
    if iters.shape != values.shape:
        raise ValueError("iters and values must have the same length")
    e_lo, e_hi = early_window
    l_lo, l_hi = late_window
    if not e_lo < e_hi or not l_lo < l_hi:
        raise ValueError("windows must be nonempty intervals (lo < hi)")
    if e_hi > l_lo:
        raise ValueError("early window must end before the late window starts")

    slope_early = _window_slope(iters, values, e_lo, e_hi, "early")
    slope_late = _window_slope(iters, values, l_lo, l_hi, "late")
    return PhaseReport(
        slope_early=slope_early,
        slope_late=slope_late,
        margin=margin,
        transition_detected=slope_late > slope_early + margin)
