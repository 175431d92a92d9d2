"""Step-size schedules: fixed alpha, a/(b+k), and a/(b+k)^gamma.

Iterations are indexed from 0: alpha_k is the step that produces x_{k+1}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .problems import ProblemConstants

FIXED = "fixed"
HARMONIC = "harmonic"
POLYNOMIAL = "polynomial"


@dataclass(frozen=True)
class StepSchedule:
    """One of the three step-size families.

    Use the ``fixed``, ``harmonic``, or ``polynomial`` constructors; the
    decaying variants are nonincreasing in k and the polynomial family is
    restricted to 1/2 < gamma < 1 (gamma = 1 is the harmonic family).
    """

    kind: str
    alpha: float = 0.0
    a: float = 0.0
    b: float = 0.0
    gamma: float = 0.0

    @staticmethod
    def fixed(alpha: float) -> "StepSchedule":
        if alpha <= 0:
            raise ValueError("alpha must be positive")
        return StepSchedule(FIXED, alpha=alpha)

    @staticmethod
    def harmonic(a: float, b: float) -> "StepSchedule":
        if a <= 0 or b <= 0:
            raise ValueError("a and b must be positive")
        return StepSchedule(HARMONIC, a=a, b=b)

    @staticmethod
    def polynomial(a: float, b: float, gamma: float) -> "StepSchedule":
        if a <= 0 or b <= 0:
            raise ValueError("a and b must be positive")
        if not 0.5 < gamma < 1.0:
            raise ValueError(f"gamma must lie strictly in (1/2, 1), got {gamma}")
        return StepSchedule(POLYNOMIAL, a=a, b=b, gamma=gamma)

    def step_at(self, k: int) -> float:
        """alpha_k for a nonnegative iteration index k."""
        if k < 0:
            raise ValueError("k must be nonnegative")
        if self.kind == FIXED:
            return self.alpha
        if self.kind == HARMONIC:
            return self.a / (self.b + k)
        return self.a / (self.b + k) ** self.gamma

    def steps(self, count: int) -> np.ndarray:
        """Array of alpha_k for k = 0..count-1."""
        k = np.arange(count, dtype=float)
        if self.kind == FIXED:
            return np.full(count, self.alpha)
        if self.kind == HARMONIC:
            return self.a / (self.b + k)
        return self.a / (self.b + k) ** self.gamma

    def describe(self) -> str:
        if self.kind == FIXED:
            return f"fixed(alpha={self.alpha!r})"
        if self.kind == HARMONIC:
            return f"harmonic(a={self.a!r}, b={self.b!r})"
        return f"polynomial(a={self.a!r}, b={self.b!r}, gamma={self.gamma!r})"


@dataclass(frozen=True)
class ScheduleDiagnostic:
    code: str
    message: str


def validate(schedule: StepSchedule, consts: ProblemConstants,
             horizon: int = 10**6) -> list[ScheduleDiagnostic]:
    """Structured warnings for step sizes outside the bounds' validity windows.

    These are warnings, not errors: runs proceed regardless.
    """
    out = []
    ml = consts.m * consts.l_tilde
    thresh = 1.0 / (2.0 * ml)
    a0 = schedule.step_at(0)

    if a0 > thresh:
        if schedule.kind == FIXED:
            where = "all k"
        else:
            # find first k with alpha_k <= thresh (schedule nonincreasing)
            if schedule.kind == HARMONIC:
                k_ok = math.ceil(schedule.a / thresh - schedule.b)
            else:
                k_ok = math.ceil((schedule.a / thresh) ** (1.0 / schedule.gamma) - schedule.b)
            k_ok = max(k_ok, 1)
            where = f"k < {k_ok}" if k_ok <= horizon else "all k up to the horizon"
        out.append(ScheduleDiagnostic(
            "step-exceeds-half-inverse-smoothness",
            f"alpha_k > 1/(2*M*L_tilde) = {thresh:.6g} for {where}; "
            "the norm contraction recursion may not apply there"))

    if schedule.kind == FIXED:
        window = 2.0 / (ml * consts.c_a**2)
        if not 0.0 < schedule.alpha < window:
            out.append(ScheduleDiagnostic(
                "fixed-step-outside-window",
                f"fixed alpha = {schedule.alpha:.6g} outside (0, {window:.6g}); "
                "the fixed-step second-moment bound is not contractive"))

    if abs(1.0 - a0 * consts.sigma_max_sq) >= 1.0:
        out.append(ScheduleDiagnostic(
            "mean-recursion-noncontractive",
            f"|1 - alpha_0 * sigma_max^2| = {abs(1 - a0 * consts.sigma_max_sq):.6g} >= 1; "
            "the mean recursion is not contractive at k = 0"))

    return out
