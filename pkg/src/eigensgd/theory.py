"""Analytic predictions and bounds for eigencomponent convergence.

Conventions follow the solvers: alpha_k produces x_{k+1}, so a quantity "at
horizon n" refers to the iterate x_{n+1}.  The exact mean prediction is the
signed product prod_{k=0}^{n} (1 - alpha_k sigma_ell^2) times the initial
component; it holds for GD deterministically and for uniform-sampling SGD in
expectation.  The second moment of a component is bounded by the backward
coefficient recursion

    A_k = A_{k+1} A(alpha_k)
    B_k = A_{k+1} B(alpha_k) + B_{k+1} p(alpha_k)
    C_k = A_{k+1} C(alpha_k) + B_{k+1} q(alpha_k) + C_{k+1}

with bound A_0 <x0 - x*, v_ell>^2 + B_0 ||x0 - x*||^2 + C_0, plus closed-form
rate bounds for each coefficient under the decaying schedules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .problems import ProblemConstants, SyntheticProblem, component
from .schedules import FIXED, HARMONIC, POLYNOMIAL, StepSchedule


class UnsupportedRegimeError(ValueError):
    """Closed-form rate bound requested at or outside its validity regime."""


@dataclass(frozen=True)
class CoefficientFunctions:
    """The scalar coefficient functions of the second-moment recursion,
    bound to one problem's constants."""

    m: int
    l_tilde: float
    c_a: float
    sigma_max_sq: float
    sigma_min_sq: float
    f_star: float
    sigma_noise_sq: float

    @staticmethod
    def from_constants(c: ProblemConstants) -> "CoefficientFunctions":
        return CoefficientFunctions(
            m=c.m, l_tilde=c.l_tilde, c_a=c.c_a,
            sigma_max_sq=c.sigma_max_sq, sigma_min_sq=c.sigma_min_sq,
            f_star=c.f_star, sigma_noise_sq=c.sigma_noise_sq)

    def a_of(self, alpha, sig_sq):
        return 1.0 - 2.0 * alpha * sig_sq

    def b_of(self, alpha):
        return alpha**2 * self.m * self.l_tilde * self.c_a * self.sigma_max_sq

    def c_of(self, alpha):
        return 2.0 * alpha**2 * self.m * self.l_tilde * self.f_star

    def p_of(self, alpha):
        return 1.0 - alpha * self.sigma_min_sq

    def q_of(self, alpha):
        return 2.0 * alpha**2 * self.sigma_noise_sq


def decay_product(schedule: StepSchedule, sig_sq: float, count: int) -> float:
    """prod_{k=0}^{count-1} (1 - alpha_k * sig_sq), stable for count up to 1e6.

    Accumulated as sign plus log magnitude so long products neither overflow
    nor lose relative accuracy.
    """
    if count <= 0:
        return 1.0
    factors = 1.0 - schedule.steps(count) * sig_sq
    if np.any(factors == 0.0):
        return 0.0
    sign = -1.0 if np.count_nonzero(factors < 0) % 2 else 1.0
    logmag = float(np.sum(np.log(np.abs(factors))))
    return sign * math.exp(logmag)


def expected_component(p: SyntheticProblem, schedule: StepSchedule, ell: int,
                       x0, n: int) -> float:
    """Exact mean of <x_{n+1} - x_star, v_ell> under GD or uniform SGD."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    c0 = component(p, x0, ell)
    if c0 == 0.0:
        return 0.0
    sig_sq = float(p.sigma[ell - 1] ** 2)
    return decay_product(schedule, sig_sq, n + 1) * c0


def mean_bound_harmonic(a, b, sig_sq, c0, n) -> float:
    """(b/(b+n))^(a*sig_sq) * |c0|: mean bound for the a/(b+k) schedule."""
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    return (b / (b + n)) ** (a * sig_sq) * abs(c0)


def mean_bound_polynomial(a, b, gamma, sig_sq, c0, n) -> float:
    """Root-exponential mean bound for the a/(b+k)^gamma schedule."""
    if not 0.5 < gamma < 1.0:
        raise ValueError("gamma must lie strictly in (1/2, 1)")
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    rate = a * sig_sq / (1.0 - gamma)
    return math.exp(rate * (b ** (1.0 - gamma) - (b + n) ** (1.0 - gamma))) * abs(c0)


def kaczmarz_expected_component(p: SyntheticProblem, ell: int, x0, k: int) -> float:
    """(1 - sigma_ell^2/||A||_F^2)^k * <x0 - x_star, v_ell> for randomized
    Kaczmarz with squared-row-norm sampling on a consistent problem."""
    if not p.consistent:
        raise ValueError("the Kaczmarz mean prediction requires a consistent problem")
    if k < 0:
        raise ValueError("k must be nonnegative")
    frob_sq = float(np.sum(p.sigma**2))
    rate = 1.0 - float(p.sigma[ell - 1] ** 2) / frob_sq
    return rate**k * component(p, x0, ell)


@dataclass(frozen=True)
class FixedMomentBound:
    """Closed-form second-moment bound for fixed steps on consistent problems."""

    value: float
    base: float
    contractive: bool


def second_moment_bound_fixed(p: SyntheticProblem, consts: ProblemConstants,
                              alpha: float, x0, n: int) -> FixedMomentBound:
    """base^(n+1) * ||x0 - x_star||^2 with
    base = 1 - 2*alpha*sigma_min^2 + alpha^2*M*L_tilde*c(A)*sigma_max^2."""
    if not p.consistent:
        raise ValueError("the fixed-step second-moment bound requires a consistent problem")
    base = (1.0 - 2.0 * alpha * consts.sigma_min_sq
            + alpha**2 * consts.m * consts.l_tilde * consts.c_a * consts.sigma_max_sq)
    err = np.asarray(x0) - p.x_star
    value = base ** (n + 1) * float(err @ err)
    return FixedMomentBound(value=value, base=base, contractive=0.0 < base < 1.0)


@dataclass(frozen=True)
class MomentCoefficients:
    """Coefficients (A_0, B_0, C_0) of the backward second-moment recursion
    at horizon n, for one singular direction.

    ``a_negative`` flags that some per-step coefficient A(alpha_k) was
    negative, i.e. the step left the regime where the bound is monotone.
    """

    a0: float
    b0: float
    c0: float
    comp0_sq: float
    err0_sq: float
    a_negative: bool

    @property
    def bound(self) -> float:
        """A_0 <e0, v_ell>^2 + B_0 ||e0||^2 + C_0, clamped at 0."""
        return max(self.a0 * self.comp0_sq + self.b0 * self.err0_sq + self.c0, 0.0)


def recursion_arrays(cf: CoefficientFunctions, schedule: StepSchedule,
                     sig_sq: float, n: int):
    """All coefficients (A_k, B_k, C_k) for k = 0..n at horizon n.

    One O(n) backward pass of the recursion; the k = n base is
    (A(alpha_n), B(alpha_n), C(alpha_n)).
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    alphas = schedule.steps(n + 1)
    a_step = (1.0 - 2.0 * alphas * sig_sq).tolist()
    b_step = cf.b_of(alphas).tolist()
    c_step = cf.c_of(alphas).tolist()
    p_step = cf.p_of(alphas).tolist()
    q_step = cf.q_of(alphas).tolist()

    a_out = [0.0] * (n + 1)
    b_out = [0.0] * (n + 1)
    c_out = [0.0] * (n + 1)
    a_out[n] = a_step[n]
    b_out[n] = b_step[n]
    c_out[n] = c_step[n]
    for k in range(n - 1, -1, -1):
        a_next, b_next, c_next = a_out[k + 1], b_out[k + 1], c_out[k + 1]
        a_out[k] = a_next * a_step[k]
        b_out[k] = a_next * b_step[k] + b_next * p_step[k]
        c_out[k] = a_next * c_step[k] + b_next * q_step[k] + c_next
    return np.array(a_out), np.array(b_out), np.array(c_out)


def second_moment_recursion(p: SyntheticProblem, consts: ProblemConstants,
                            schedule: StepSchedule, ell: int, x0,
                            n: int) -> MomentCoefficients:
    """Backward-recursion coefficients bounding E[<x_{n+1}-x*, v_ell>^2 | x0].

    Negative A(alpha_k) values are kept signed (the algebra stays valid) and
    reported through ``a_negative``.
    """
    cf = CoefficientFunctions.from_constants(consts)
    sig_sq = float(p.sigma[ell - 1] ** 2)
    a_arr, b_arr, c_arr = recursion_arrays(cf, schedule, sig_sq, n)
    alphas = schedule.steps(n + 1)
    err = np.asarray(x0) - p.x_star
    return MomentCoefficients(
        a0=float(a_arr[0]), b0=float(b_arr[0]), c0=float(c_arr[0]),
        comp0_sq=component(p, x0, ell) ** 2,
        err0_sq=float(err @ err),
        a_negative=bool(np.any(1.0 - 2.0 * alphas * sig_sq < 0.0)))


@dataclass(frozen=True)
class RateBounds:
    """Evaluated closed-form upper bounds for the recursion coefficients at
    k = 0 and horizon n, with the asserted decay exponents where the bound
    is a power law in (b + n)."""

    a_term: float
    b_term: float
    qb_term: float
    ac_term: float
    qb_exponent: float | None = None
    ac_exponent: float | None = None


def _require(cond, msg):
    if not cond:
        raise UnsupportedRegimeError(msg)


def rate_bounds_harmonic(consts: ProblemConstants, a: float, b: float,
                         sig_ell_sq: float, n: int) -> RateBounds:
    """Closed-form bounds on A_0, B_0, sum q*B, and sum A*C for the a/(b+k)
    schedule.

    Requires b > 1 (the closed forms carry (b-1) factors) and parameters away
    from the regime thresholds a*sigma_min^2 = 2 and a*sig_ell^2 = 1/2, where
    the underlying integrals are singular.
    """
    _require(b > 1.0, f"closed forms require b > 1, got b = {b}")
    s_min = consts.sigma_min_sq
    _require(a * s_min != 2.0, "a*sigma_min^2 = 2 is a singular threshold")
    _require(a * sig_ell_sq != 0.5, "a*sigma_ell^2 = 1/2 is a singular threshold")

    mlc = consts.m * consts.l_tilde * consts.c_a * consts.sigma_max_sq

    a_term = (b / (b + n)) ** (2.0 * a * sig_ell_sq)
    b_term = (a**2 * mlc / (b - 1.0)) * ((b + 1.0) / (b + n + 1.0)) ** (a * s_min)

    qb_pre = 2.0 * a**4 * mlc * consts.sigma_noise_sq * ((b + 1.0) / (b - 1.0)) ** 3
    if a * s_min < 2.0:
        qb_term = qb_pre / (2.0 - a * s_min) * (b + 1.0) ** (a * s_min - 2.0) \
            * (b + n + 1.0) ** (-a * s_min)
        qb_exp = a * s_min
    else:
        qb_term = qb_pre / (a * s_min - 2.0) * (b + n + 1.0) ** (-2.0)
        qb_exp = 2.0

    ac_pre = 2.0 * a**2 * consts.m * consts.l_tilde * consts.f_star * (b / (b - 1.0)) ** 2
    two_as = 2.0 * a * sig_ell_sq
    if a * sig_ell_sq < 0.5:
        ac_term = ac_pre * b ** (two_as - 1.0) / (1.0 - two_as) * (b + n) ** (-two_as)
        ac_exp = two_as
    else:
        ac_term = ac_pre / (two_as - 1.0) * (b + n) ** (-1.0)
        ac_exp = 1.0

    return RateBounds(a_term=a_term, b_term=b_term, qb_term=qb_term,
                      ac_term=ac_term, qb_exponent=qb_exp, ac_exponent=ac_exp)


def rate_bounds_polynomial(consts: ProblemConstants, a: float, b: float,
                           gamma: float, sig_ell_sq: float, n: int) -> RateBounds:
    """Closed-form bounds on A_0, B_0, sum q*B, and sum A*C for the
    a/(b+k)^gamma schedule with 1/2 < gamma < 1 and b > 1."""
    _require(b > 1.0, f"closed forms require b > 1, got b = {b}")
    _require(0.5 < gamma < 1.0, f"gamma must lie strictly in (1/2, 1), got {gamma}")

    s_min = consts.sigma_min_sq
    mlc = consts.m * consts.l_tilde * consts.c_a * consts.sigma_max_sq
    g1 = 1.0 - gamma
    split = 1.0 - 0.5**g1

    a_term = math.exp((2.0 * a * sig_ell_sq / g1) * (b**g1 - (b + n) ** g1))
    b_term = (a**2 * mlc / (2.0 * gamma - 1.0)) * (b - 1.0) ** (1.0 - 2.0 * gamma) \
        * math.exp((a * s_min / g1) * ((b + 1.0) ** g1 - (b + n + 1.0) ** g1))

    qb_pre = a**4 * mlc * consts.sigma_noise_sq / (2.0 * (2.0 * gamma - 1.0) ** 2) \
        * ((b - 1.0) / (b + 1.0)) ** (1.0 - 4.0 * gamma)
    qb_term = qb_pre * (
        math.exp(-(a * s_min / g1) * split * (b + n + 1.0) ** g1)
        * (b + 1.0) ** (2.0 - 4.0 * gamma)
        + ((b + n + 1.0) / 2.0) ** (2.0 - 4.0 * gamma))

    ac_pre = 2.0 * a**2 * consts.m * consts.l_tilde * consts.f_star \
        / (2.0 * gamma - 1.0) * ((b - 1.0) / b) ** (-2.0 * gamma)
    ac_term = ac_pre * (
        math.exp(-(2.0 * a * sig_ell_sq / g1) * split * max(n, 1) ** g1)
        * b ** (1.0 - 2.0 * gamma)
        + ((b + n) / 2.0) ** (1.0 - 2.0 * gamma))

    return RateBounds(a_term=a_term, b_term=b_term, qb_term=qb_term, ac_term=ac_term)
