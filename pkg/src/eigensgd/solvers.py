"""GD, uniform-sampling SGD, and randomized Kaczmarz trajectories.

The SGD update is x_{k+1} = x_k + alpha_k * M * (b_i - <a_i, x_k>) * a_i with
i drawn uniformly from 1..M; the factor M comes from writing the objective as
an average of f_i(x) = (M/2)(a_i^T x - b_i)^2.  Kaczmarz projects onto the
sampled row's hyperplane and draws rows with probability ||a_i||^2 / ||A||_F^2.

Row indices passed to the single-step functions are 1-based, like probe
indices.  Trajectories are deterministic given (seed, config): the per-
iteration row draws come from a Philox stream keyed by the seed, independent
of the recording settings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .problems import SyntheticProblem
from .schedules import StepSchedule

GD = "gd"
SGD = "sgd"
KACZMARZ = "kaczmarz"
METHODS = (GD, SGD, KACZMARZ)

DIVERGENCE_FACTOR = 1e12


class DivergenceError(RuntimeError):
    """A trajectory blew up or produced non-finite iterates."""

    def __init__(self, iteration, message=None):
        self.iteration = iteration
        super().__init__(message or f"trajectory diverged at iteration {iteration}")


class EnsembleDivergenceError(RuntimeError):
    """One or more repetitions of an ensemble diverged.

    ``failures`` is a list of (repetition_index, seed_entropy, iteration).
    """

    def __init__(self, failures):
        self.failures = failures
        reps = ", ".join(f"rep {r} (seed {s}) at iter {it}" for r, s, it in failures)
        super().__init__(f"{len(failures)} repetition(s) diverged: {reps}")


def gd_step(p: SyntheticProblem, x, alpha):
    """One gradient-descent step: x - alpha * (A^T A x - A^T b)."""
    x = np.asarray(x, dtype=float)
    return x - alpha * (p.a.T @ (p.a @ x - p.b))


def sgd_step(p: SyntheticProblem, x, alpha, i):
    """One SGD step on row i (1-based): x + alpha*M*(b_i - <a_i, x>)*a_i."""
    if not 1 <= i <= p.m:
        raise IndexError(f"row index {i} outside 1..{p.m}")
    x = np.asarray(x, dtype=float)
    a_i = p.a[i - 1]
    return x + (alpha * p.m * (p.b[i - 1] - a_i @ x)) * a_i


def kaczmarz_step(p: SyntheticProblem, x, i):
    """Project x onto the hyperplane <a_i, x> = b_i (row i is 1-based)."""
    if not 1 <= i <= p.m:
        raise IndexError(f"row index {i} outside 1..{p.m}")
    x = np.asarray(x, dtype=float)
    a_i = p.a[i - 1]
    nrm_sq = a_i @ a_i
    if nrm_sq == 0.0:
        raise ValueError(f"row {i} is zero; cannot project")
    return x + ((p.b[i - 1] - a_i @ x) / nrm_sq) * a_i


@dataclass(frozen=True)
class Recording:
    """Which iterations to record: every one, or a geometric subsample.

    Iteration 0 and the final iterate are always recorded.
    """

    kind: str = "geometric"
    points_per_decade: int = 64

    def __post_init__(self):
        if self.kind not in ("all", "geometric"):
            raise ValueError(f"unknown recording kind {self.kind!r}")
        if self.kind == "geometric" and self.points_per_decade < 1:
            raise ValueError("points_per_decade must be >= 1")

    def iterations(self, iters: int) -> np.ndarray:
        if self.kind == "all":
            return np.arange(iters + 1)
        ppd = self.points_per_decade
        n_exp = int(math.ceil(math.log10(max(iters, 1)) * ppd)) + 1
        grid = np.unique(np.round(10.0 ** (np.arange(n_exp + 1) / ppd)).astype(np.int64))
        grid = grid[grid <= iters]
        return np.unique(np.concatenate(([0], grid, [iters])))

    def describe(self) -> str:
        return "all" if self.kind == "all" else f"geometric:{self.points_per_decade}"


@dataclass(frozen=True)
class RepetitionPlan:
    """How many independent repetitions to run and how they are seeded."""

    repetitions: int = 1
    base_seed: int = 0

    def __post_init__(self):
        if self.repetitions < 1:
            raise ValueError("repetitions must be positive")

    def seed_for(self, rep: int) -> list[int]:
        """Entropy for repetition ``rep``; feeds numpy's SeedSequence."""
        return [self.base_seed, rep]


@dataclass
class Trace:
    """Recorded signed components and squared error norm along one trajectory."""

    recorded_iters: np.ndarray
    probes: tuple[int, ...]
    components: dict[int, np.ndarray]
    norm_sq: np.ndarray
    metadata: dict = field(default_factory=dict)


@dataclass
class EnsembleSummary:
    """Across-repetition means and standard errors at the recorded iterations."""

    recorded_iters: np.ndarray
    probes: tuple[int, ...]
    mean_components: dict[int, np.ndarray]
    se_components: dict[int, np.ndarray]
    mean_components_sq: dict[int, np.ndarray]
    se_components_sq: dict[int, np.ndarray]
    mean_norm_sq: np.ndarray
    se_norm_sq: np.ndarray
    repetitions: int
    metadata: dict = field(default_factory=dict)


def _row_stream(p, method, seed, iters):
    """Pre-drawn 0-based row indices for every iteration (None for GD)."""
    if method == GD:
        return None
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    if method == SGD:
        return rng.integers(0, p.m, size=iters)
    weights = np.einsum("ij,ij->i", p.a, p.a) / np.sum(p.a * p.a)
    return rng.choice(p.m, size=iters, p=weights)


def _check_args(p, method, schedule, x0, iters, probes):
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    if method in (GD, SGD) and schedule is None:
        raise ValueError(f"{method} requires a step schedule")
    if iters < 1:
        raise ValueError("iters must be >= 1")
    if len(probes) == 0:
        raise ValueError("probes must be nonempty")
    for ell in probes:
        if not 1 <= ell <= p.n:
            raise IndexError(f"probe index {ell} outside 1..{p.n}")
    if np.asarray(x0).shape != (p.n,):
        raise ValueError(f"x0 must have shape ({p.n},)")


def run_trajectory(p: SyntheticProblem, method: str, schedule: StepSchedule | None,
                   x0, iters: int, seed, probes,
                   recording: Recording = Recording()) -> Trace:
    """Run one trajectory and record error components at the chosen iterations.

    Aborts with DivergenceError if the iterate goes non-finite or the squared
    error exceeds 1e12 times its initial value.
    """
    probes = tuple(int(ell) for ell in probes)
    _check_args(p, method, schedule, x0, iters, probes)

    rec = recording.iterations(iters)
    rec_mask = np.zeros(iters + 1, dtype=bool)
    rec_mask[rec] = True

    vp = p.v[:, [ell - 1 for ell in probes]]  # N x P
    x_star = p.x_star
    rows = _row_stream(p, method, seed, iters)
    alphas = schedule.steps(iters) if method in (GD, SGD) else None

    a, b = p.a, p.b
    m = p.m
    atb = a.T @ b

    comp_out = np.empty((len(rec), len(probes)))
    nsq_out = np.empty(len(rec))
    out_pos = 0

    x = np.array(x0, dtype=float)
    err = x - x_star
    nsq0 = float(err @ err)
    limit = DIVERGENCE_FACTOR * nsq0 if nsq0 > 0 else math.inf

    for k in range(iters + 1):
        if rec_mask[k]:
            comp_out[out_pos] = err @ vp
            nsq_out[out_pos] = err @ err
            out_pos += 1
        if k == iters:
            break
        if method == GD:
            x = x - alphas[k] * (a.T @ (a @ x) - atb)
        elif method == SGD:
            i = rows[k]
            a_i = a[i]
            x = x + (alphas[k] * m * (b[i] - a_i @ x)) * a_i
        else:
            i = rows[k]
            a_i = a[i]
            x = x + ((b[i] - a_i @ x) / (a_i @ a_i)) * a_i
        err = x - x_star
        nsq = err @ err
        if not np.isfinite(nsq) or nsq > limit:
            raise DivergenceError(k + 1)

    metadata = {
        "method": method,
        "schedule": schedule.describe() if schedule is not None else "none",
        "seed": seed,
        "problem": p.digest(),
    }
    return Trace(recorded_iters=rec, probes=probes,
                 components={ell: comp_out[:, j] for j, ell in enumerate(probes)},
                 norm_sq=nsq_out, metadata=metadata)


def run_ensemble(p: SyntheticProblem, method: str, schedule: StepSchedule | None,
                 x0, iters: int, plan: RepetitionPlan, probes,
                 recording: Recording = Recording()) -> EnsembleSummary:
    """Run ``plan.repetitions`` independent trajectories from the same x0.

    Repetition r uses the seed mix (base_seed, r).  If any repetition
    diverges, the whole ensemble fails with EnsembleDivergenceError naming
    the offending repetitions.
    """
    probes = tuple(int(ell) for ell in probes)
    reps = plan.repetitions
    comps = None
    nsqs = None
    failures = []
    rec = None
    for r in range(reps):
        seed = plan.seed_for(r)
        try:
            tr = run_trajectory(p, method, schedule, x0, iters, seed, probes, recording)
        except DivergenceError as exc:
            failures.append((r, seed, exc.iteration))
            continue
        if comps is None:
            rec = tr.recorded_iters
            comps = np.empty((reps, len(rec), len(probes)))
            nsqs = np.empty((reps, len(rec)))
        comps[r] = np.column_stack([tr.components[ell] for ell in probes])
        nsqs[r] = tr.norm_sq
    if failures:
        raise EnsembleDivergenceError(failures)

    def _mean_se(arr):
        mean = arr.mean(axis=0)
        if reps == 1:
            return mean, np.zeros_like(mean)
        se = arr.std(axis=0, ddof=1) / math.sqrt(reps)
        return mean, se

    mean_c, se_c = _mean_se(comps)
    mean_c2, se_c2 = _mean_se(comps**2)
    mean_n, se_n = _mean_se(nsqs)

    metadata = {
        "method": method,
        "schedule": schedule.describe() if schedule is not None else "none",
        "base_seed": plan.base_seed,
        "repetitions": reps,
        "problem": p.digest(),
    }
    return EnsembleSummary(
        recorded_iters=rec, probes=probes,
        mean_components={ell: mean_c[:, j] for j, ell in enumerate(probes)},
        se_components={ell: se_c[:, j] for j, ell in enumerate(probes)},
        mean_components_sq={ell: mean_c2[:, j] for j, ell in enumerate(probes)},
        se_components_sq={ell: se_c2[:, j] for j, ell in enumerate(probes)},
        mean_norm_sq=mean_n, se_norm_sq=se_n,
        repetitions=reps, metadata=metadata)


def default_x0(p: SyntheticProblem, radius: float, seed) -> np.ndarray:
    """x_star plus a seeded uniform-sphere offset of the given radius.

    A spherical offset gives every singular direction equal expected weight.
    """
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    w = rng.standard_normal(p.n)
    w /= np.linalg.norm(w)
    return p.x_star + radius * w
