"""Shared fixtures for the test suite.

The expensive SGD ensembles (2000 repetitions, three schedule families) are
session-scoped so the mean-tracking and second-moment acceptance checks share
one set of runs.
"""

import numpy as np
import pytest

import eigensgd as es

X0_SEED_TAG = 0x0D15EA5E

# 30x20 with spectrum [0.5, 1]: the condition number is small enough that the
# fixed-step contraction window (0, 2/(M*L_tilde*c(A)^2)) is non-degenerate.
SMALL_SPEC = es.SpectrumSpec(30, 20, 0.5, 1.0, "linear", 314)
FIXED_ALPHA = 0.004

SCHEDULES = {
    "fixed": es.StepSchedule.fixed(FIXED_ALPHA),
    "harmonic": es.StepSchedule.harmonic(0.5, 20.0),
    "polynomial": es.StepSchedule.polynomial(0.1, 5.0, 0.8),
}


@pytest.fixture(scope="session")
def small_problem():
    return es.build_problem(SMALL_SPEC, seed=SMALL_SPEC.seed)


@pytest.fixture(scope="session")
def small_consts(small_problem):
    return es.compute_constants(small_problem)


@pytest.fixture(scope="session")
def small_x0(small_problem):
    return es.default_x0(small_problem, 1.0, [555, X0_SEED_TAG])


@pytest.fixture(scope="session")
def inconsistent_problem():
    return es.build_problem(SMALL_SPEC, seed=SMALL_SPEC.seed, noise_level=0.5)


@pytest.fixture(scope="session")
def sgd_ensembles(small_problem, small_x0):
    """2000-repetition SGD ensembles for all three schedule families.

    Returns {name: (schedule, EnsembleSummary, index_of_iteration)}.
    """
    plan = es.RepetitionPlan(repetitions=2000, base_seed=555)
    rec = es.Recording("geometric", 16)
    out = {}
    for name, sched in SCHEDULES.items():
        s = es.run_ensemble(small_problem, es.SGD, sched, small_x0, 1000,
                            plan, (1, 10, 20), rec)
        idx = {int(k): j for j, k in enumerate(s.recorded_iters)}
        out[name] = (sched, s, idx)
    return out


def report(name, ok, detail=""):
    """One printed pass/fail line per acceptance criterion."""
    status = "PASS" if ok else "FAIL"
    print(f"{name}: {status}" + (f"  [{detail}]" if detail else ""))
    return ok
