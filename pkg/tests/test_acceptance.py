"""Acceptance suite: ten end-to-end checks of measured behavior against the
analytic predictions and bounds.  Each check prints one PASS/FAIL line.

Run with ``pytest -v -s tests/test_acceptance.py`` to see the lines as they
appear; without -s they show up in captured output for failing tests only.
"""

import filecmp
import math

import numpy as np
import pytest

import eigensgd as es
from eigensgd.theory import CoefficientFunctions, recursion_arrays

from conftest import FIXED_ALPHA, SCHEDULES, SMALL_SPEC, X0_SEED_TAG, report

CHECKPOINTS = (10, 100, 1000)


# --- A1: GD components equal the product prediction exactly -----------------

def test_a1_gd_exactness(small_problem, small_x0):
    p, x0 = small_problem, small_x0
    e0 = float(np.linalg.norm(x0 - p.x_star))
    worst = 0.0
    for sched in SCHEDULES.values():
        tr = es.run_trajectory(p, es.GD, sched, x0, 10**4, [0, 0], (1, 10, 20),
                               es.Recording("geometric", 16))
        for ell in (1, 10, 20):
            for j, k in enumerate(tr.recorded_iters):
                if k == 0:
                    continue
                pred = es.expected_component(p, sched, ell, x0, int(k) - 1)
                rel = abs(tr.components[ell][j] - pred) / max(abs(pred), e0)
                worst = max(worst, rel)
    ok = worst <= 1e-10

    # one exact GD step with alpha = 1/sigma_max^2 annihilates the top component
    alpha = 1.0 / float(p.sigma[0] ** 2)
    x1 = es.gd_step(p, x0, alpha)
    kill = abs(es.component(p, x1, 1))
    ok_kill = kill <= 1e-10 * e0

    assert report("A1 gd-exactness", ok and ok_kill,
                  f"worst rel dev {worst:.2e}, one-step top component {kill:.2e}")


# --- A2: exhaustive one-step enumeration on a 5x3 instance ------------------

def test_a2_one_step_enumeration():
    spec = es.SpectrumSpec(5, 3, 0.5, 1.0, "linear", 99)
    p = es.build_problem(spec, seed=99)
    consts = es.compute_constants(p)
    rng = np.random.default_rng(7)
    worst_mean = 0.0
    bound_ok = True
    for _ in range(20):
        x0 = p.x_star + rng.normal(size=3)
        alpha = float(rng.uniform(0.001, 0.05))
        sched = es.StepSchedule.fixed(alpha)
        for ell in (1, 2, 3):
            branches = np.array([es.component(p, es.sgd_step(p, x0, alpha, i), ell)
                                 for i in range(1, 6)])
            worst_mean = max(worst_mean, abs(branches.mean()
                                             - es.expected_component(p, sched, ell, x0, 0)))
            mc = es.second_moment_recursion(p, consts, sched, ell, x0, 0)
            if (branches**2).mean() > mc.bound * (1 + 1e-12):
                bound_ok = False
    assert report("A2 one-step-enumeration", worst_mean <= 1e-12 and bound_ok,
                  f"worst |mean - prediction| {worst_mean:.2e}")


# --- A3/A4: 2000-repetition ensembles, mean tracking and dominance ----------

def test_a3_mean_tracking(small_problem, small_x0, sgd_ensembles):
    p, x0 = small_problem, small_x0
    worst = 0.0
    for name, (sched, s, idx) in sgd_ensembles.items():
        for ell in (1, 10, 20):
            for k in CHECKPOINTS:
                j = idx[k]
                pred = es.expected_component(p, sched, ell, x0, k - 1)
                se = s.se_components[ell][j]
                dev = abs(s.mean_components[ell][j] - pred) / se
                worst = max(worst, dev)
    assert report("A3 mean-tracking", worst <= 4.0,
                  f"worst deviation {worst:.2f} standard errors")


def test_a4_second_moment_dominance(small_problem, small_consts, small_x0,
                                    sgd_ensembles):
    p, consts, x0 = small_problem, small_consts, small_x0
    window = 2.0 / (consts.m * consts.l_tilde * consts.c_a**2)
    assert 0.0 < FIXED_ALPHA < window  # premise: fixed step inside the window
    recursion_ok = fixed_ok = True
    for name, (sched, s, idx) in sgd_ensembles.items():
        for ell in (1, 10, 20):
            for k in CHECKPOINTS:
                j = idx[k]
                sq = s.mean_components_sq[ell][j]
                se = s.se_components_sq[ell][j]
                mc = es.second_moment_recursion(p, consts, sched, ell, x0, k - 1)
                if sq > mc.bound + 4 * se:
                    recursion_ok = False
                if name == "fixed":
                    fb = es.second_moment_bound_fixed(p, consts, FIXED_ALPHA, x0, k - 1)
                    if sq > fb.value + 4 * se:
                        fixed_ok = False
    assert report("A4 second-moment-dominance", recursion_ok and fixed_ok,
                  f"recursion bound {'held' if recursion_ok else 'violated'}, "
                  f"fixed-step closed form {'held' if fixed_ok else 'violated'}")


# --- A5: small-figure presets track the prediction in the initial phase -----

@pytest.mark.parametrize("name", ["fig2", "fig3"])
def test_a5_initial_phase_accuracy(name):
    cfg = es.preset(name)
    cfg = es.with_overrides(cfg, iters=500,
                            plan=es.RepetitionPlan(200, cfg.plan.base_seed),
                            recording=es.Recording("all"))
    p = es.build_problem(cfg.problem, seed=cfg.problem.seed,
                         noise_level=cfg.noise_level)
    x0 = es.default_x0(p, cfg.x0_radius, [cfg.plan.base_seed, X0_SEED_TAG])
    s = es.run_ensemble(p, cfg.method, cfg.schedule, x0, cfg.iters, cfg.plan,
                        cfg.probes, cfg.recording)
    worst = 0.0
    for j, k in enumerate(s.recorded_iters):
        if k == 0:
            continue
        pred = es.expected_component(p, cfg.schedule, 1, x0, int(k) - 1)
        worst = max(worst, abs(abs(s.mean_components[1][j]) - abs(pred)) / abs(pred))
    assert report(f"A5 initial-phase-accuracy[{name}]", worst < 0.25,
                  f"worst relative deviation {worst:.3f} over 500 iterations")


# --- A6: the decay slowdown is visible at desk scale ------------------------

@pytest.mark.parametrize("name", ["fig4", "fig8"])
def test_a6_phase_transition(name):
    cfg = es.preset(name, "desk")
    assert cfg.iters == 10**5 and cfg.plan.repetitions == 1
    p = es.build_problem(cfg.problem, seed=cfg.problem.seed)
    x0 = es.default_x0(p, cfg.x0_radius, [cfg.plan.base_seed, X0_SEED_TAG])
    tr = es.run_trajectory(p, cfg.method, cfg.schedule, x0, cfg.iters,
                           [cfg.plan.base_seed, 0], (1,), cfg.recording)
    mask = tr.recorded_iters > 0
    rep = es.detect_phase_transition(tr.recorded_iters[mask], tr.norm_sq[mask],
                                     (1e2, 1e3), (1e4, 1e5))
    assert report(f"A6 phase-transition[{name}]", rep.transition_detected,
                  f"slopes {rep.slope_early:.3f} -> {rep.slope_late:.3f}")


# --- A7: Kaczmarz ensemble mean follows the per-direction rate --------------

def test_a7_kaczmarz_mean():
    cfg = es.preset("fig1")
    p = es.build_problem(cfg.problem, seed=cfg.problem.seed)
    x0 = es.default_x0(p, cfg.x0_radius, [cfg.plan.base_seed, X0_SEED_TAG])
    plan = es.RepetitionPlan(500, cfg.plan.base_seed)
    s = es.run_ensemble(p, es.KACZMARZ, None, x0, 1000, plan, cfg.probes,
                        es.Recording("geometric", 16))
    idx = {int(k): j for j, k in enumerate(s.recorded_iters)}
    worst = 0.0
    for ell in cfg.probes:
        for k in CHECKPOINTS:
            j = idx[k]
            pred = es.kaczmarz_expected_component(p, ell, x0, k)
            dev = abs(s.mean_components[ell][j] - pred) / s.se_components[ell][j]
            worst = max(worst, dev)
    assert report("A7 kaczmarz-mean", worst <= 4.0,
                  f"worst deviation {worst:.2f} standard errors")


# --- A8: closed-form rate bounds dominate the exact recursion ---------------

def test_a8_closed_form_dominance(inconsistent_problem):
    p = inconsistent_problem
    consts = es.compute_constants(p)
    cf = CoefficientFunctions.from_constants(consts)
    rng = np.random.default_rng(2024)
    failures = []
    for draw in range(10):
        ell = int(rng.integers(1, p.n + 1))
        sig_sq = float(p.sigma[ell - 1] ** 2)
        while True:
            a = float(rng.uniform(0.2, 1.5))
            b = float(rng.uniform(2.0, 50.0))
            # keep every A(alpha_k) positive and stay off the rate thresholds
            if (2 * a * consts.sigma_max_sq / b < 0.9
                    and abs(a * consts.sigma_min_sq - 2.0) > 0.2
                    and abs(a * sig_sq - 0.5) > 0.05):
                break
        gamma = float(rng.uniform(0.55, 0.95))
        for n in CHECKPOINTS:
            for kind in ("harmonic", "polynomial"):
                if kind == "harmonic":
                    sched = es.StepSchedule.harmonic(a, b)
                    rb = es.rate_bounds_harmonic(consts, a, b, sig_sq, n)
                else:
                    sched = es.StepSchedule.polynomial(a, b, gamma)
                    rb = es.rate_bounds_polynomial(consts, a, b, gamma, sig_sq, n)
                a_arr, b_arr, c_arr = recursion_arrays(cf, sched, sig_sq, n)
                alphas = sched.steps(n + 1)
                q = cf.q_of(alphas)
                c_step = cf.c_of(alphas)
                qb_exact = float(np.sum(b_arr[1:] * q[:-1]))
                ac_exact = float(c_step[n] + np.sum(a_arr[1:] * c_step[:-1]))
                for label, exact, bound in (("A0", a_arr[0], rb.a_term),
                                            ("B0", b_arr[0], rb.b_term),
                                            ("qB", qb_exact, rb.qb_term),
                                            ("AC", ac_exact, rb.ac_term)):
                    if exact > bound * (1 + 1e-12):
                        failures.append((draw, kind, n, label, exact, bound))
    assert report("A8 closed-form-dominance", not failures,
                  f"{len(failures)} violations over 10 draws x 3 horizons x 2 families"
                  + (f"; first: {failures[0]}" if failures else ""))


# --- A9: diminishing steps converge on inconsistent data, projections stall --

def test_a9_inconsistent_convergence(inconsistent_problem):
    p = inconsistent_problem
    x0 = es.default_x0(p, 1.0, [555, X0_SEED_TAG])
    sched = es.StepSchedule.harmonic(4.0, 50.0)
    rec = es.Recording("geometric", 16)
    sgd = es.run_trajectory(p, es.SGD, sched, x0, 10**5, [555, 0], (1,), rec)
    kacz = es.run_trajectory(p, es.KACZMARZ, None, x0, 10**5, [555, 0], (1,), rec)
    init = sgd.norm_sq[0]
    sgd_final = sgd.norm_sq[-1]
    kacz_final = kacz.norm_sq[-1]
    converged = sgd_final <= 0.05 * init
    stalled = kacz_final > 0.5 * sgd_final
    assert report("A9 inconsistent-convergence", converged and stalled,
                  f"sgd {sgd_final / init:.4f}x initial, "
                  f"kaczmarz floor {kacz_final:.3f} vs sgd {sgd_final:.5f}")


# --- A10: byte-identical CSV bodies on repeated preset runs ------------------

def test_a10_reproducibility(tmp_path):
    cfg = es.preset("fig2")
    dirs = []
    for tag in ("first", "second"):
        out = tmp_path / tag
        es.run_experiment(cfg, out_dir=str(out))
        dirs.append(out)
    same = all(filecmp.cmp(dirs[0] / name, dirs[1] / name, shallow=False)
               for name in ("ensemble.csv", "theory.csv"))
    assert report("A10 reproducibility", same,
                  "ensemble.csv and theory.csv byte-identical across reruns")
