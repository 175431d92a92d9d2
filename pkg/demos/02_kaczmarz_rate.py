"""Randomized Kaczmarz decays each singular direction at its own rate.

With rows sampled proportionally to their squared norms, the expected error
component along direction ell shrinks by the factor (1 - sigma_ell^2 / ||A||_F^2)
per iteration.  Directions with large singular values die quickly; the
smallest direction dominates the error after an initial phase.

This script runs one Kaczmarz trajectory on a 300x150 consistent problem and
compares the measured top, near-bottom, and bottom components against their
per-direction rates.
"""

import numpy as np

import eigensgd as es

cfg = es.preset("fig1")
problem = es.build_problem(cfg.problem, seed=cfg.problem.seed)
x0 = es.default_x0(problem, radius=1.0, seed=[cfg.plan.base_seed, 0])

trace = es.run_trajectory(problem, es.KACZMARZ, None, x0, iters=10_000,
                          seed=[cfg.plan.base_seed, 0], probes=cfg.probes,
                          recording=es.Recording("geometric", 4))

frob_sq = float(np.sum(problem.sigma**2))
print(f"problem: {problem.m}x{problem.n}, ||A||_F^2 = {frob_sq:.2f}")
for ell in cfg.probes:
    rate = 1.0 - problem.sigma[ell - 1] ** 2 / frob_sq
    print(f"  direction {ell}: per-step mean factor {rate:.6f}")
print()

print(f"{'iter':>6}" + "".join(f" {'|comp_' + str(ell) + '|':>12} {'rate^k':>12}"
                               for ell in cfg.probes))
for j, k in enumerate(trace.recorded_iters):
    if k not in (0, 10, 100, 1000, 10_000):
        continue
    row = f"{int(k):>6}"
    for ell in cfg.probes:
        pred = es.kaczmarz_expected_component(problem, ell, x0, int(k))
        row += f" {abs(trace.components[ell][j]):>12.3e} {abs(pred):>12.3e}"
    print(row)

print("\nA single trajectory is noisy around the mean prediction, but the")
print("separation of time scales is clear: the top direction collapses within")
print("tens of steps while the bottom one is barely moving at k = 10^4.")
