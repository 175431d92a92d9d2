"""SGD eigencomponents follow an exact product law in expectation.

On a least-squares problem min_x 0.5*||Ax - b||^2 built with a known SVD,
the expected error component along the ell-th right-singular direction after
n+1 SGD steps is exactly

    prod_{k=0..n} (1 - alpha_k * sigma_ell^2) * <x_0 - x_star, v_ell>.

This script runs a 500-repetition SGD ensemble on a small problem with a
harmonic step schedule and prints the measured ensemble mean next to that
product, direction by direction.
"""

import numpy as np

import eigensgd as es

spec = es.SpectrumSpec(rows=30, cols=20, sigma_min=0.1, sigma_max=1.0,
                       spacing="linear", seed=20241)
problem = es.build_problem(spec, seed=spec.seed)
schedule = es.StepSchedule.harmonic(0.5, 20.0)
x0 = es.default_x0(problem, radius=1.0, seed=[1234, 0])

plan = es.RepetitionPlan(repetitions=500, base_seed=1234)
summary = es.run_ensemble(problem, es.SGD, schedule, x0, iters=2000,
                          plan=plan, probes=(1, 10, 20),
                          recording=es.Recording("geometric", 4))

print(f"problem: {problem.m}x{problem.n}, spectrum [{spec.sigma_min}, {spec.sigma_max}]")
print(f"schedule: {schedule.describe()}, {plan.repetitions} repetitions\n")
print(f"{'iter':>6} {'ell':>4} {'measured mean':>15} {'prediction':>15} {'dev/se':>8}")
for ell in summary.probes:
    for j, k in enumerate(summary.recorded_iters):
        if k not in (10, 100, 1000, 2000):
            continue
        pred = es.expected_component(problem, schedule, ell, x0, int(k) - 1)
        mean = summary.mean_components[ell][j]
        se = summary.se_components[ell][j]
        print(f"{int(k):>6} {ell:>4} {mean:>15.6e} {pred:>15.6e} {abs(mean - pred) / se:>8.2f}")

print("\nThe dev/se column is the deviation in standard errors: the measured")
print("means scatter around the product prediction at the Monte Carlo noise")
print("level, with no systematic drift at any horizon or direction.")
