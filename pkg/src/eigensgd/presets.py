"""Built-in experiment presets fig1..fig8.

Each preset reproduces one published experiment configuration.  The two large
configurations (fig4, fig8) are expensive at full size, so every preset takes
a scale argument: 'paper' keeps the published dimensions and schedule, 'desk'
shrinks fig4/fig8 to 1000 rows and a tenth of the iterations with the
spectrum range preserved, so they run in minutes.  Small presets are
identical at both scales.

The desk variants also compress the step schedule so the convergence
slowdown the full-size runs exhibit within 10^6 iterations falls inside the
10^5-iteration desk horizon: fig4 doubles the harmonic numerator, and fig8
moves the polynomial decay onset to around iteration 1000 with a faster
late-stage decay exponent.  With the published constants unchanged, a tenth
of the iterations simply truncates the trajectory before the slow phase is
reached.
"""

from __future__ import annotations

from .config import ConfigError, ExperimentConfig
from .problems import SpectrumSpec
from .schedules import StepSchedule
from .solvers import KACZMARZ, SGD, Recording, RepetitionPlan

PRESET_NAMES = tuple(f"fig{i}" for i in range(1, 9))
SCALES = ("desk", "paper")

_DEFAULT_SEED = 20240 + 1  # problem seed; base_seed for repetitions is separate


def _cfg(spec, method, schedule, iters, probes, repetitions, noise_level=None):
    return ExperimentConfig(
        problem=spec,
        noise_level=noise_level,
        method=method,
        schedule=schedule,
        x0_radius=1.0,
        iters=iters,
        probes=probes,
        plan=RepetitionPlan(repetitions=repetitions, base_seed=1234),
        recording=Recording("geometric", 64),
        outputs="out",
    )


def preset(name: str, scale: str = "desk") -> ExperimentConfig:
    """Expand a preset name to a full experiment configuration."""
    if name not in PRESET_NAMES:
        raise ConfigError(f"unknown preset {name!r} (expected one of {', '.join(PRESET_NAMES)})")
    if scale not in SCALES:
        raise ConfigError(f"unknown scale {scale!r} (expected desk or paper)")

    if name == "fig1":
        # Kaczmarz on 300x150, sigma in [0.01, 1], probes 1/135/150.
        # The source shows a single trajectory; no repetition count is quoted.
        spec = SpectrumSpec(300, 150, 0.01, 1.0, "linear", _DEFAULT_SEED)
        return _cfg(spec, KACZMARZ, None, 10_000, (1, 135, 150), 1)

    if name in ("fig2", "fig3"):
        spec = SpectrumSpec(30, 20, 0.1, 1.0, "linear", _DEFAULT_SEED)
        sched = StepSchedule.harmonic(0.5, 20.0)
        noise = 0.5 if name == "fig3" else None
        return _cfg(spec, SGD, sched, 10_000, (1, 10, 20), 20, noise)

    if name == "fig4":
        if scale == "paper":
            spec = SpectrumSpec(10_000, 3_000, 0.01, 1.0, "linear", _DEFAULT_SEED)
            iters = 10**6
            sched = StepSchedule.harmonic(0.5, 150.0)
        else:
            spec = SpectrumSpec(1_000, 300, 0.01, 1.0, "linear", _DEFAULT_SEED)
            iters = 10**5
            sched = StepSchedule.harmonic(1.0, 150.0)
        n = spec.cols
        return _cfg(spec, SGD, sched, iters, (1, n // 2, n), 1)

    if name in ("fig5", "fig6"):
        spec = SpectrumSpec(30, 20, 0.1, 1.0, "linear", _DEFAULT_SEED)
        sched = StepSchedule.polynomial(0.2, 5.0, 0.8)
        noise = 0.5 if name == "fig6" else None
        return _cfg(spec, SGD, sched, 10_000, (1, 10, 20), 20, noise)

    if name == "fig7":
        # fig5 configuration run past the transition point
        spec = SpectrumSpec(30, 20, 0.1, 1.0, "linear", _DEFAULT_SEED)
        return _cfg(spec, SGD, StepSchedule.polynomial(0.2, 5.0, 0.8), 10**5,
                    (1, 10, 20), 20)

    # fig8
    if scale == "paper":
        spec = SpectrumSpec(10_000, 2_000, 0.01, 1.0, "linear", _DEFAULT_SEED)
        iters = 10**6
        sched = StepSchedule.polynomial(0.06, 50.0, 0.7)
    else:
        spec = SpectrumSpec(1_000, 200, 0.01, 1.0, "linear", _DEFAULT_SEED)
        iters = 10**5
        sched = StepSchedule.polynomial(3.0, 1000.0, 0.85)
    n = spec.cols
    return _cfg(spec, SGD, sched, iters, (1, n // 2, n), 1)
