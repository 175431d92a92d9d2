"""Eigencomponent convergence of SGD, GD, and randomized Kaczmarz on
synthetic least-squares problems, with exact mean predictions and
second-moment bound recursions to check the measured behavior against."""

__version__ = "0.1.0"

from .problems import (ProblemConstants, SpectrumSpec, SyntheticProblem,
                       build_problem, component, compute_constants,
                       random_orthonormal)
from .schedules import ScheduleDiagnostic, StepSchedule, validate
from .solvers import (GD, KACZMARZ, SGD, DivergenceError,
                      EnsembleDivergenceError, EnsembleSummary, Recording,
                      RepetitionPlan, Trace, default_x0, gd_step,
                      kaczmarz_step, run_ensemble, run_trajectory, sgd_step)
from .theory import (CoefficientFunctions, FixedMomentBound,
                     MomentCoefficients, RateBounds, UnsupportedRegimeError,
                     decay_product, expected_component,
                     kaczmarz_expected_component, mean_bound_harmonic,
                     mean_bound_polynomial, rate_bounds_harmonic,
                     rate_bounds_polynomial, recursion_arrays,
                     second_moment_bound_fixed, second_moment_recursion)
from .phase import PhaseReport, detect_phase_transition
from .config import (ConfigError, ExperimentConfig, config_to_text,
                     parse_config, with_overrides)
from .presets import PRESET_NAMES, preset
from .experiment import ExperimentResult, run_experiment

__all__ = [name for name in dir() if not name.startswith("_")]
