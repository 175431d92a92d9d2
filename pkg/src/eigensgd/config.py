"""Flat key/value experiment configuration with dotted sections.

The format is line-oriented text: 'key = value', '#' comments, blank lines
ignored.  Dotted prefixes group related keys (problem.*, schedule.*, plan.*).
Configs round-trip losslessly through ``config_to_text``/``parse_config``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .problems import SpectrumSpec
from .schedules import FIXED, HARMONIC, POLYNOMIAL, StepSchedule
from .solvers import GD, KACZMARZ, METHODS, SGD, Recording, RepetitionPlan


class ConfigError(ValueError):
    """Malformed or invalid experiment configuration."""


@dataclass(frozen=True)
class ExperimentConfig:
    problem: SpectrumSpec
    noise_level: float | None  # None means consistent
    method: str
    schedule: StepSchedule | None
    x0_radius: float
    iters: int
    probes: tuple[int, ...]
    plan: RepetitionPlan
    recording: Recording
    outputs: str = "out"
    emit_theory: bool = True
    emit_plot_script: bool = True

    @property
    def consistent(self) -> bool:
        return self.noise_level is None

    def __post_init__(self):
        if len(self.probes) == 0:
            raise ConfigError("probes: must be nonempty")
        for ell in self.probes:
            if not 1 <= ell <= self.problem.cols:
                raise ConfigError(f"probes: index {ell} outside 1..{self.problem.cols}")
        if self.iters < 1:
            raise ConfigError("iters: must be positive")
        if self.x0_radius <= 0:
            raise ConfigError("x0_radius: must be positive")
        if self.method not in METHODS:
            raise ConfigError(f"method: unknown method {self.method!r}")
        if self.method in (GD, SGD) and self.schedule is None:
            raise ConfigError(f"method: {self.method} requires a schedule")


_KNOWN_KEYS = {
    "problem.rows", "problem.cols", "problem.sigma_min", "problem.sigma_max",
    "problem.spacing", "problem.seed", "problem.consistency", "problem.noise_level",
    "method",
    "schedule.kind", "schedule.alpha", "schedule.a", "schedule.b", "schedule.gamma",
    "x0_radius", "iters", "probes",
    "plan.repetitions", "plan.base_seed",
    "recording", "outputs", "emit_theory", "emit_plot_script",
}


def _get(kv, key, cast, default=_KNOWN_KEYS):
    if key not in kv:
        if default is _KNOWN_KEYS:
            raise ConfigError(f"{key}: missing required key")
        return default
    raw = kv.pop(key)
    try:
        return cast(raw)
    except (ValueError, TypeError):
        raise ConfigError(f"{key}: cannot parse {raw!r}") from None


def _bool(raw):
    low = raw.lower()
    if low in ("true", "yes", "1"):
        return True
    if low in ("false", "no", "0"):
        return False
    raise ValueError(raw)


def _probes(raw):
    return tuple(int(tok) for tok in raw.split(",") if tok.strip())


def _recording(raw):
    if raw == "all":
        return Recording("all")
    if raw.startswith("geometric"):
        ppd = 64
        if ":" in raw:
            ppd = int(raw.split(":", 1)[1])
        return Recording("geometric", ppd)
    raise ValueError(raw)


def parse_config(text: str) -> ExperimentConfig:
    """Parse a config document; errors name the offending key path."""
    kv = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {body!r}")
        key, val = body.split("=", 1)
        key = key.strip()
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"{key}: unknown key")
        if key in kv:
            raise ConfigError(f"{key}: duplicate key")
        kv[key] = val.strip()

    try:
        spec = SpectrumSpec(
            rows=_get(kv, "problem.rows", int),
            cols=_get(kv, "problem.cols", int),
            sigma_min=_get(kv, "problem.sigma_min", float),
            sigma_max=_get(kv, "problem.sigma_max", float),
            spacing=_get(kv, "problem.spacing", str, "linear"),
            seed=_get(kv, "problem.seed", int),
        )
    except ValueError as exc:
        raise ConfigError(f"problem: {exc}") from None

    consistency = _get(kv, "problem.consistency", str, "consistent")
    if consistency == "consistent":
        noise_level = None
        if "problem.noise_level" in kv:
            raise ConfigError("problem.noise_level: only valid for inconsistent problems")
    elif consistency == "inconsistent":
        noise_level = _get(kv, "problem.noise_level", float)
        if noise_level <= 0:
            raise ConfigError("problem.noise_level: must be positive")
    else:
        raise ConfigError(f"problem.consistency: unknown value {consistency!r}")

    method = _get(kv, "method", str)
    if method not in METHODS:
        raise ConfigError(f"method: unknown method {method!r} (expected gd|sgd|kaczmarz)")

    kind = _get(kv, "schedule.kind", str, None)
    schedule = None
    if method == KACZMARZ:
        if kind is not None:
            raise ConfigError("schedule.kind: kaczmarz takes the exact projection step; "
                              "remove the schedule section")
    else:
        if kind is None:
            raise ConfigError("schedule.kind: missing required key")
        try:
            if kind == FIXED:
                schedule = StepSchedule.fixed(_get(kv, "schedule.alpha", float))
            elif kind == HARMONIC:
                schedule = StepSchedule.harmonic(_get(kv, "schedule.a", float),
                                                 _get(kv, "schedule.b", float))
            elif kind == POLYNOMIAL:
                schedule = StepSchedule.polynomial(_get(kv, "schedule.a", float),
                                                   _get(kv, "schedule.b", float),
                                                   _get(kv, "schedule.gamma", float))
            else:
                raise ConfigError(f"schedule.kind: unknown kind {kind!r}")
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"schedule: {exc}") from None

    try:
        cfg = ExperimentConfig(
            problem=spec,
            noise_level=noise_level,
            method=method,
            schedule=schedule,
            x0_radius=_get(kv, "x0_radius", float, 1.0),
            iters=_get(kv, "iters", int),
            probes=_get(kv, "probes", _probes),
            plan=RepetitionPlan(repetitions=_get(kv, "plan.repetitions", int, 1),
                                base_seed=_get(kv, "plan.base_seed", int, 0)),
            recording=_get(kv, "recording", _recording, Recording("geometric", 64)),
            outputs=_get(kv, "outputs", str, "out"),
            emit_theory=_get(kv, "emit_theory", _bool, True),
            emit_plot_script=_get(kv, "emit_plot_script", _bool, True),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from None

    if kv:
        # _get pops as it goes; anything left was supplied but unused
        key = sorted(kv)[0]
        raise ConfigError(f"{key}: not applicable to this configuration")
    return cfg


def config_to_text(cfg: ExperimentConfig) -> str:
    """Serialize a config so that parse_config round-trips it exactly."""
    lines = [
        f"problem.rows = {cfg.problem.rows}",
        f"problem.cols = {cfg.problem.cols}",
        f"problem.sigma_min = {cfg.problem.sigma_min!r}",
        f"problem.sigma_max = {cfg.problem.sigma_max!r}",
        f"problem.spacing = {cfg.problem.spacing}",
        f"problem.seed = {cfg.problem.seed}",
        f"problem.consistency = {'consistent' if cfg.consistent else 'inconsistent'}",
    ]
    if not cfg.consistent:
        lines.append(f"problem.noise_level = {cfg.noise_level!r}")
    lines.append(f"method = {cfg.method}")
    s = cfg.schedule
    if s is not None:
        lines.append(f"schedule.kind = {s.kind}")
        if s.kind == FIXED:
            lines.append(f"schedule.alpha = {s.alpha!r}")
        else:
            lines.append(f"schedule.a = {s.a!r}")
            lines.append(f"schedule.b = {s.b!r}")
            if s.kind == POLYNOMIAL:
                lines.append(f"schedule.gamma = {s.gamma!r}")
    lines += [
        f"x0_radius = {cfg.x0_radius!r}",
        f"iters = {cfg.iters}",
        f"probes = {','.join(str(ell) for ell in cfg.probes)}",
        f"plan.repetitions = {cfg.plan.repetitions}",
        f"plan.base_seed = {cfg.plan.base_seed}",
        f"recording = {cfg.recording.describe()}",
        f"outputs = {cfg.outputs}",
        f"emit_theory = {str(cfg.emit_theory).lower()}",
        f"emit_plot_script = {str(cfg.emit_plot_script).lower()}",
    ]
    return "\n".join(lines) + "\n"


def with_overrides(cfg: ExperimentConfig, **kwargs) -> ExperimentConfig:
    """Functional update helper (dataclasses.replace with config validation)."""
    return replace(cfg, **kwargs)
