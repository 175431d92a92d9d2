"""Config-driven experiment runner: problem, ensemble, theory curves, artifacts.

One experiment writes into its output directory:

    ensemble.csv   across-repetition means and standard errors
    theory.csv     mean predictions and second-moment bounds (emit_theory)
    plot.py        matplotlib overlay script (emit_plot_script)
    manifest.json  config digest, seeds, code version, warnings

CSV bodies are byte-reproducible for a fixed config and seed; only the
manifest carries a timestamp.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import time
from dataclasses import dataclass

import numpy as np

from . import __version__
from .config import ExperimentConfig, config_to_text
from .csvio import write_ensemble, write_theory
from .phase import PhaseReport  # noqa: F401  (re-exported for harness users)
from .problems import build_problem, component, compute_constants
from .schedules import FIXED, HARMONIC, POLYNOMIAL, validate as validate_schedule
from .solvers import (GD, KACZMARZ, SGD, EnsembleDivergenceError, default_x0,
                      run_ensemble)
from .theory import (decay_product, kaczmarz_expected_component,
                     mean_bound_harmonic, mean_bound_polynomial,
                     second_moment_recursion)

X0_SEED_TAG = 0x0D15EA5E  # mixes with base_seed for the initial-iterate draw


@dataclass
class ExperimentResult:
    out_dir: str
    files: dict[str, str]
    summary: object
    warnings: list[str]


def build_from_config(cfg: ExperimentConfig):
    """(problem, constants, x0) for a configuration."""
    p = build_problem(cfg.problem, seed=cfg.problem.seed, noise_level=cfg.noise_level)
    consts = compute_constants(p)
    x0 = default_x0(p, cfg.x0_radius, [cfg.plan.base_seed, X0_SEED_TAG])
    return p, consts, x0


def config_warnings(cfg: ExperimentConfig, consts) -> list[str]:
    if cfg.schedule is None:
        return []
    diags = validate_schedule(cfg.schedule, consts, horizon=cfg.iters)
    return [f"{d.code}: {d.message}" for d in diags]


def _theory_curves(cfg, p, consts, x0, recorded):
    """pred_mean / bound_mean / bound_sq per probe at the recorded iterations."""
    pred = {}
    bmean = {}
    bsq = {}
    sched = cfg.schedule
    for ell in cfg.probes:
        c0 = component(p, x0, ell)
        sig_sq = float(p.sigma[ell - 1] ** 2)
        pr = np.empty(len(recorded))
        bm = np.empty(len(recorded))
        bq = np.empty(len(recorded))
        for j, k in enumerate(recorded):
            k = int(k)
            if cfg.method == KACZMARZ:
                pr[j] = (kaczmarz_expected_component(p, ell, x0, k)
                         if p.consistent else math.nan)
                bm[j] = abs(pr[j])
                bq[j] = math.nan
                continue
            pr[j] = decay_product(sched, sig_sq, k) * c0
            if sched.kind == HARMONIC:
                bm[j] = (abs(c0) if k == 0 else
                         mean_bound_harmonic(sched.a, sched.b, sig_sq, c0, k - 1))
            elif sched.kind == POLYNOMIAL:
                bm[j] = (abs(c0) if k == 0 else
                         mean_bound_polynomial(sched.a, sched.b, sched.gamma, sig_sq, c0, k - 1))
            else:
                bm[j] = abs(pr[j])
            if cfg.method == GD:
                bq[j] = pr[j] ** 2
            else:
                bq[j] = (c0**2 if k == 0 else
                         second_moment_recursion(p, consts, sched, ell, x0, k - 1).bound)
        pred[ell] = pr
        bmean[ell] = bm
        bsq[ell] = bq
    return pred, bmean, bsq


def run_experiment(cfg: ExperimentConfig, out_dir: str | None = None) -> ExperimentResult:
    """Run the configured ensemble and write all artifacts.

    ``out_dir`` overrides cfg.outputs; the EIGENSGD_OUTDIR environment
    variable overrides both.
    """
    out_dir = os.environ.get("EIGENSGD_OUTDIR") or out_dir or cfg.outputs
    os.makedirs(out_dir, exist_ok=True)

    p, consts, x0 = build_from_config(cfg)
    warnings = config_warnings(cfg, consts)

    cfg_text = config_to_text(cfg)
    digest = hashlib.sha256(cfg_text.encode()).hexdigest()[:16]
    manifest = {
        "config": cfg_text,
        "config_digest": digest,
        "problem_digest": p.digest(),
        "base_seed": cfg.plan.base_seed,
        "repetition_seeds": [cfg.plan.seed_for(r) for r in range(cfg.plan.repetitions)],
        "code_version": __version__,
        "warnings": warnings,
        "divergence": None,
        "created": time.strftime("%Y-%m-%dT%H:%M:%S"),
    }
    files = {}

    try:
        summary = run_ensemble(p, cfg.method, cfg.schedule, x0, cfg.iters,
                               cfg.plan, cfg.probes, cfg.recording)
    except EnsembleDivergenceError as exc:
        manifest["divergence"] = [
            {"repetition": r, "seed": s, "iteration": it} for r, s, it in exc.failures]
        _write_manifest(out_dir, manifest)
        raise

    meta = dict(summary.metadata)
    meta["config_digest"] = digest
    summary.metadata = meta

    ens_path = os.path.join(out_dir, "ensemble.csv")
    write_ensemble(ens_path, summary)
    files["ensemble"] = ens_path

    if cfg.emit_theory:
        pred, bmean, bsq = _theory_curves(cfg, p, consts, x0, summary.recorded_iters)
        th_path = os.path.join(out_dir, "theory.csv")
        write_theory(th_path, {"config_digest": digest, "problem": p.digest()},
                     summary.recorded_iters, cfg.probes, pred, bmean, bsq)
        files["theory"] = th_path

    if cfg.emit_plot_script:
        plot_path = os.path.join(out_dir, "plot.py")
        with open(plot_path, "w") as fh:
            fh.write(_plot_script(cfg.probes, cfg.emit_theory))
        files["plot"] = plot_path

    files["manifest"] = _write_manifest(out_dir, manifest)
    return ExperimentResult(out_dir=out_dir, files=files, summary=summary,
                            warnings=warnings)


def _write_manifest(out_dir, manifest):
    path = os.path.join(out_dir, "manifest.json")
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    return path


_PLOT_TEMPLATE = '''\
"""Auto-generated overlay plot: measured |components| vs predictions.

Run from this directory: python plot.py [output.png]
Log-log axes; signed means are plotted as |mean| floored at 1e-16.
"""
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np


def read_csv(path):
    meta, names, rows = {{}}, None, []
    for line in open(path):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if ":" in body:
                k, v = body.split(":", 1)
                meta[k.strip()] = v.strip()
            continue
        if names is None:
            names = line.split(",")
            continue
        rows.append([float(t) for t in line.split(",")])
    data = np.array(rows)
    return meta, {{n: data[:, j] for j, n in enumerate(names)}}


PROBES = {probes}
HAVE_THEORY = {have_theory}
FLOOR = 1e-16

# measured: solid/dash/dashdot with o/+/* markers; predictions: light twins
STYLES = [
    dict(color="tab:blue", ls="-", marker="o", light="lightblue"),
    dict(color="tab:green", ls="--", marker="+", light="lightgreen"),
    dict(color="tab:red", ls="-.", marker="*", light="lightcoral"),
]

meta, ens = read_csv("ensemble.csv")
theory = read_csv("theory.csv")[1] if HAVE_THEORY else None

it = ens["iter"]
pos = it > 0
fig, ax = plt.subplots(figsize=(8, 6))
for j, ell in enumerate(PROBES):
    st = STYLES[j % len(STYLES)]
    y = np.maximum(np.abs(ens[f"comp_{{ell}}"]), FLOOR)
    ax.plot(it[pos], y[pos], color=st["color"], ls=st["ls"], marker=st["marker"],
            markevery=max(len(it) // 24, 1), markersize=4, lw=1.0,
            label=f"measured |comp {{ell}}|")
    if theory is not None:
        yp = np.maximum(np.abs(theory[f"pred_mean_{{ell}}"]), FLOOR)
        ax.plot(it[pos], yp[pos], color=st["light"], ls=st["ls"], lw=2.0,
                label=f"prediction {{ell}}")
ax.plot(it[pos], np.maximum(ens["norm_sq"], FLOOR)[pos], color="gold", ls="-",
        lw=1.5, label="norm_sq")
ax.set_xscale("log")
ax.set_yscale("log")
ax.set_xlabel("iteration")
ax.set_ylabel("magnitude")
ax.legend(fontsize=8)
ax.set_title(meta.get("method", "") + "  " + meta.get("schedule", ""))
out = sys.argv[1] if len(sys.argv) > 1 else "figure.png"
fig.savefig(out, dpi=150, bbox_inches="tight")
print(f"wrote {{out}}")
'''


def _plot_script(probes, have_theory) -> str:
    return _PLOT_TEMPLATE.format(probes=list(probes), have_theory=bool(have_theory))
