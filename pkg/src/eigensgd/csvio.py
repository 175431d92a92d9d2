"""CSV serialization for traces, ensemble summaries, and theory curves.

All files are comma-separated with '#'-prefixed header comments.  The first
comment lines carry metadata as 'key: value'; a 'schema:' comment declares
the column names, which downstream consumers (plot scripts, the phase
subcommand) read instead of assuming positions.  Floats are written with 17
significant digits so the bodies are byte-reproducible and lossless.
"""

from __future__ import annotations

import numpy as np

from .solvers import EnsembleSummary, Trace

FLOAT_FMT = "%.17g"


def _write(path, meta: dict, columns: dict):
    names = list(columns)
    lines = []
    for key, val in meta.items():
        lines.append(f"# {key}: {val}")
    lines.append(f"# schema: {','.join(names)}")
    lines.append(",".join(names))
    cols = [np.asarray(columns[name]) for name in names]
    n = len(cols[0])
    for i in range(n):
        row = []
        for col in cols:
            v = col[i]
            if np.issubdtype(col.dtype, np.integer):
                row.append(str(int(v)))
            else:
                row.append(FLOAT_FMT % v)
        lines.append(",".join(row))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def write_trace(path, trace: Trace):
    columns = {"iter": trace.recorded_iters}
    for ell in trace.probes:
        columns[f"comp_{ell}"] = trace.components[ell]
    for ell in trace.probes:
        columns[f"comp_sq_{ell}"] = trace.components[ell] ** 2
    columns["norm_sq"] = trace.norm_sq
    _write(path, trace.metadata, columns)


def write_ensemble(path, summary: EnsembleSummary):
    columns = {"iter": summary.recorded_iters}
    for ell in summary.probes:
        columns[f"comp_{ell}"] = summary.mean_components[ell]
        columns[f"se_comp_{ell}"] = summary.se_components[ell]
    for ell in summary.probes:
        columns[f"comp_sq_{ell}"] = summary.mean_components_sq[ell]
        columns[f"se_comp_sq_{ell}"] = summary.se_components_sq[ell]
    columns["norm_sq"] = summary.mean_norm_sq
    columns["se_norm_sq"] = summary.se_norm_sq
    _write(path, summary.metadata, columns)


def write_theory(path, meta: dict, recorded_iters, probes, pred_mean, bound_mean, bound_sq):
    """Theory curves in the same schema family as traces.

    pred_mean/bound_mean/bound_sq map probe index -> array over recorded_iters.
    """
    columns = {"iter": np.asarray(recorded_iters)}
    for ell in probes:
        columns[f"pred_mean_{ell}"] = pred_mean[ell]
    for ell in probes:
        columns[f"bound_mean_{ell}"] = bound_mean[ell]
    for ell in probes:
        columns[f"bound_sq_{ell}"] = bound_sq[ell]
    _write(path, meta, columns)


def read_csv(path):
    """Read one of our CSV files; returns (meta, columns) with float columns."""
    meta = {}
    names = None
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if ":" in body:
                    key, val = body.split(":", 1)
                    meta[key.strip()] = val.strip()
                continue
            if names is None:
                names = line.split(",")
                continue
            rows.append([float(tok) for tok in line.split(",")])
    if names is None:
        raise ValueError(f"{path}: no header row found")
    data = np.array(rows) if rows else np.empty((0, len(names)))
    return meta, {name: data[:, j] for j, name in enumerate(names)}
