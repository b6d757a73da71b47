"""SVG figure generation from run artifacts.

Figures are rendered with the SVG backend and written to a caller-chosen
output directory; run directories are never modified.  Given fixed inputs
and a fixed matplotlib version the output is structurally stable (same
elements, labels and curve counts), which is what the golden tests compare.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("SVG")
# deterministic element ids so identical inputs give identical bytes
matplotlib.rcParams["svg.hashsalt"] = "mhdreport"
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .artifacts import ArtifactError, RunArtifacts, load_run

NORM_DECAY_NAME = "norm_decay.svg"
CONDITION_REGION_NAME = "condition_region.svg"


def _ensure_outdir(out_dir) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def plot_norm_decay(run_dir, out_dir) -> Path:
    """Perturbation-norm decay: v_h3^2, c_h3^2, their sum and the eta line."""
    run = run_dir if isinstance(run_dir, RunArtifacts) else load_run(run_dir)
    if run.series is None:
        raise ArtifactError(f"{run.path}: no series.csv to plot")
    t = run.series.column("t")
    v2 = [x * x for x in run.series.column("v_h3")]
    c2 = [x * x for x in run.series.column("c_h3")]
    total = [a + b for a, b in zip(v2, c2)]

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    marker = "o" if len(t) == 1 else None
    ax.plot(t, v2, label="velocity remainder", marker=marker)
    ax.plot(t, c2, label="magnetic remainder", marker=marker)
    ax.plot(t, total, label="total", linewidth=2, marker=marker)
    ax.axhline(run.eta, linestyle="--", color="k", label="eta threshold")
    positive = [x for x in total + [run.eta] if x > 0]
    if positive and max(positive) / max(min(positive), 1e-300) > 50:
        ax.set_yscale("log")
    ax.set_xlabel("t")
    ax.set_ylabel("squared H3 norm")
    ax.set_title("perturbation energy decay")
    ax.legend(loc="best")
    fig.tight_layout()
    out = _ensure_outdir(out_dir) / NORM_DECAY_NAME
    fig.savefig(out, format="svg", metadata={"Date": None})
    plt.close(fig)
    return out


def plot_condition_region(sweep_dir, out_dir) -> Path:
    """Pass/fail shading of the smallness gate over the (eps, delta) plane.

    The gate is independent of delta on the left side, so the boundary is
    the curve delta = lhs(eps); the shading is derived from the per-member
    log-gate values in the sweep summary.
    """
    run = sweep_dir if isinstance(sweep_dir, RunArtifacts) else load_run(sweep_dir)
    if run.sweep_summary is None:
        raise ArtifactError(f"{run.path}: no sweep_summary.json; not a sweep directory")
    rows = sorted(run.sweep_summary["rows"], key=lambda r: r["epsilon"])
    if not rows:
        raise ArtifactError(f"{run.path}: sweep summary has no members")
    eps = [r["epsilon"] for r in rows]
    log_lhs = [r.get("condition_log_lhs", math.log(max(r["condition_lhs"], 1e-300)))
               for r in rows]

    # a log-delta axis wide enough to show the boundary for every member
    lo = min(log_lhs) - 5.0
    hi = max(log_lhs) + 5.0
    n_delta = 60
    log_deltas = [lo + (hi - lo) * i / (n_delta - 1) for i in range(n_delta)]
    grid = [[1.0 if ld >= ll else 0.0 for ll in log_lhs] for ld in log_deltas]

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    mesh = ax.pcolormesh(eps if len(eps) > 1 else [eps[0] - 0.01, eps[0] + 0.01],
                         log_deltas,
                         [row if len(eps) > 1 else [row[0], row[0]] for row in grid],
                         shading="auto", cmap="RdYlGn", vmin=0.0, vmax=1.0)
    ax.plot(eps, log_lhs, "k-o", label="gate boundary log(lhs)")
    ax.set_xlabel("shell half-width eps")
    ax.set_ylabel("log(delta)")
    ax.set_title("smallness-gate region (green = pass)")
    ax.legend(loc="best")
    fig.colorbar(mesh, ax=ax, label="gate satisfied")
    fig.tight_layout()
    out = _ensure_outdir(out_dir) / CONDITION_REGION_NAME
    fig.savefig(out, format="svg", metadata={"Date": None})
    plt.close(fig)
    return out
