"""Figure rendering and tidy plot-data export for run artifacts.

Figures are written next to the delimited outputs with fixed PNG metadata
so reruns of the same scenario stay byte-identical.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .behaviors import BehaviorVerdict
from .core import TrajectoryLog, fmt_float
from .markers import MarkerSeries

_PNG_METADATA = {"Software": "swarmscope"}


def render_marker_figure(series: MarkerSeries, verdicts: Sequence[BehaviorVerdict],
                         path: str | Path) -> None:
    """Marker magnitudes over time plus a raster of the behavior series."""
    n_rows = 2 if verdicts else 1
    fig, axes = plt.subplots(
        n_rows, 1, sharex=True, figsize=(8.0, 5.5),
        gridspec_kw={"height_ratios": [3, 1] if verdicts else [1]})
    ax0 = axes[0] if verdicts else axes
    with np.errstate(invalid="ignore"):
        ax0.semilogy(series.times, series.y3, label="Y3 circliness", lw=1.2)
        ax0.semilogy(series.times, series.y4, label="Y4 compactness", lw=1.0)
        ax0.semilogy(series.times, np.abs(series.y7), label="|Y7| uniformity", lw=1.0)
    ax0.set_ylabel("marker value (log)")
    ax0.grid(True, which="both", alpha=0.3)
    ax0.legend(loc="upper right", fontsize=8)
    if verdicts:
        ax1 = axes[1]
        for i, v in enumerate(verdicts):
            ax1.step(series.times, v.series.astype(int) * 0.8 + i, where="post", lw=1.0)
        ax1.set_yticks([i + 0.4 for i in range(len(verdicts))],
                       [v.behavior_id for v in verdicts], fontsize=8)
        ax1.set_ylim(-0.2, len(verdicts) + 0.2)
        ax1.grid(True, axis="x", alpha=0.3)
        ax1.set_xlabel("time [s]")
    else:
        ax0.set_xlabel("time [s]")
    fig.tight_layout()
    fig.savefig(path, dpi=110, metadata=_PNG_METADATA)
    plt.close(fig)


def render_trajectory_figure(log: TrajectoryLog, path: str | Path) -> None:
    """Agent paths with start (hollow) and final (filled) positions."""
    fig, ax = plt.subplots(figsize=(6.0, 6.0))
    for i in range(log.n_agents):
        ax.plot(log.positions[:, i, 0], log.positions[:, i, 1], lw=0.6, alpha=0.7)
    ax.scatter(log.positions[0, :, 0], log.positions[0, :, 1],
               facecolors="none", edgecolors="k", s=25, label="start")
    ax.scatter(log.positions[-1, :, 0], log.positions[-1, :, 1],
               c="k", s=25, label="final")
    ax.set_aspect("equal", adjustable="datalim")
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    fig.tight_layout()
    fig.savefig(path, dpi=110, metadata=_PNG_METADATA)
    plt.close(fig)


def write_plot_data_csv(series: MarkerSeries, verdicts: Sequence[BehaviorVerdict],
                        path: str | Path) -> None:
    """Tidy long-format `t,series,value` table for external plotting."""
    names = ["Y1", "Y2x", "Y2y", "Y3", "Y4", "Y5", "Y6", "Y7"]
    lines = ["t,series,value"]
    for k in range(series.n_frames):
        t = fmt_float(series.times[k])
        for name in names:
            lines.append(f"{t},{name},{fmt_float(series.column(name)[k])}")
        for v in verdicts:
            lines.append(f"{t},{v.behavior_id},{fmt_float(float(v.series[k]))}")
    Path(path).write_text("\n".join(lines) + "\n")
