"""Figures for sweep tables."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

AXIS_LABELS = {
    "U": "Number of users $U$",
    "M": "Number of messages $M$",
    "P": "Average erasure probability $P$",
}
METRIC_LABELS = {
    "mean_delivery": ("Average delivery time", "ci_delivery"),
    "mean_completion": ("Average completion time", "ci_completion"),
}
MARKERS = "osD^v<>ph"

STYLE = {
    "font.size": 10,
    "axes.labelsize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 9,
    "ytick.labelsize": 9,
    "lines.linewidth": 1.2,
    "lines.markersize": 4,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "svg.hashsalt": "idnc",
}


def emit_svg_plot(rows: Sequence[dict], path: str | Path, metric: str = "mean_delivery") -> Path:
    """Line plot with 95% error bars, one series per policy."""
    if not rows:
        raise ValueError("nothing to plot: the sweep table is empty")
    label, ci_key = METRIC_LABELS[metric]
    axis = rows[0]["axis"]
    policies = list(dict.fromkeys(r["policy"] for r in rows))
    path = Path(path)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.8, 3.4))
        for k, policy in enumerate(policies):
            pts = sorted((r["axis_value"], r[metric], r[ci_key]) for r in rows if r["policy"] == policy)
            xs, ys, es = zip(*pts)
            ax.errorbar(xs, ys, yerr=es, marker=MARKERS[k % len(MARKERS)], capsize=2, label=policy)
        ax.set_xlabel(AXIS_LABELS.get(axis, axis))
        ax.set_ylabel(label)
        ax.legend(frameon=False)
        fig.tight_layout()
        try:
            fig.savefig(path, format="svg", metadata={"Date": None})
        except OSError as exc:
            raise OSError(f"cannot write plot to {path}: {exc}") from exc
        finally:
            plt.close(fig)
    return path
