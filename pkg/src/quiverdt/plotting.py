"""Figure rendering for table reports.

Tables over one-vertex quivers become stem plots against the class size;
two-vertex tables become annotated heatmaps over the box; anything bigger
falls back to a scatter of value against total dimension.  Exact values
are annotated as strings, colors use float approximations only.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .quiverfile import format_rational  # noqa: E402


def render_table_figure(entries, box_values, title: str, path,
                        value_label: str = "value") -> Path:
    """Render a class -> rational table to an image file and return the path.

    ``entries`` maps DimVector-like objects (with ``.values``) to Fractions.
    """
    path = Path(path)
    rank = len(box_values)
    if rank == 1:
        fig = _figure_1d(entries, box_values, title, value_label)
    elif rank == 2:
        fig = _figure_2d(entries, box_values, title, value_label)
    else:
        fig = _figure_scatter(entries, title, value_label)
    fig.savefig(path, bbox_inches="tight", dpi=150)
    plt.close(fig)
    return path


def _figure_1d(entries, box_values, title, value_label):
    fig, ax = plt.subplots(figsize=(6, 3.5))
    xs, ys, labels = [], [], []
    for d, v in sorted(entries.items(), key=lambda kv: kv[0].values):
        xs.append(d.values[0])
        ys.append(float(v))
        labels.append(format_rational(v))
    markerline, stemlines, _ = ax.stem(xs, ys)
    plt.setp(markerline, markersize=5)
    for x, y, lab in zip(xs, ys, labels):
        ax.annotate(lab, (x, y), textcoords="offset points", xytext=(0, 6),
                    ha="center", fontsize=8)
    ax.set_xlabel("class")
    ax.set_ylabel(value_label)
    ax.set_title(title)
    ax.spines["right"].set_visible(False)
    ax.spines["top"].set_visible(False)
    return fig


def _figure_2d(entries, box_values, title, value_label):
    b0, b1 = box_values
    grid = [[float("nan")] * (b0 + 1) for _ in range(b1 + 1)]
    for d, v in entries.items():
        d0, d1 = d.values
        grid[d1][d0] = float(v)
    fig, ax = plt.subplots(figsize=(1.1 * (b0 + 1) + 2, 1.0 * (b1 + 1) + 1.5))
    im = ax.imshow(grid, origin="lower", cmap="RdBu",
                   vmin=-max(1.0, _absmax(entries)), vmax=max(1.0, _absmax(entries)))
    for d, v in entries.items():
        d0, d1 = d.values
        ax.text(d0, d1, format_rational(v), ha="center", va="center", fontsize=8)
    ax.set_xticks(range(b0 + 1))
    ax.set_yticks(range(b1 + 1))
    ax.set_xlabel("d0")
    ax.set_ylabel("d1")
    ax.set_title(title)
    fig.colorbar(im, ax=ax, label=value_label, shrink=0.8)
    return fig


def _figure_scatter(entries, title, value_label):
    fig, ax = plt.subplots(figsize=(6, 3.5))
    xs = [d.total() for d in entries]
    ys = [float(v) for v in entries.values()]
    ax.scatter(xs, ys, s=14)
    ax.set_xlabel("total dimension")
    ax.set_ylabel(value_label)
    ax.set_title(title)
    return fig


def _absmax(entries) -> float:
    vals = [abs(float(v)) for v in entries.values()]
    return max(vals) if vals else 1.0
