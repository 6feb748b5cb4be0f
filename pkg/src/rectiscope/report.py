"""Figure rendering for the report path.

Renders the multiscale tables (flatness, Jones partial sums, density
ratios, curvature profiles) to PNG files next to the delimited output.
Rendering is deterministic: fixed style, fixed dpi, and stripped PNG
metadata so identical runs produce identical bytes.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

_DPI = 110
_SAVEKW = {"dpi": _DPI, "metadata": {"Software": None}}
_MAX_LEGEND = 10


def _style(ax, xlabel: str, ylabel: str, title: str) -> None:
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)


def profile_figure(
    path: Path,
    radii,
    series: dict[int, "list[float]"],
    ylabel: str,
    title: str,
    logy: bool = True,
) -> None:
    """One line per center over a descending radius ladder, log-log axes.

    Nonpositive values cannot sit on a log axis and are dropped per line;
    an all-zero profile renders as an annotated empty frame.
    """
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    drew = False
    for center, values in series.items():
        xs = [r for r, v in zip(radii, values) if not logy or v > 0.0]
        ys = [v for v in values if not logy or v > 0.0]
        if not xs:
            continue
        label = f"center {center}" if len(series) <= _MAX_LEGEND else None
        ax.plot(xs, ys, marker="o", markersize=2.5, linewidth=1.0, label=label)
        drew = True
    ax.set_xscale("log")
    if logy and drew:
        ax.set_yscale("log")
    if not drew:
        ax.text(0.5, 0.5, "all values are zero", ha="center", va="center",
                transform=ax.transAxes)
    _style(ax, "radius", ylabel, title)
    if len(series) <= _MAX_LEGEND and drew:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, **_SAVEKW)
    plt.close(fig)
