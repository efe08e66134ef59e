"""Matplotlib renderings of a finished run.

Both figures avoid any randomized layout so repeated runs write identical
bytes: points are placed by sorted rank, and PNG metadata that would embed
a writer version is suppressed.
"""
from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["render_figures", "render_profit_figure", "render_crosstable_figure"]

_PNG_META = {"Software": None}


def render_profit_figure(bundle, path: str) -> None:
    """Per-token net profit: box per cohort with rank-jittered points."""
    groups: dict[str, list[int]] = {}
    for r in bundle.records:
        groups.setdefault(r.token_label, []).append(r.net_profit)
    labels = sorted(groups)
    data = [sorted(groups[lb]) for lb in labels]

    fig, ax = plt.subplots(figsize=(8.0, 4.5), dpi=120)
    ax.boxplot(data, tick_labels=labels, showfliers=False)
    for i, values in enumerate(data, start=1):
        n = len(values)
        offsets = (np.arange(n) - (n - 1) / 2) / max(n, 1) * 0.5
        ax.plot(i + offsets, values, linestyle="", marker=".", markersize=3, alpha=0.6)
    ax.set_xlabel("token condition")
    ax.set_ylabel("net session profit (ticks)")
    ax.set_title("Net profit by token condition")
    fig.tight_layout()
    fig.savefig(path, metadata=_PNG_META)
    plt.close(fig)


def render_crosstable_figure(bundle, path: str) -> None:
    """Actual-versus-predicted counts as an annotated heat map."""
    table = bundle.classification.table
    counts = table.counts
    fig, ax = plt.subplots(figsize=(6.0, 5.2), dpi=120)
    im = ax.imshow(counts, cmap="Blues")
    ax.set_xticks(range(len(table.classes)), table.classes)
    ax.set_yticks(range(len(table.classes)), table.classes)
    ax.set_xlabel("predicted")
    ax.set_ylabel("actual")
    ax.set_title("Token classification cross-table")
    threshold = counts.max() / 2 if counts.max() else 1
    for i in range(counts.shape[0]):
        for j in range(counts.shape[1]):
            color = "white" if counts[i, j] > threshold else "black"
            ax.text(j, i, str(int(counts[i, j])), ha="center", va="center", color=color)
    fig.colorbar(im, ax=ax, shrink=0.8)
    fig.tight_layout()
    fig.savefig(path, metadata=_PNG_META)
    plt.close(fig)


def render_figures(bundle, out_dir: str) -> list[str]:
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    profit_path = os.path.join(out_dir, "net_profit_by_token.png")
    render_profit_figure(bundle, profit_path)
    paths.append(profit_path)
    table_path = os.path.join(out_dir, "crosstable.png")
    render_crosstable_figure(bundle, table_path)
    paths.append(table_path)
    return paths
