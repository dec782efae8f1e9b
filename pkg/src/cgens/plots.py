"""Figure rendering for the reporting commands.

Every report path writes its CSV first; these helpers render a matching
matplotlib figure next to it.  All figures go through the Agg backend so the
CLI works headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def convergence_figure(curves: dict[str, dict[str, list[float]]], path) -> None:
    """Training/test error versus iteration for each named method.

    curves: {method: {"train": [...], "test": [...]}}; the test series is
    optional per method.
    """
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for name, series in curves.items():
        train = series.get("train")
        if train:
            ax.plot(range(1, len(train) + 1), train, label=f"{name} train")
        test = series.get("test")
        if test:
            ax.plot(range(1, len(test) + 1), test, linestyle="--", label=f"{name} test")
    ax.set_xlabel("iterations")
    ax.set_ylabel("error rate")
    ax.set_ylim(bottom=0.0)
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def boundary_figure(grid_x, grid_y, margins, train_X, train_labels, path) -> None:
    """Decision function heatmap with the zero contour and the training points."""
    fig, ax = plt.subplots(figsize=(5.0, 4.5))
    Z = np.asarray(margins)
    mesh = ax.pcolormesh(grid_x, grid_y, Z, shading="auto", cmap="RdBu_r",
                         vmin=-np.max(np.abs(Z)), vmax=np.max(np.abs(Z)))
    ax.contour(grid_x, grid_y, Z, levels=[0.0], colors="k", linewidths=1.0)
    pos = train_labels == 1
    ax.scatter(train_X[pos, 0], train_X[pos, 1], s=8, c="tab:blue", label="class 1")
    ax.scatter(train_X[~pos, 0], train_X[~pos, 1], s=8, c="tab:red", label="class 2")
    fig.colorbar(mesh, ax=ax, label="margin")
    ax.set_xlabel("x1")
    ax.set_ylabel("x2")
    ax.legend(loc="upper right")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def frequency_figure(counts: np.ndarray, path, feature_names=None) -> None:
    """Bar chart of how often each feature was selected as a stump."""
    counts = np.asarray(counts)
    fig, ax = plt.subplots(figsize=(max(6.0, 0.12 * len(counts)), 3.5))
    ax.bar(np.arange(len(counts)), counts, width=0.8)
    ax.set_xlabel("feature index")
    ax.set_ylabel("selection count")
    if feature_names is not None and len(feature_names) <= 40:
        ax.set_xticks(np.arange(len(counts)))
        ax.set_xticklabels(feature_names, rotation=90, fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def benchmark_figure(reports, path) -> None:
    """Mean test error with std bars per benchmarked method."""
    ok = [r for r in reports if not r.failed]
    fig, ax = plt.subplots(figsize=(max(4.0, 1.2 * len(ok)), 3.5))
    if ok:
        xs = np.arange(len(ok))
        ax.bar(xs, [r.mean_error for r in ok], yerr=[r.std_error for r in ok],
               width=0.6, capsize=4)
        ax.set_xticks(xs)
        ax.set_xticklabels([r.method for r in ok], rotation=20, ha="right")
    ax.set_ylabel("test error")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
