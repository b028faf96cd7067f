"""Figure rendering for benchmark reports and function surfaces.

Renders to files only (Agg backend), next to the delimited output the CLI
writes: a summary chart of average costs per algorithm for `bench`, and a
3-d surface in the style of the classic test-suite illustrations for
`grid`.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .harness import quality  # noqa: E402
from .objectives import get_objective  # noqa: E402


def save_surface_figure(grid, func_id: str, resolution: int, path: str) -> None:
    """3-d surface of one function from `surface_grid` samples."""
    objective = get_objective(func_id)
    x1 = grid[:, 0].reshape(resolution, resolution)
    x2 = grid[:, 1].reshape(resolution, resolution)
    f = grid[:, 2].reshape(resolution, resolution)
    fig = plt.figure(figsize=(7.0, 5.2))
    ax = fig.add_subplot(projection="3d")
    ax.plot_surface(x1, x2, f, cmap="viridis", linewidth=0, antialiased=True)
    ax.set_xlabel("x1")
    ax.set_ylabel("x2")
    ax.set_zlabel(func_id)
    ax.set_title(f"{func_id.upper()} over [{objective.lower}, {objective.upper}]^2")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_benchmark_figure(stats: dict, path: str) -> None:
    """Average cost (with std error bars) per algorithm, one panel per
    function, algorithms sorted best-first."""
    functions = sorted({func for _, func in stats})
    ncols = min(3, len(functions))
    nrows = math.ceil(len(functions) / ncols)
    fig, axes = plt.subplots(
        nrows, ncols, figsize=(4.2 * ncols, 3.2 * nrows), squeeze=False
    )
    for idx, func in enumerate(functions):
        ax = axes[idx // ncols][idx % ncols]
        objective = get_objective(func)
        rows = [(algo, s) for (algo, f2), s in stats.items() if f2 == func]
        rows.sort(key=lambda r: (quality(r[1], objective), r[0]))
        names = [algo for algo, _ in rows]
        avgs = [s.cost_avg for _, s in rows]
        stds = [s.cost_std for _, s in rows]
        ax.bar(names, avgs, yerr=stds, capsize=3, color="tab:blue", alpha=0.8)
        ax.axhline(objective.known_min, color="tab:red", linewidth=0.8, linestyle="--")
        ax.set_title(func.upper())
        ax.set_ylabel("cost")
    for idx in range(len(functions), nrows * ncols):
        axes[idx // ncols][idx % ncols].set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
