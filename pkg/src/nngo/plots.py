"""Figure rendering for the CLI report paths.

Each CSV the CLI emits gets a PNG companion with the same stem: convergence
traces for optimization runs, relaxation curves over a box, and scaling
plots for benchmark sweeps.
"""

from __future__ import annotations

import math


def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def render_convergence(rows, path) -> None:
    """rows: (iter, wall_seconds, lb, ub, nodes_open)."""
    plt = _pyplot()
    t = [r[1] for r in rows]
    lb = [r[2] for r in rows]
    ub = [r[3] for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    finite_t = [ti for ti, v in zip(t, ub) if math.isfinite(v)]
    ax.plot(t, lb, label="lower bound", drawstyle="steps-post")
    if finite_t:
        ax.plot(finite_t, [v for v in ub if math.isfinite(v)],
                label="upper bound", drawstyle="steps-post")
    ax.set_xlabel("wall time [s]")
    ax.set_ylabel("objective bound")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_relax_curves(header, rows, path) -> None:
    """Columns: x, tanh, then cv/cc pairs per relaxation flavor."""
    plt = _pyplot()
    xs = [r[0] for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(xs, [r[1] for r in rows], "k-", linewidth=2, label="tanh")
    colors = plt.rcParams["axes.prop_cycle"].by_key()["color"]
    pair_names = [name[3:] for name in header[2::2]]
    for k, name in enumerate(pair_names):
        color = colors[k % len(colors)]
        ax.plot(xs, [r[2 + 2 * k] for r in rows], color=color, linestyle="--",
                label=name)
        ax.plot(xs, [r[3 + 2 * k] for r in rows], color=color, linestyle="--")
    ax.set_xlabel("x")
    ax.set_ylabel("relaxation value")
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_bench(rows, path) -> None:
    """rows: dicts with width, depth, mode, neurons, wall_seconds, status."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    modes = sorted({r["mode"] for r in rows})
    markers = {m: mk for m, mk in zip(modes, "osd^v")}
    for mode in modes:
        pts = [(r["neurons"], r["wall_seconds"]) for r in rows
               if r["mode"] == mode and r["status"] == "Converged"]
        if pts:
            pts.sort()
            ax.plot([p[0] for p in pts], [p[1] for p in pts],
                    marker=markers[mode], label=mode)
    ax.set_xlabel("hidden neurons")
    ax.set_ylabel("wall time [s]")
    ax.set_yscale("log")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
