"""Matplotlib renderings written next to the delimited report files."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def poset_figure(poset, path: str):
    """Layered Hasse diagram, one horizontal layer per rank."""
    by_rank = {}
    for i in range(poset.n):
        by_rank.setdefault(poset.ranks[i], []).append(i)
    pos = {}
    for r, row in sorted(by_rank.items()):
        width = len(row)
        for c, i in enumerate(sorted(row, key=lambda i: poset.keys[i])):
            pos[i] = (c - (width - 1) / 2.0, r)
    fig, ax = plt.subplots(figsize=(max(6, poset.n * 0.12), 5))
    for a, b in poset.covers:
        (x1, y1), (x2, y2) = pos[a], pos[b]
        ax.plot([x1, x2], [y1, y2], color="0.7", lw=0.6, zorder=1)
    xs = [pos[i][0] for i in range(poset.n)]
    ys = [pos[i][1] for i in range(poset.n)]
    ax.scatter(xs, ys, s=18, color="black", zorder=2)
    ax.set_yticks(sorted(by_rank))
    ax.set_ylabel("rank")
    ax.set_xticks([])
    ax.set_title(f"silting pairs poset ({poset.n} nodes)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def hammock_figure(survivors, box, path: str):
    """Scatter of surviving coordinates, one panel per component."""
    k_values = sorted(box[0])
    fig, axes = plt.subplots(
        1, max(1, len(k_values)), figsize=(4 * max(1, len(k_values)), 4), squeeze=False
    )
    for ax, k in zip(axes[0], k_values):
        pts = [(z.i, z.j) for z in survivors if z.k == k]
        if pts:
            ax.scatter(*zip(*pts), s=10, color="black")
        ax.set_title(f"component {k}")
        ax.set_xlim(box[1] - 0.5, box[2] + 0.5)
        ax.set_ylim(box[3] - 0.5, box[4] + 0.5)
        ax.set_xlabel("i")
        ax.set_ylabel("j")
        ax.set_aspect("equal")
    fig.suptitle("interval-finiteness survivors")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def charges_figure(values, path: str):
    """Charge values of heart simples in the complex plane."""
    fig, ax = plt.subplots(figsize=(5, 5))
    if values:
        xs = [float(re) for re, _ in values]
        ys = [float(im) for _, im in values]
        ax.scatter(xs, ys, s=6, alpha=0.35, color="black")
    ax.axhline(0, color="0.8", lw=0.8)
    ax.axvline(0, color="0.8", lw=0.8)
    ax.set_xlabel("Re Z(S)")
    ax.set_ylabel("Im Z(S)")
    ax.set_title("charges of heart simples over sampled points")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
