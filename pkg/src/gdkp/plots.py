"""Figure rendering for the CLI report path.

Every function takes already-computed data and writes a PNG next to the
delimited output; nothing here feeds back into the numerics.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .spectral import BandStructure


def plot_band_structure(bs: BandStructure, path: str, title: str = "") -> None:
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for n in bs.labels():
        ax.plot(bs.k_grid, bs.bands[n], lw=1.4, label=f"n={n}")
    for g in bs.gaps:
        ax.axhspan(g.lo, g.hi, color="0.92", zorder=0)
    ax.set_xlabel(r"$k$")
    ax.set_ylabel(r"$\epsilon$")
    ax.set_xlim(-math.pi, math.pi)
    if title:
        ax.set_title(title)
    ax.legend(fontsize=8, ncol=2)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_zak_sweep(rows: list[dict], path: str, title: str = "") -> None:
    fig, ax = plt.subplots(figsize=(6, 4.5))
    bands = sorted({r["band"] for r in rows})
    for n in bands:
        pts = [
            (r["theta"], r["phase"])
            for r in rows
            if r["band"] == n and r["phase"] is not None
        ]
        if not pts:
            continue
        pts.sort()
        ax.plot(*zip(*pts), "o-", ms=3, lw=0.8, label=f"n={n}")
    for y in (0.0, math.pi, 2 * math.pi):
        ax.axhline(y, color="0.8", lw=0.6, zorder=0)
    ax.set_xlabel(r"$\theta$")
    ax.set_ylabel(r"$Z$")
    ax.set_yticks([0, math.pi, 2 * math.pi], ["0", r"$\pi$", r"$2\pi$"])
    if title:
        ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_edge_sweep(rows: list[dict], path: str, axis: str, title: str = "") -> None:
    """One panel per gap: edge-state count over the (theta, axis) grid."""
    gaps = sorted(
        {(r["gap_below"], r["gap_above"]) for r in rows if r["gap_below"] is not None}
    )
    fig, axes = plt.subplots(
        1, max(len(gaps), 1), figsize=(3.2 * max(len(gaps), 1), 3.4), squeeze=False
    )
    for ax, gap in zip(axes[0], gaps):
        sub = [r for r in rows if (r["gap_below"], r["gap_above"]) == gap]
        thetas = np.array(sorted({r["theta"] for r in sub}))
        vals = np.array(sorted({r[axis] for r in sub}))
        grid = np.full((len(vals), len(thetas)), np.nan)
        for r in sub:
            if r["count"] is None:
                continue
            i = np.searchsorted(vals, r[axis])
            j = np.searchsorted(thetas, r["theta"])
            grid[i, j] = r["count"]
        mesh = ax.pcolormesh(thetas, vals, grid, shading="nearest", cmap="viridis")
        fig.colorbar(mesh, ax=ax, label="N")
        ax.set_xlabel(r"$\theta$")
        ax.set_ylabel(rf"$\{axis}$" if axis == "alpha" else r"$d$")
        ax.set_title(f"gap ({gap[0]},{gap[1]})", fontsize=9)
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_edge_spectrum(gap_states: list[tuple[tuple[float, float], list[float]]], path: str, title: str = "") -> None:
    """Gaps as shaded bands with the located edge energies marked."""
    fig, ax = plt.subplots(figsize=(4.2, 4.5))
    for (lo, hi), energies in gap_states:
        ax.axhspan(lo, hi, color="0.92", zorder=0)
        for e in energies:
            ax.plot([0.5], [e], "r_", ms=22, mew=2)
    ax.set_xlim(0, 1)
    ax.set_xticks([])
    ax.set_ylabel(r"$\epsilon$")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
