"""Minimal SVG figures (matplotlib, Agg backend). CSV stays the canonical output."""

from __future__ import annotations

import math


def _plt():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "randfb"
    return plt


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    fig.clf()


def energy_histogram(path, result):
    plt = _plt()
    fig, ax = plt.subplots(figsize=(5, 3.2))
    edges, counts = result.edges, result.counts
    ax.stairs(counts, edges, fill=True, alpha=0.6)
    ax.axvline(result.analytic_mean, color="k", lw=1, label="analytic mean")
    ax.set_xlabel("response energy")
    ax.set_ylabel("count")
    ax.legend(frameon=False)
    _save(fig, path)


def deviation(path, sweep):
    plt = _plt()
    fig, ax = plt.subplots(figsize=(5, 3.2))
    T = [r.T for r in sweep.rows]
    e = sweep.signal_energy
    ax.fill_between(T, [r.band_lo for r in sweep.rows], [r.band_hi for r in sweep.rows], alpha=0.3, label="retained band")
    ax.plot(T, [r.mean_dev for r in sweep.rows], label="mean deviation")
    ax.plot(T, [r.cantelli_alpha * e for r in sweep.rows], label="Cantelli")
    ax.plot(T, [r.chernoff_alpha * e for r in sweep.rows], label="Chernoff")
    ax.set_xscale("log", base=2)
    ax.set_xlabel("filter length T")
    ax.set_ylabel("energy deviation")
    ax.legend(frameon=False, fontsize=7)
    _save(fig, path)


def framebounds(path, rows):
    plt = _plt()
    fig, ax = plt.subplots(figsize=(5, 3.2))
    T = [r.T for r in rows]
    for name, lo, hi, mean, thm, asym in (
        ("A", "lo_A", "hi_A", "mean_A", "thm1_lo", "asym_lo"),
        ("B", "lo_B", "hi_B", "mean_B", "thm1_hi", "asym_hi"),
    ):
        ax.fill_between(T, [getattr(r, lo) for r in rows], [getattr(r, hi) for r in rows], alpha=0.25)
        ax.plot(T, [getattr(r, mean) for r in rows], label=f"mean {name}")
        ax.plot(T, [getattr(r, thm) for r in rows], "--", color="gray")
        ax.plot(T, [getattr(r, asym) for r in rows], ":", color="gray")
    ax.axhline(1.0, color="k", lw=0.5)
    ax.set_xscale("log", base=2)
    ax.set_xlabel("filter length T")
    ax.set_ylabel("frame bound")
    ax.legend(frameon=False, fontsize=7)
    _save(fig, path)


def condition(path, grid):
    plt = _plt()
    fig, ax = plt.subplots(figsize=(5, 3.2))
    for T in sorted({c.T for c in grid.cells}):
        cells = sorted((c for c in grid.cells if c.T == T), key=lambda c: c.J)
        ax.plot([c.J for c in cells], [c.mean_kappa for c in cells], lw=1, label=f"T={T}")
    diag = grid.diagonal
    if diag:
        ax.plot([c.J for c in diag], [c.mean_kappa for c in diag], "k-o", lw=2, ms=3, label="J = log2 T")
    ax.set_yscale("log")
    ax.set_xlabel("number of filters J")
    ax.set_ylabel("mean condition number")
    if not all(math.isfinite(c.mean_kappa) for c in grid.cells):
        ax.set_title("some cells fully singular", fontsize=7)
    ax.legend(frameon=False, fontsize=6, ncol=2)
    _save(fig, path)
