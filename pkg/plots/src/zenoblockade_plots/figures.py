"""Figure builders: probability traces, Wigner heatmaps, torus scatter.

Everything here is a read-only consumer of the simulator's files; no figure
routine ever rescales or edits the numbers it plots.  Wigner maps always use
a diverging colormap with the color scale symmetric about W = 0, so negative
patches are visually unambiguous.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .io import ValidationError, read_probabilities, read_torus, read_wigner

# P0 black, P1 red, P2 blue, further levels from a muted tail
PROBABILITY_COLORS = ("black", "red", "blue", "darkgreen", "purple")
# dashed / dotted / solid keyed to the sorted run labels (weakest drive first)
LINE_STYLES = ("--", ":", "-", "-.")


@dataclass(frozen=True)
class FigureRequest:
    """Input files, output path and style options for one figure."""

    out_path: Path
    probability_paths: tuple = ()  # (label, path) pairs
    wigner_paths: tuple = ()  # (label, path) pairs
    torus_path: Path | None = None
    line_styles: tuple = LINE_STYLES
    colormap: str = "RdBu_r"
    dpi: int = 150
    max_fock: int = 2  # plot P0..P_max_fock


def _save(fig, out_path: Path, dpi: int):
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out_path, dpi=dpi, bbox_inches="tight")


def plot_probabilities(req: FigureRequest):
    """One panel of P_n(t): colors per Fock level, line style per run."""
    if not req.probability_paths:
        raise ValidationError("no probabilities.csv inputs supplied")
    series = [read_probabilities(path, label) for label, path in req.probability_paths]
    for s in series:
        if s.values.shape[1] < req.max_fock + 1:
            raise ValidationError(
                f"{s.label}: need columns P0..P{req.max_fock}, got {len(s.columns)}"
            )

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for run_index, s in enumerate(series):
        style = req.line_styles[run_index % len(req.line_styles)]
        for level in range(req.max_fock + 1):
            label = f"P{level} ({s.label})" if len(series) > 1 else f"P{level}"
            ax.plot(
                s.times,
                s.values[:, level],
                linestyle=style,
                color=PROBABILITY_COLORS[level % len(PROBABILITY_COLORS)],
                label=label,
            )
    ax.set_xlabel("time  [1/g]")
    ax.set_ylabel("phonon probability")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(fontsize=7, ncol=max(1, len(series)))
    _save(fig, req.out_path, req.dpi)
    return fig


def symmetric_limits(values: np.ndarray) -> tuple:
    """Color limits symmetric about zero (white sits exactly at W = 0)."""
    extent = float(np.max(np.abs(values))) or 1.0
    return -extent, extent


def plot_wigner(req: FigureRequest):
    """Heatmap panel per run, diverging colormap centered at W = 0."""
    if not req.wigner_paths:
        raise ValidationError("no wigner_final.csv inputs supplied")
    grids = [read_wigner(path, label) for label, path in req.wigner_paths]
    vmin, vmax = symmetric_limits(np.concatenate([g.values.ravel() for g in grids]))

    fig, axes = plt.subplots(
        1, len(grids), figsize=(4.4 * len(grids), 4.0), squeeze=False
    )
    for ax, grid in zip(axes[0], grids):
        mesh = ax.pcolormesh(
            grid.x_axis,
            grid.p_axis,
            grid.values.T,  # rows are x in the file; pcolormesh wants (p, x)
            cmap=req.colormap,
            vmin=vmin,
            vmax=vmax,
            shading="nearest",
        )
        ax.set_xlabel("x")
        ax.set_ylabel("p")
        ax.set_title(grid.label, fontsize=9)
        ax.set_aspect("equal")
    fig.colorbar(mesh, ax=axes[0], label="W(x, p)", shrink=0.85)
    _save(fig, req.out_path, req.dpi)
    return fig


def plot_torus(req: FigureRequest):
    """Wrapped-angle scatter of the basis states, colored by Zeno class."""
    if req.torus_path is None:
        raise ValidationError("no torus.csv input supplied")
    torus = read_torus(req.torus_path)

    fig, ax = plt.subplots(figsize=(5.2, 5.0))
    cmap = plt.get_cmap("tab20")
    # classes with more than one member are the coalesced (invariant) ones
    counts = {cid: int(np.sum(torus.class_id == cid)) for cid in set(torus.class_id)}
    for cid in sorted(counts):
        mask = torus.class_id == cid
        coalesced = counts[cid] > 1
        ax.scatter(
            torus.theta1[mask],
            torus.theta2[mask],
            s=110 if coalesced else 45,
            color=cmap(cid % 20),
            edgecolors="black" if coalesced else "none",
            linewidths=1.2 if coalesced else 0.0,
            zorder=3 if coalesced else 2,
        )
    for n, m, t1, t2 in zip(torus.n, torus.m, torus.theta1, torus.theta2):
        ax.annotate(f"({n},{m})", (t1, t2), fontsize=6, alpha=0.7,
                    textcoords="offset points", xytext=(4, 3))
    ax.set_xlim(-0.3, 2 * np.pi + 0.3)
    ax.set_ylim(-0.3, 2 * np.pi + 0.3)
    ax.set_xlabel(r"$\theta_1$  (optical wrap)")
    ax.set_ylabel(r"$\theta_2$  (mechanical wrap)")
    ax.set_xticks([0, np.pi, 2 * np.pi], ["0", "pi", "2pi"])
    ax.set_yticks([0, np.pi, 2 * np.pi], ["0", "pi", "2pi"])
    _save(fig, req.out_path, req.dpi)
    return fig
