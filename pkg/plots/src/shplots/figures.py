"""Figure builders: energy traces, convergence curves, field heatmaps.

All builders return ``(fig, meta)`` so callers (and tests) can inspect what
was drawn; the CLI wrappers save to file and close the figure.  Rendering is
headless (Agg).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .readers import read_order, read_shf1, read_trace

FIGURE_KINDS = ("convergence", "energy", "heatmap_panel")


@dataclass(frozen=True)
class FigureJob:
    """One figure request: input files, kind, output path, axis options."""

    inputs: tuple[str, ...]
    kind: str
    out: str
    loglog: bool = True  # convergence plots are log-log unless disabled
    vmin: float | None = None  # heatmap range; default symmetric about the mean
    vmax: float | None = None
    dpi: int = 150
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.kind not in FIGURE_KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}; expected one of {FIGURE_KINDS}")
        if not self.inputs:
            raise ValueError("at least one input file is required")


def fit_slope(taus: np.ndarray, errors: np.ndarray) -> float:
    """Least-squares slope of log(error) against log(tau)."""
    slope, _ = np.polyfit(np.log(taus), np.log(errors), 1)
    return float(slope)


def build_energy(job: FigureJob):
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    final = {}
    for i, path in enumerate(job.inputs):
        cols = read_trace(path)
        label = job.labels[i] if i < len(job.labels) else Path(path).stem
        ax.plot(cols["t"], cols["E"], label=label)
        final[label] = float(cols["E"][-1])
    ax.set_xlabel("t")
    ax.set_ylabel("energy")
    ax.set_title("energy evolution")
    if len(job.inputs) > 1 or job.labels:
        ax.legend()
    ax.grid(alpha=0.3)
    return fig, {"final_energy": final}


def build_convergence(job: FigureJob):
    cols = read_order(job.inputs[0])
    taus, errors, included = cols["tau"], cols["error"], cols["included"]
    good = included & np.isfinite(errors)
    slope = fit_slope(taus[good], errors[good])

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10.5, 4.2))
    for ax, x, xlabel in ((ax1, taus, "tau"), (ax2, taus**2, "tau^2")):
        if job.loglog:
            ax.set_xscale("log")
            ax.set_yscale("log")
        ax.plot(x[good], errors[good], "o-", label="error")
        if np.any(~good):
            ax.plot(x[~good], errors[~good], "o", mfc="none", label="excluded")
        ax.set_xlabel(xlabel)
        ax.set_ylabel("l2 error")
        ax.grid(alpha=0.3, which="both")

    # order-1 and order-2 guide lines anchored at the coarsest kept point
    t0, e0 = taus[good][0], errors[good][0]
    guide = np.array([taus[good][0], taus[good][-1]])
    ax1.plot(guide, e0 * (guide / t0), "k:", label="order 1")
    ax1.plot(guide, e0 * (guide / t0) ** 2, "k--", label="order 2")
    ax1.annotate(f"fitted slope = {slope:.2f}", xy=(0.05, 0.05), xycoords="axes fraction")
    ax1.legend()
    ax1.set_title("error vs tau")
    ax2.set_title("error vs tau^2")
    return fig, {"slope": slope, "n_points": int(good.sum())}


def build_heatmap(job: FigureJob):
    n = len(job.inputs)
    fig, axes = plt.subplots(1, n, figsize=(4.6 * n, 4.2), squeeze=False)
    meta = {"panels": []}
    for ax, path in zip(axes[0], job.inputs):
        snap = read_shf1(path)
        vmin, vmax = job.vmin, job.vmax
        if vmin is None or vmax is None:
            # symmetric range about the field mean unless configured
            mean = float(snap.values.mean())
            spread = float(np.max(np.abs(snap.values - mean))) or 1.0
            vmin = mean - spread if vmin is None else vmin
            vmax = mean + spread if vmax is None else vmax
        im = ax.imshow(
            snap.values.T, origin="lower", extent=(0, snap.L, 0, snap.L),
            vmin=vmin, vmax=vmax, cmap="viridis",
        )
        ax.set_title(f"t = {snap.t:g}")
        fig.colorbar(im, ax=ax, shrink=0.85)
        meta["panels"].append({"N": snap.N, "L": snap.L, "t": snap.t,
                               "vmin": vmin, "vmax": vmax})
    return fig, meta


_BUILDERS = {
    "energy": build_energy,
    "convergence": build_convergence,
    "heatmap_panel": build_heatmap,
}


def plot(job: FigureJob) -> dict:
    """Render one job to ``job.out`` and return the builder metadata."""
    fig, meta = _BUILDERS[job.kind](job)
    try:
        fig.savefig(job.out, dpi=job.dpi)
    finally:
        plt.close(fig)
    return meta
