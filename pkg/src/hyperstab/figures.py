"""Matplotlib renderings of the dense traces that accompany each report.

Every figure is written straight to a file (Agg backend) next to the CSV
trace it visualizes.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

__all__ = [
    "solution_figure",
    "ratio_figure",
    "residual_figure",
    "probe_figure",
    "crossings_figure",
    "envelope_figure",
]


def _save(fig, path) -> Path:
    path = Path(path)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path


def solution_figure(sol, path, title: str = "radial solution") -> Path:
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    ax.plot(sol.grid, sol.z, lw=1.0, label="z(t)")
    if len(sol.zeros):
        ax.plot(sol.zeros, np.zeros_like(sol.zeros), "o", ms=4, color="crimson", label="zeros")
    ax.axhline(0.0, color="0.6", lw=0.6)
    ax.set_xlabel("t")
    ax.set_ylabel("z")
    ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    return _save(fig, path)


def ratio_figure(trace_t, trace_ratio, path, threshold: float = 1.0, title: str = "ratio trace") -> Path:
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    ax.plot(trace_t, trace_ratio, lw=1.2, label="R(t)")
    ax.axhline(threshold, color="crimson", lw=0.8, ls="--", label=f"threshold {threshold:g}")
    ax.set_xlabel("t")
    ax.set_ylabel("ratio")
    ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    return _save(fig, path)


def residual_figure(values, path, title: str = "residuals") -> Path:
    values = np.asarray(values, dtype=float)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    floor = 1e-20
    ax.hist(np.log10(np.maximum(values, floor)), bins=40, color="steelblue")
    ax.set_xlabel("log10 residual")
    ax.set_ylabel("count")
    ax.set_title(title)
    return _save(fig, path)


def probe_figure(probe, path, title: str = "window integrals") -> Path:
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    centers = 0.5 * (probe.edges[:-1] + probe.edges[1:])
    ax.loglog(centers, np.maximum(probe.window_integrals, 1e-300), "o-", lw=1.0)
    ax.set_xlabel("window center t")
    ax.set_ylabel("window integral")
    ax.set_title(f"{title} [{probe.verdict}]")
    return _save(fig, path)


def crossings_figure(crossings, path, title: str = "equator crossings") -> Path:
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    ax.plot(crossings.s, crossings.has_crossing.astype(float), lw=1.0, label="crossing possible")
    ax.plot(crossings.s, crossings.witness_cos, lw=1.0, ls="--", label="witness cosine")
    ax.set_xlabel("s")
    ax.set_ylim(-1.1, 1.15)
    ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    return _save(fig, path)


def envelope_figure(probe, path, title: str = "tangent envelope probe") -> Path:
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    ax.plot(probe.s, probe.gap, lw=1.0, label="coverage gap")
    ax.axhline(0.0, color="0.6", lw=0.6)
    if probe.witness_s is not None:
        ax.axvline(probe.witness_s, color="crimson", lw=0.8, ls="--", label=f"witness s = {probe.witness_s:.4g}")
    ax.set_xlabel("s")
    ax.set_ylabel("|center| - halfwidth")
    ax.set_title(f"{title} [{'COVERED' if probe.covered else 'NOT_COVERED'}]")
    ax.legend(loc="best", fontsize=8)
    return _save(fig, path)
