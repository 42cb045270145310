"""Figure rendering for sweep and kernel reports.

Figures are written next to the delimited output; the Agg backend keeps
rendering headless.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np


def render_sweep_figure(report, path) -> None:
    """Success rates and error quantiles against m (log axis)."""
    ms = [s.m for s in report.summaries]
    fig, axes = plt.subplots(1, 3, figsize=(12, 3.6))

    ax = axes[0]
    ax.plot(ms, [s.rate_N for s in report.summaries], "o-", label="P(N_hat = N)")
    ax.plot(ms, [s.rate_success for s in report.summaries], "s--", label="full success")
    ax.set_xscale("log")
    ax.set_ylim(-0.02, 1.02)
    ax.set_xlabel("m")
    ax.set_ylabel("rate")
    ax.legend(fontsize=8)

    ax = axes[1]
    med = [s.median_hausdorff for s in report.summaries]
    p90 = [s.p90_hausdorff for s in report.summaries]
    finite = [v if math.isfinite(v) else np.nan for v in med]
    ax.plot(ms, finite, "o-", label="median")
    ax.plot(ms, [v if math.isfinite(v) else np.nan for v in p90], "s--", label="90th pct")
    ax.set_xscale("log")
    ax.set_xlabel("m")
    ax.set_ylabel("Hausdorff distance")
    ax.legend(fontsize=8)

    ax = axes[2]
    ax.plot(ms, [s.median_freq_err if math.isfinite(s.median_freq_err) else np.nan
                 for s in report.summaries], "o-", label="median angular err")
    ax.plot(ms, [s.median_amp_err if math.isfinite(s.median_amp_err) else np.nan
                 for s in report.summaries], "s--", label="median amp rel err")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("m")
    ax.set_ylabel("error")
    ax.legend(fontsize=8)

    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_kernel_figure(grid, path, levels: dict | None = None) -> None:
    """|S| over the grid angles, with optional horizontal level lines."""
    theta = grid.thetas()
    mags = grid.magnitudes
    order = np.argsort((theta + np.pi) % (2 * np.pi) - np.pi)
    fig, ax = plt.subplots(figsize=(7, 3.4))
    th = (theta + np.pi) % (2 * np.pi) - np.pi
    ax.plot(th[order], mags[order], lw=0.8)
    for name, value in (levels or {}).items():
        ax.axhline(value, ls="--", lw=0.8, label=f"{name} = {value:.3f}")
    ax.set_xlabel("theta")
    ax.set_ylabel("|S|")
    if levels:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
