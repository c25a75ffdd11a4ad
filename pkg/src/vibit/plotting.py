"""Matplotlib renderers for stream statistics (written to files, Agg backend)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .pipeline import SymbolStream
from .randstats import StatsReport


def render_stats_figure(stream: SymbolStream, report: StatsReport, path: str | Path) -> None:
    """Two panels: observed vs expected symbol frequencies, and the running
    frequency of each symbol along the stream."""
    fig, (ax_bar, ax_run) = plt.subplots(1, 2, figsize=(9.0, 3.4))

    labels = sorted(report.counts)
    observed = np.array([report.counts[k] for k in labels], dtype=float)
    total = max(report.n, 1)
    xs = np.arange(len(labels))
    ax_bar.bar(xs - 0.17, observed / total, width=0.34, label="observed")
    if report.expected is not None:
        ax_bar.bar(xs + 0.17, report.expected, width=0.34, label="expected")
    ax_bar.set_xticks(xs, labels)
    ax_bar.set_xlabel("symbol")
    ax_bar.set_ylabel("frequency")
    ax_bar.set_title(f"{report.alphabet} stream, n={report.n}")
    ax_bar.legend()

    if report.n:
        idx = np.arange(1, report.n + 1, dtype=float)
        for k, label in enumerate(labels):
            running = np.cumsum(stream.symbols == int(label)) / idx
            step = max(1, report.n // 2000)
            ax_run.plot(idx[::step], running[::step], label=f"symbol {label}")
        ax_run.set_xlabel("draws")
        ax_run.set_ylabel("running frequency")
        ax_run.legend(loc="upper right", fontsize="small")
    else:
        ax_run.text(0.5, 0.5, "empty stream", ha="center", va="center")
    ax_run.set_title("convergence")

    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
