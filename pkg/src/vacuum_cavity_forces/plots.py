"""Optional figure rendering for CLI outputs.

Figures are strictly opt-in (``--figures``): the primary CLI product is
machine-readable CSV/JSON, and these helpers only provide a quick visual
check of the emitted data.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

__all__ = ["spectrum_figure", "response_figure"]


def spectrum_figure(columns: list[str], rows, path, title: str) -> Path:
    """Plot each non-abscissa column against the first column."""
    path = Path(path)
    data = np.asarray(rows, dtype=float)
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    x = data[:, 0]
    for k, name in enumerate(columns[1:], start=1):
        ax.plot(x, data[:, k], label=name, linewidth=1.0)
    ax.set_xlabel(columns[0])
    ax.set_title(title)
    ax.legend(fontsize="small", ncol=2)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def response_figure(times, dF1, dF2, echoes, path, title: str) -> Path:
    """Force responses with detected echo positions marked."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    ax.plot(times, dF1, label="dF1", linewidth=1.0)
    ax.plot(times, dF2, label="dF2", linewidth=1.0)
    for echo in echoes:
        if not echo["absent"]:
            ax.axvline(echo["delay"], color="gray", linestyle=":",
                       linewidth=0.8)
    ax.set_xlabel("t")
    ax.set_title(title)
    ax.legend(fontsize="small")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
