"""Figures written next to the CSV tables of the ``convergence`` and ``sweep`` commands."""

from __future__ import annotations

import os
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "axes.grid": True,
    "grid.alpha": 0.3,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "lines.linewidth": 1.2,
    "lines.markersize": 4,
    "legend.frameon": False,
    "font.size": 9,
}

# no timestamps or version strings, so reruns give identical files
_META = {"Software": None}


def _save(fig, path: str | os.PathLike) -> None:
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata=_META)
    plt.close(fig)


def plot_convergence(params: Sequence[float], distances: Sequence[float], *, xlabel: str,
                     ylabel: str, title: str, path: str | os.PathLike) -> None:
    """Log-log plot of distance against the path parameter."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.5, 3.2))
        ax.loglog(params, distances, "o-", color="tab:blue")
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        ax.set_title(title)
        _save(fig, path)


def plot_growth(samples: Sequence[tuple[float, float, float]], *, title: str,
                path: str | os.PathLike) -> None:
    """Growth functional against ``t``, one line per ``s``."""
    by_s: dict[float, list[tuple[float, float]]] = {}
    for t, s, v in samples:
        by_s.setdefault(s, []).append((t, v))
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.5, 3.2))
        cmap = plt.get_cmap("viridis")
        keys = sorted(by_s)
        for k, s in enumerate(keys):
            pts = sorted(by_s[s])
            ax.plot([t for t, _ in pts], [v for _, v in pts], "o-",
                    color=cmap(k / max(1, len(keys) - 1)), label=f"s = {s:.3g}")
        ax.set_xlabel("t")
        ax.set_ylabel("growth functional")
        ax.set_title(title)
        ax.legend(fontsize=7)
        _save(fig, path)


def plot_sweep(betas: Sequence[float], measured: Sequence[float], tolerance: float, *,
               check: str, path: str | os.PathLike) -> None:
    """Measured value of one check across ``beta`` with its tolerance line."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.5, 3.2))
        floor = [max(abs(m), 1e-300) for m in measured]
        ax.semilogy(betas, floor, "s-", color="tab:red", label="measured")
        ax.axhline(tolerance, color="k", ls="--", lw=0.8, label="tolerance")
        ax.set_xlabel("beta")
        ax.set_ylabel("|measured|")
        ax.set_title(check)
        ax.legend()
        _save(fig, path)
