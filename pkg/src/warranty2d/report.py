"""Figure rendering for the report-producing commands.

Each function renders one PNG next to the delimited output it mirrors.
The Agg backend is forced so rendering works headless, and PNG metadata
is stripped of dates so identical runs produce identical bytes.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_SAVE_KW = {"dpi": 150, "bbox_inches": "tight", "metadata": {"Date": None}}


def render_curves(
    age_grid: np.ndarray,
    age_par: np.ndarray,
    age_km: np.ndarray,
    usage_grid: np.ndarray,
    usage_par: np.ndarray,
    usage_km: np.ndarray,
    path: str | Path,
) -> None:
    """Parametric vs empirical reliability, one panel per axis."""
    fig, axes = plt.subplots(1, 2, figsize=(9.0, 3.6))
    for ax, grid, par, km, label in (
        (axes[0], age_grid, age_par, age_km, "age"),
        (axes[1], usage_grid, usage_par, usage_km, "usage"),
    ):
        ax.step(grid, km, where="post", color="0.4", label="Kaplan-Meier")
        ax.plot(grid, par, color="C3", label="fitted Weibull")
        ax.set_xlabel(f"{label} (scaled units)")
        ax.set_ylabel("reliability")
        ax.set_ylim(-0.02, 1.02)
        ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def render_surface(grid: np.ndarray, label: str, path: str | Path) -> None:
    """Heatmap of a (t, u, cost) grid emitted by cost_surface_grid."""
    t = np.unique(grid[:, 0])
    u = np.unique(grid[:, 1])
    cost = grid[:, 2].reshape(t.size, u.size)
    fig, ax = plt.subplots(figsize=(5.2, 4.2))
    mesh = ax.pcolormesh(t, u, cost.T, shading="auto", cmap="viridis")
    fig.colorbar(mesh, ax=ax, label="reimbursement cost")
    ax.set_xlabel("age (scaled units)")
    ax.set_ylabel("usage (scaled units)")
    ax.set_title(label)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def render_table(labels: list[str], utilities: list[float], s: float, path: str | Path) -> None:
    """Utility by policy pair at one sale price."""
    fig, ax = plt.subplots(figsize=(7.0, 3.6))
    x = np.arange(len(labels))
    ax.bar(x, utilities, color="C0")
    ax.set_xticks(x)
    ax.set_xticklabels(labels, rotation=45, ha="right")
    ax.set_ylabel("expected utility")
    ax.set_title(f"S = {s:g}")
    lo = min(utilities)
    hi = max(utilities)
    pad = 0.1 * (hi - lo) if hi > lo else 1.0
    ax.set_ylim(lo - pad, hi + pad)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)
