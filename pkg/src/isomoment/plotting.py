"""Figure rendering for CLI reports (Agg backend, files only)."""

from __future__ import annotations

import numpy as np

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

__all__ = ["render_curve", "render_shape"]


def render_curve(columns, rows, path, title: str = "") -> None:
    """One PNG per curve table: first column on x, the rest as lines."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    data = np.asarray(rows, dtype=float)
    if data.size:
        x = data[:, 0]
        for j, label in enumerate(columns[1:], start=1):
            ax.plot(x, data[:, j], marker="o", markersize=3, linewidth=1.2, label=label)
        if len(columns) > 2:
            ax.legend(fontsize=8)
        ax.set_ylabel(", ".join(columns[1:3]) if len(columns) <= 3 else "value")
    ax.set_xlabel(columns[0] if columns else "")
    if title:
        ax.set_title(title, fontsize=10)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def render_shape(shape, path, title: str = "") -> None:
    """Outline plot of a 2D shape (polygon or Fourier boundary)."""
    from .fourier import FourierBoundary, evaluate
    from .geometry import Ellipsoid, Polygon

    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    if isinstance(shape, Polygon):
        v = np.vstack([shape.vertices, shape.vertices[:1]])
        ax.plot(v[:, 0], v[:, 1], "-", linewidth=1.4)
    elif isinstance(shape, FourierBoundary):
        pts, _ = evaluate(shape, 2.0 * np.pi * np.arange(512) / 512)
        pts = np.vstack([pts, pts[:1]])
        ax.plot(pts[:, 0], pts[:, 1], "-", linewidth=1.4)
    elif isinstance(shape, Ellipsoid) and shape.dimension == 2:
        t = 2.0 * np.pi * np.arange(512) / 512
        ax.plot(shape.center[0] + shape.semi_axes[0] * np.cos(t),
                shape.center[1] + shape.semi_axes[1] * np.sin(t), "-", linewidth=1.4)
    else:
        plt.close(fig)
        return
    ax.set_aspect("equal")
    ax.grid(True, alpha=0.3)
    if title:
        ax.set_title(title, fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
