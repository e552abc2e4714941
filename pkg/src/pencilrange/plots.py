"""Figure rendering for the CLI report paths (Agg backend, files only)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def render_boundary(polygon, out_path) -> None:
    """Closed boundary polygon of a numerical range with the origin marked."""
    fig, ax = plt.subplots(figsize=(5, 5))
    v = np.append(polygon.vertices, polygon.vertices[0])
    ax.plot(v.real, v.imag, "-", lw=1.2, color="tab:blue")
    ax.plot(polygon.vertices.real, polygon.vertices.imag, ".", ms=2,
            color="tab:blue")
    ax.plot([0], [0], "+", ms=10, color="tab:red")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_aspect("equal")
    ax.grid(True, alpha=0.3)
    fig.savefig(out_path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def render_raster(grid, out_path) -> None:
    """Membership raster over the window; member cells filled."""
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.pcolormesh(grid.re_axis, grid.im_axis, grid.cells.T, cmap="Blues",
                  vmin=0.0, vmax=1.3, shading="nearest")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_aspect("equal")
    fig.savefig(out_path, dpi=150, bbox_inches="tight")
    plt.close(fig)
