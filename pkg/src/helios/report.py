"""File outputs for simulation results and diagrams.

Three render paths: a delimited CSV of per-sensor values, an exact-color PNG
(one pixel block per sensor, row-major, row 0 at the bottom so the image reads
as a plan with +Y up), and annotated matplotlib figures for reports. The PNG
colors are byte-identical to ``metrics.colorize`` output; the figures are for
humans and make no bit-exactness promise.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.collections import LineCollection
from PIL import Image

from .metrics import HeatmapSpec, SimulationResult, colorize, default_heatmap_spec
from .sunpath import SunPathDiagram


def write_values_csv(result: SimulationResult, path: str | Path, spec: HeatmapSpec | None = None) -> Path:
    """Per-sensor rows: x, y, z, value, r, g, b (row-major sensor order)."""
    spec = spec or default_heatmap_spec(result)
    colors = colorize(result.values, spec)
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "y", "z", result.metric, "r", "g", "b"])
        for (x, y, z), v, (r, g, b) in zip(result.grid.positions, result.values, colors):
            writer.writerow([repr(x), repr(y), repr(z), repr(float(v)), r, g, b])
    return path


def write_heatmap_png(
    result: SimulationResult,
    path: str | Path,
    spec: HeatmapSpec | None = None,
    cell_px: int = 10,
) -> Path:
    """Exact-color heatmap: one cell_px x cell_px block per sensor."""
    spec = spec or default_heatmap_spec(result)
    colors = colorize(result.values, spec)
    nx, ny = result.grid.count_x, result.grid.count_y
    cells = colors.reshape(ny, nx, 3)
    cells = cells[::-1]  # row 0 (min y) at the bottom of the image
    pixels = np.repeat(np.repeat(cells, cell_px, axis=0), cell_px, axis=1)
    image = Image.fromarray(pixels, mode="RGB")
    path = Path(path)
    image.save(path)
    return path


def write_heatmap_figure(
    result: SimulationResult,
    path: str | Path,
    spec: HeatmapSpec | None = None,
    title: str | None = None,
) -> Path:
    """Annotated matplotlib rendering with axes in meters and a colorbar."""
    spec = spec or default_heatmap_spec(result)
    colors = colorize(result.values, spec).astype(np.float64) / 255.0
    nx, ny = result.grid.count_x, result.grid.count_y
    rgba = colors.reshape(ny, nx, 3)

    xs = result.grid.positions[:, 0]
    ys = result.grid.positions[:, 1]
    extent = (
        xs.min() - result.grid.spacing_x / 2,
        xs.max() + result.grid.spacing_x / 2,
        ys.min() - result.grid.spacing_y / 2,
        ys.max() + result.grid.spacing_y / 2,
    )

    fig, ax = plt.subplots(figsize=(8, 8 * (extent[3] - extent[2]) / max(extent[1] - extent[0], 1e-9)))
    ax.imshow(rgba, origin="lower", extent=extent, interpolation="nearest", aspect="equal")
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.set_title(title or result.metric)

    gradient = colorize(np.linspace(spec.min, spec.max, 256), spec).astype(np.float64) / 255.0
    cmap = matplotlib.colors.ListedColormap(gradient)
    norm = matplotlib.colors.Normalize(vmin=spec.min, vmax=spec.max)
    fig.colorbar(
        matplotlib.cm.ScalarMappable(norm=norm, cmap=cmap),
        ax=ax,
        label=result.metric,
        shrink=0.8,
    )
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return Path(path)


def _project_equidistant(altitude_deg: float, azimuth_deg: float) -> tuple[float, float]:
    """Azimuthal equidistant projection: zenith at center, north up, east right."""
    r = (90.0 - altitude_deg) / 90.0
    az = math.radians(azimuth_deg)
    return r * math.sin(az), r * math.cos(az)


def write_sunpath_svg(diagram: SunPathDiagram, path: str | Path) -> Path:
    """Stereographic-style (equidistant) sun-path chart as an SVG figure."""
    fig, ax = plt.subplots(figsize=(8, 8))
    ax.set_aspect("equal")
    ax.axis("off")

    for radius in (1.0, 2.0 / 3.0, 1.0 / 3.0):
        circle = plt.Circle((0, 0), radius, fill=False, color="0.8", lw=0.8)
        ax.add_patch(circle)
        ax.annotate(
            f"{int(90 - radius * 90)}°",
            (0.02, radius),
            color="0.5",
            fontsize=7,
        )
    for label, az in (("N", 0.0), ("E", 90.0), ("S", 180.0), ("W", 270.0)):
        x, y = _project_equidistant(0.0, az)
        ax.annotate(label, (1.06 * x, 1.06 * y), ha="center", va="center", fontsize=11)

    for arc in diagram.arcs:
        pts = [
            _project_equidistant(s.altitude_deg, s.azimuth_deg)
            for s in arc.samples
            if s.altitude_deg >= 0.0
        ]
        if len(pts) < 2:
            continue
        segments = np.array([pts[:-1], pts[1:]]).transpose(1, 0, 2)
        color = tuple(c / 255.0 for c in arc.color)
        ax.add_collection(LineCollection(segments, colors=[color], lw=1.6))

    for analemma in diagram.analemmas:
        pts = [
            _project_equidistant(s.altitude_deg, s.azimuth_deg)
            for s in analemma.samples
            if s.altitude_deg >= 0.0
        ]
        if len(pts) < 2:
            continue
        xs, ys = zip(*pts)
        ax.plot(xs, ys, color="0.35", lw=0.7, ls="--")
        ax.annotate(f"{analemma.hour:02d}h", (xs[0], ys[0]), fontsize=6, color="0.35")

    ax.set_xlim(-1.15, 1.15)
    ax.set_ylim(-1.15, 1.15)
    fig.savefig(path, format="svg", bbox_inches="tight")
    plt.close(fig)
    return Path(path)
