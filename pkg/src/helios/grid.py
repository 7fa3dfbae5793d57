"""Workplane sensor grids: a rectangular array of upward-facing illuminance sensors.

Sensor ordering is row-major (y-major, x-minor) and stable; the text
serialization below is the exact stdin contract for the raytracing backend.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

import numpy as np

# Guards the count formula against binary round-off in extent/spacing.
_COUNT_EPS = 1e-9


class GridError(ValueError):
    """Invalid grid construction parameters."""


@dataclass(eq=False)
class SensorGrid:
    """Planar array of sensors at a fixed height, all facing +Z."""

    center_xy: tuple[float, float]
    height_z: float
    width_x: float
    depth_y: float
    spacing_x: float
    spacing_y: float
    positions: np.ndarray  # (N, 3) float64, row-major (y-major, x-minor)

    def __post_init__(self) -> None:
        self.positions = np.asarray(self.positions, dtype=np.float64).reshape(-1, 3)

    @property
    def count(self) -> int:
        return self.positions.shape[0]

    @property
    def count_x(self) -> int:
        return int(np.floor(self.width_x / self.spacing_x + _COUNT_EPS)) + 1

    @property
    def count_y(self) -> int:
        return int(np.floor(self.depth_y / self.spacing_y + _COUNT_EPS)) + 1

    @property
    def directions(self) -> np.ndarray:
        d = np.zeros_like(self.positions)
        d[:, 2] = 1.0
        return d


def make_grid(
    center_xy: tuple[float, float],
    height_z: float,
    width_x: float,
    depth_y: float,
    spacing_x: float,
    spacing_y: float,
) -> SensorGrid:
    """Build a grid centered on ``center_xy`` with count = floor(extent/spacing) + 1 per axis."""
    for name, value in (
        ("width_x", width_x),
        ("depth_y", depth_y),
        ("spacing_x", spacing_x),
        ("spacing_y", spacing_y),
    ):
        if not value > 0.0:
            raise GridError(f"{name} must be positive, got {value}")
    if spacing_x > width_x:
        raise GridError(f"spacing_x {spacing_x} exceeds width_x {width_x}")
    if spacing_y > depth_y:
        raise GridError(f"spacing_y {spacing_y} exceeds depth_y {depth_y}")

    nx = int(np.floor(width_x / spacing_x + _COUNT_EPS)) + 1
    ny = int(np.floor(depth_y / spacing_y + _COUNT_EPS)) + 1
    cx, cy = float(center_xy[0]), float(center_xy[1])
    x0 = cx - (nx - 1) * spacing_x / 2.0
    y0 = cy - (ny - 1) * spacing_y / 2.0

    positions = np.empty((nx * ny, 3), dtype=np.float64)
    k = 0
    for j in range(ny):
        y = y0 + j * spacing_y
        for i in range(nx):
            positions[k] = (x0 + i * spacing_x, y, height_z)
            k += 1
    return SensorGrid(
        center_xy=(cx, cy),
        height_z=float(height_z),
        width_x=float(width_x),
        depth_y=float(depth_y),
        spacing_x=float(spacing_x),
        spacing_y=float(spacing_y),
        positions=positions,
    )


def _fmt(value: float) -> str:
    return format(float(value), ".12g")


def grid_to_sensor_lines(grid: SensorGrid) -> str:
    """One line per sensor: "x y z dx dy dz", row-major, trailing newline."""
    lines = []
    for x, y, z in grid.positions:
        lines.append(f"{_fmt(x)} {_fmt(y)} {_fmt(z)} 0 0 1")
    return "\n".join(lines) + "\n"


def parse_sensor_lines(text: str) -> tuple[np.ndarray, np.ndarray]:
    """Inverse of grid_to_sensor_lines: (positions (N,3), directions (N,3))."""
    positions = []
    directions = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 6:
            raise GridError(f"sensor line {lineno}: expected 6 fields, got {len(parts)}")
        values = [float(p) for p in parts]
        positions.append(values[0:3])
        directions.append(values[3:6])
    return np.asarray(positions, dtype=np.float64), np.asarray(directions, dtype=np.float64)


def grid_to_dict(grid: SensorGrid) -> dict[str, Any]:
    return {
        "center": [grid.center_xy[0], grid.center_xy[1]],
        "height": grid.height_z,
        "width": grid.width_x,
        "depth": grid.depth_y,
        "spacing": [grid.spacing_x, grid.spacing_y],
        "count_x": grid.count_x,
        "count_y": grid.count_y,
        "count": grid.count,
        "positions": grid.positions.tolist(),
    }


def grid_from_dict(doc: dict[str, Any]) -> SensorGrid:
    grid = make_grid(
        center_xy=(float(doc["center"][0]), float(doc["center"][1])),
        height_z=float(doc["height"]),
        width_x=float(doc["width"]),
        depth_y=float(doc["depth"]),
        spacing_x=float(doc["spacing"][0]),
        spacing_y=float(doc["spacing"][1]),
    )
    return grid


def save_grid(grid: SensorGrid, path) -> None:
    from pathlib import Path

    Path(path).write_text(json.dumps(grid_to_dict(grid), indent=2) + "\n", encoding="utf-8")
