from __future__ import annotations

import csv

import numpy as np
import pytest
from PIL import Image

from helios.grid import make_grid
from helios.metrics import (
    BACKEND_ORACLE,
    METRIC_DAYLIGHT_FACTOR,
    HeatmapSpec,
    SimulationResult,
    colorize,
)
from helios.report import (
    write_heatmap_figure,
    write_heatmap_png,
    write_sunpath_svg,
    write_values_csv,
)
from helios.sunpath import build_diagram

from .conftest import ground_plane_scene


@pytest.fixture
def df_result() -> SimulationResult:
    grid = make_grid((0.0, 0.0), 0.8, 3.0, 2.0, 1.0, 1.0)
    values = np.linspace(0.0, 10.0, grid.count)
    return SimulationResult(
        metric=METRIC_DAYLIGHT_FACTOR,
        grid=grid,
        values=values,
        backend=BACKEND_ORACLE,
        sky_kind="cie_overcast",
        instant=None,
    )


class TestHeatmapPng:
    def test_pixel_blocks_byte_exact(self, df_result, tmp_path):
        spec = HeatmapSpec(min=0.0, mid=5.0, max=10.0)
        path = write_heatmap_png(df_result, tmp_path / "map.png", spec, cell_px=4)
        image = Image.open(path).convert("RGB")
        nx, ny = df_result.grid.count_x, df_result.grid.count_y
        assert image.size == (nx * 4, ny * 4)
        expected = colorize(df_result.values, spec).reshape(ny, nx, 3)
        for j in range(ny):
            for i in range(nx):
                # row 0 of the grid is the bottom row of pixels
                px = image.getpixel((i * 4 + 2, (ny - 1 - j) * 4 + 2))
                assert px == tuple(expected[j, i])

    def test_first_sensor_blue_last_red(self, df_result, tmp_path):
        path = write_heatmap_png(df_result, tmp_path / "map.png", cell_px=2)
        image = Image.open(path).convert("RGB")
        assert image.getpixel((0, image.size[1] - 1)) == (0, 0, 255)
        assert image.getpixel((image.size[0] - 1, 0)) == (255, 0, 0)


class TestValuesCsv:
    def test_rows_match_sensors(self, df_result, tmp_path):
        path = write_values_csv(df_result, tmp_path / "values.csv")
        with path.open() as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["x", "y", "z", METRIC_DAYLIGHT_FACTOR, "r", "g", "b"]
        assert len(rows) - 1 == df_result.grid.count
        assert float(rows[1][3]) == 0.0
        assert [int(c) for c in rows[1][4:7]] == [0, 0, 255]

    def test_values_round_trip_exactly(self, df_result, tmp_path):
        path = write_values_csv(df_result, tmp_path / "values.csv")
        with path.open() as fh:
            rows = list(csv.reader(fh))[1:]
        parsed = np.array([float(r[3]) for r in rows])
        assert (parsed == df_result.values).all()


class TestFigures:
    def test_heatmap_figure_written(self, df_result, tmp_path):
        path = write_heatmap_figure(df_result, tmp_path / "figure.png")
        assert path.exists()
        assert path.stat().st_size > 0

    def test_sunpath_svg_written(self, tmp_path):
        diagram = build_diagram(ground_plane_scene(), np.array([0.0, 0.0, 1.5]), radius=10.0)
        path = write_sunpath_svg(diagram, tmp_path / "sunpath.svg")
        text = path.read_text()
        assert text.lstrip().startswith("<?xml")
        assert "<svg" in text
