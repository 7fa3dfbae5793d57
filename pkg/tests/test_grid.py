from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helios.grid import (
    GridError,
    SensorGrid,
    grid_from_dict,
    grid_to_dict,
    grid_to_sensor_lines,
    make_grid,
    parse_sensor_lines,
)


class TestMakeGrid:
    def test_five_by_five(self):
        grid = make_grid((0, 0), 0.8, 4.0, 4.0, 1.0, 1.0)
        assert grid.count_x == 5
        assert grid.count_y == 5
        assert grid.count == 25

    def test_dense_survey_configuration(self):
        # 0.6 m spacing at 0.8 m height over a 25 x 40 m hall
        grid = make_grid((12.5, 20.0), 0.8, 25.0, 40.0, 0.6, 0.6)
        assert grid.count_x == 42
        assert grid.count_y == 67
        assert grid.count == 2814

    def test_coarse_session_configuration(self):
        grid = make_grid((12.5, 20.0), 0.8, 25.0, 40.0, 1.0, 1.0)
        assert grid.count_x == 26
        assert grid.count_y == 41
        assert grid.count == 1066

    def test_symmetric_about_center(self):
        grid = make_grid((3.0, -2.0), 0.8, 4.0, 6.0, 1.0, 2.0)
        xs = grid.positions[:, 0]
        ys = grid.positions[:, 1]
        assert (xs.min() + xs.max()) / 2 == pytest.approx(3.0, abs=1e-12)
        assert (ys.min() + ys.max()) / 2 == pytest.approx(-2.0, abs=1e-12)

    def test_all_at_height(self):
        grid = make_grid((0, 0), 0.8, 4.0, 4.0, 1.0, 1.0)
        assert (grid.positions[:, 2] == 0.8).all()

    def test_row_major_ordering(self):
        grid = make_grid((0, 0), 0.0, 2.0, 2.0, 1.0, 1.0)
        # y-major: the first count_x sensors share the lowest y
        ys = grid.positions[: grid.count_x, 1]
        assert (ys == ys[0]).all()
        xs = grid.positions[: grid.count_x, 0]
        assert (np.diff(xs) > 0).all()

    def test_directions_up(self):
        grid = make_grid((0, 0), 0.8, 4.0, 4.0, 1.0, 1.0)
        assert (grid.directions == np.array([0.0, 0.0, 1.0])).all(axis=None)

    def test_rejects_non_positive(self):
        with pytest.raises(GridError, match="width_x"):
            make_grid((0, 0), 0.8, 0.0, 4.0, 1.0, 1.0)
        with pytest.raises(GridError, match="spacing_y"):
            make_grid((0, 0), 0.8, 4.0, 4.0, 1.0, -1.0)

    def test_rejects_spacing_beyond_extent(self):
        with pytest.raises(GridError, match="exceeds"):
            make_grid((0, 0), 0.8, 4.0, 4.0, 5.0, 1.0)

    def test_never_silently_flips_negative_extent(self):
        with pytest.raises(GridError):
            make_grid((0, 0), 0.8, -4.0, 4.0, 1.0, 1.0)

    def test_count_formula_robust_to_float_ratio(self):
        grid = make_grid((0, 0), 0.8, 4.0, 4.0, 0.8, 0.8)
        # 4 / 0.8 evaluates just below 5 in binary; the count must still be 6
        assert grid.count_x == 6


class TestSensorLines:
    def test_single_sensor_exact(self):
        grid = SensorGrid(
            center_xy=(0.0, 0.0),
            height_z=0.8,
            width_x=1.0,
            depth_y=1.0,
            spacing_x=1.0,
            spacing_y=1.0,
            positions=np.array([[0.0, 0.0, 0.8]]),
        )
        assert grid_to_sensor_lines(grid) == "0 0 0.8 0 0 1\n"

    def test_two_sensor_order(self):
        grid = SensorGrid(
            center_xy=(0.5, 0.0),
            height_z=0.8,
            width_x=1.0,
            depth_y=1.0,
            spacing_x=1.0,
            spacing_y=1.0,
            positions=np.array([[0.0, 0.0, 0.8], [1.0, 0.0, 0.8]]),
        )
        assert grid_to_sensor_lines(grid) == "0 0 0.8 0 0 1\n1 0 0.8 0 0 1\n"

    def test_round_trip_five_by_five(self):
        grid = make_grid((0.3, -1.7), 0.8, 4.0, 4.0, 1.0, 1.0)
        text = grid_to_sensor_lines(grid)
        assert text.endswith("\n")
        assert len(text.splitlines()) == 25
        positions, directions = parse_sensor_lines(text)
        assert np.abs(positions - grid.positions).max() < 1e-9
        assert (directions == np.array([0.0, 0.0, 1.0])).all()

    def test_parse_rejects_short_line(self):
        with pytest.raises(GridError, match="expected 6 fields"):
            parse_sensor_lines("0 0 0.8 0 0\n")

    @given(
        cx=st.floats(-100, 100),
        cy=st.floats(-100, 100),
        height=st.floats(0.0, 3.0),
        width=st.floats(0.5, 50),
        depth=st.floats(0.5, 50),
        sx=st.floats(0.1, 0.5),
        sy=st.floats(0.1, 0.5),
    )
    @settings(max_examples=50, deadline=None)
    def test_round_trip_property(self, cx, cy, height, width, depth, sx, sy):
        grid = make_grid((cx, cy), height, width, depth, sx, sy)
        positions, _ = parse_sensor_lines(grid_to_sensor_lines(grid))
        assert positions.shape == grid.positions.shape
        assert np.abs(positions - grid.positions).max() < 1e-9


class TestGridDict:
    def test_dict_round_trip(self):
        grid = make_grid((1.0, 2.0), 0.8, 6.0, 4.0, 0.5, 1.0)
        doc = grid_to_dict(grid)
        back = grid_from_dict(doc)
        assert back.count == grid.count
        assert np.allclose(back.positions, grid.positions)
