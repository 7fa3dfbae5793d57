"""helios: headless daylighting analysis (sun position, sensor grids, metrics, heatmaps)."""

__version__ = "0.1.0"

from .scene import Scene, Site, Material, TriangleMesh, load_scene, save_scene, scene_bounds
from .solar import CivilInstant, SolarPosition, solar_position, snap_time, nine_point_matrix
from .grid import SensorGrid, make_grid, grid_to_sensor_lines
from .metrics import (
    HeatmapSpec,
    SimulationParams,
    SimulationResult,
    colorize,
    daylight_factor,
    illuminance_from_irradiance,
    point_in_time_illuminance,
)
from .sunpath import SunPathDiagram, build_diagram, classify_visibility

__all__ = [
    "Scene",
    "Site",
    "Material",
    "TriangleMesh",
    "load_scene",
    "save_scene",
    "scene_bounds",
    "CivilInstant",
    "SolarPosition",
    "solar_position",
    "snap_time",
    "nine_point_matrix",
    "SensorGrid",
    "make_grid",
    "grid_to_sensor_lines",
    "HeatmapSpec",
    "SimulationParams",
    "SimulationResult",
    "colorize",
    "daylight_factor",
    "illuminance_from_irradiance",
    "point_in_time_illuminance",
    "SunPathDiagram",
    "build_diagram",
    "classify_visibility",
    "__version__",
]
