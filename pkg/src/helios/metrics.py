"""Daylighting metrics and the three-color heatmap mapping.

Two metrics are produced from raw per-sensor radiometry: point-in-time
illuminance under a CIE clear sky, and Daylight Factor (percent) under a CIE
overcast sky. The Daylight Factor denominator comes from an identical
backend run on an unobstructed scene so backend bias cancels out of the ratio.
"""

from __future__ import annotations

import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from . import oracle as oracle_mod
from . import radiance as radiance_mod
from .grid import SensorGrid
from .oracle import OracleConfig
from .radiance import SKY_CIE_CLEAR, SKY_CIE_OVERCAST, IrradianceTriple, RadianceJob, SkyModel
from .raytrace import triangle_set
from .scene import Scene, empty_scene_like
from .solar import CivilInstant, solar_position

METRIC_ILLUMINANCE = "illuminance_lux"
METRIC_DAYLIGHT_FACTOR = "daylight_factor_percent"

BACKEND_ORACLE = "oracle"
BACKEND_RADIANCE = "radiance"

# Radiance RGB-to-photopic weights; together with the 179 lm/W efficacy they
# convert an irradiance triple into illuminance.
_RGB_WEIGHTS = (0.265, 0.670, 0.065)

DF_DEFAULT_RANGE = (0.0, 10.0)

# Anchor colors of the heatmap gradient.
COLOR_MIN = (0, 0, 255)
COLOR_MID = (255, 255, 0)
COLOR_MAX = (255, 0, 0)


class MetricsError(Exception):
    """Raised for invalid metric inputs or failed backend runs."""


@dataclass(frozen=True)
class SimulationParams:
    """Backend selection plus every knob that affects a simulation run."""

    backend: str = BACKEND_ORACLE
    ambient_bounces: int = 2
    ambient_divisions: int = 1024
    ambient_samples: int = 256
    ambient_accuracy: float = 0.15
    ambient_resolution: int = 128
    sky_patches: int = 145
    zenith_luminance: float = 8000.0
    workdir: str | None = None
    radiance_bin: str | None = None

    def __post_init__(self) -> None:
        if self.backend not in (BACKEND_ORACLE, BACKEND_RADIANCE):
            raise MetricsError(f"unknown backend: {self.backend!r}")
        if self.ambient_bounces < 0:
            raise MetricsError("ambient_bounces must be >= 0")
        if self.zenith_luminance <= 0:
            raise MetricsError("zenith_luminance must be positive")


@dataclass(eq=False)
class SimulationResult:
    """Per-sensor metric values plus the run metadata needed to replot them."""

    metric: str
    grid: SensorGrid
    values: np.ndarray  # (N,) float64, sensor order
    backend: str
    sky_kind: str
    instant: CivilInstant | None

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=np.float64).reshape(-1)
        if self.values.shape[0] != self.grid.count:
            raise MetricsError(
                f"{self.values.shape[0]} values for {self.grid.count} sensors"
            )
        if (self.values < 0.0).any():
            raise MetricsError("metric values must be non-negative")


@dataclass(frozen=True)
class HeatmapSpec:
    """Value-to-color range: blue at min, yellow at mid, red at max."""

    min: float
    mid: float
    max: float

    def __post_init__(self) -> None:
        if not self.min < self.max:
            raise MetricsError(f"heatmap range requires min < max, got [{self.min}, {self.max}]")
        if not self.min <= self.mid <= self.max:
            raise MetricsError(f"heatmap mid {self.mid} outside [{self.min}, {self.max}]")

    @classmethod
    def from_range(cls, lo: float, hi: float, mid: float | None = None) -> "HeatmapSpec":
        return cls(min=lo, mid=(lo + hi) / 2.0 if mid is None else mid, max=hi)


def default_heatmap_spec(result: SimulationResult) -> HeatmapSpec:
    """DF defaults to the 0-10 band; illuminance auto-ranges on observed values."""
    if result.metric == METRIC_DAYLIGHT_FACTOR:
        return HeatmapSpec.from_range(*DF_DEFAULT_RANGE)
    lo = float(result.values.min()) if result.values.size else 0.0
    hi = float(result.values.max()) if result.values.size else 1.0
    if not hi > lo:
        hi = lo + 1.0  # flat field (e.g. sealed room): degenerate range, all-blue map
    return HeatmapSpec.from_range(lo, hi)


def illuminance_from_irradiance(triple: IrradianceTriple) -> float:
    """Photometric conversion: 179 * (0.265 r + 0.670 g + 0.065 b) lux."""
    for c in (triple.r, triple.g, triple.b):
        if c < 0.0:
            raise MetricsError(f"negative irradiance component: {c}")
    wr, wg, wb = _RGB_WEIGHTS
    return radiance_mod.LUMINOUS_EFFICACY * (
        wr * triple.r + wg * triple.g + wb * triple.b
    )


def colorize(values: np.ndarray, spec: HeatmapSpec) -> np.ndarray:
    """Map values to RGB via the piecewise-linear blue-yellow-red gradient.

    Returns (N, 3) uint8. Values clamp to the end colors; the three anchors
    are hit bit-exactly.
    """
    values = np.asarray(values, dtype=np.float64).reshape(-1)
    out = np.empty((values.shape[0], 3), dtype=np.uint8)
    for i, v in enumerate(values):
        if v <= spec.min:
            out[i] = COLOR_MIN
        elif v >= spec.max:
            out[i] = COLOR_MAX
        elif v == spec.mid:
            out[i] = COLOR_MID
        elif v < spec.mid:
            t = (v - spec.min) / (spec.mid - spec.min)
            out[i] = (
                int(255.0 * t + 0.5),
                int(255.0 * t + 0.5),
                int(255.0 * (1.0 - t) + 0.5),
            )
        else:
            t = (v - spec.mid) / (spec.max - spec.mid)
            out[i] = (255, int(255.0 * (1.0 - t) + 0.5), 0)
    return out


def _oracle_overcast_values(
    scene: Scene, positions: np.ndarray, directions: np.ndarray, params: SimulationParams
) -> np.ndarray:
    config = OracleConfig(sky_patches=params.sky_patches)
    tris = triangle_set(scene)
    return np.array(
        [
            oracle_mod.overcast_sky_illuminance(
                scene, pos, d, params.zenith_luminance, config, tris
            )
            for pos, d in zip(positions, directions)
        ]
    )


def _oracle_clear_values(
    scene: Scene, positions: np.ndarray, directions: np.ndarray,
    instant: CivilInstant, params: SimulationParams,
) -> np.ndarray:
    sun = solar_position(scene.site, instant)
    tris = triangle_set(scene)
    return np.array(
        [
            oracle_mod.direct_illuminance(scene, pos, d, sun, tris)
            for pos, d in zip(positions, directions)
        ]
    )


def _radiance_values(
    scene: Scene, grid: SensorGrid, sky: SkyModel, params: SimulationParams, tag: str
) -> np.ndarray:
    base = Path(params.workdir) if params.workdir else Path(tempfile.mkdtemp(prefix="helios-"))
    job = RadianceJob(
        scene=scene,
        sky=sky,
        grid=grid,
        workdir=base / tag,
        ambient_bounces=params.ambient_bounces,
        ambient_divisions=params.ambient_divisions,
        ambient_samples=params.ambient_samples,
        ambient_accuracy=params.ambient_accuracy,
        ambient_resolution=params.ambient_resolution,
        bin_dir=params.radiance_bin,
    )
    triples = radiance_mod.run_rtrace(job)
    return np.array([illuminance_from_irradiance(t) for t in triples])


def _single_sensor_grid(height: float) -> SensorGrid:
    return SensorGrid(
        center_xy=(0.0, 0.0),
        height_z=height,
        width_x=1.0,
        depth_y=1.0,
        spacing_x=1.0,
        spacing_y=1.0,
        positions=np.array([[0.0, 0.0, height]]),
    )


_unobstructed_cache: dict[tuple, float] = {}


def clear_unobstructed_cache() -> None:
    _unobstructed_cache.clear()


def _unobstructed_overcast(scene: Scene, sky: SkyModel, params: SimulationParams, height: float) -> float:
    """Open-sky horizontal illuminance under the same sky/params, cached."""
    if params.backend == BACKEND_ORACLE:
        key: tuple = (BACKEND_ORACLE, params.sky_patches, params.zenith_luminance)
        if key not in _unobstructed_cache:
            _unobstructed_cache[key] = oracle_mod.unobstructed_overcast_illuminance(
                params.zenith_luminance, OracleConfig(sky_patches=params.sky_patches)
            )
        return _unobstructed_cache[key]

    site = scene.site
    key = (
        BACKEND_RADIANCE,
        sky.kind,
        sky.instant.isoformat(),
        sky.zenith_luminance,
        sky.ground_reflectance,
        site.latitude,
        site.longitude,
        site.timezone_offset_hours,
        params.ambient_bounces,
        params.ambient_divisions,
        params.ambient_samples,
        params.ambient_accuracy,
        params.ambient_resolution,
    )
    if key not in _unobstructed_cache:
        empty = empty_scene_like(scene)
        values = _radiance_values(
            empty, _single_sensor_grid(height), sky, params, tag="unobstructed"
        )
        _unobstructed_cache[key] = float(values[0])
    return _unobstructed_cache[key]


def daylight_factor(
    scene: Scene,
    grid: SensorGrid,
    params: SimulationParams | None = None,
    instant: CivilInstant | None = None,
) -> SimulationResult:
    """Daylight Factor (percent) for every grid sensor.

    The overcast sky is forced. DF = 100 * E_obstructed / E_unobstructed with
    both sides produced by the same backend and parameters.
    """
    params = params or SimulationParams()
    instant = instant or CivilInstant(2021, 6, 21, 12, 0.0)
    sky = SkyModel(
        kind=SKY_CIE_OVERCAST,
        instant=instant,
        zenith_luminance=params.zenith_luminance if params.backend == BACKEND_RADIANCE else None,
    )
    if params.backend == BACKEND_ORACLE:
        obstructed = _oracle_overcast_values(scene, grid.positions, grid.directions, params)
    else:
        obstructed = _radiance_values(scene, grid, sky, params, tag="scene")
    unobstructed = _unobstructed_overcast(scene, sky, params, grid.height_z)
    if unobstructed <= 0.0:
        raise MetricsError("unobstructed sky illuminance is zero; sky emission failed")
    return SimulationResult(
        metric=METRIC_DAYLIGHT_FACTOR,
        grid=grid,
        values=100.0 * obstructed / unobstructed,
        backend=params.backend,
        sky_kind=SKY_CIE_OVERCAST,
        instant=instant,
    )


def point_in_time_illuminance(
    scene: Scene,
    grid: SensorGrid,
    instant: CivilInstant,
    params: SimulationParams | None = None,
) -> SimulationResult:
    """Per-sensor illuminance (lux) under a CIE clear sky at the given instant."""
    params = params or SimulationParams()
    sun = solar_position(scene.site, instant)
    if not sun.above_horizon:
        raise MetricsError(
            f"sun below horizon at {instant.isoformat()} (altitude {sun.altitude_deg:.2f} deg)"
        )
    if params.backend == BACKEND_ORACLE:
        values = _oracle_clear_values(scene, grid.positions, grid.directions, instant, params)
    else:
        sky = SkyModel(kind=SKY_CIE_CLEAR, instant=instant)
        values = _radiance_values(scene, grid, sky, params, tag="scene")
    return SimulationResult(
        metric=METRIC_ILLUMINANCE,
        grid=grid,
        values=values,
        backend=params.backend,
        sky_kind=SKY_CIE_CLEAR,
        instant=instant,
    )


def result_to_dict(result: SimulationResult, spec: HeatmapSpec | None = None) -> dict[str, Any]:
    """Result JSON payload: values plus the active heatmap spec and colors."""
    spec = spec or default_heatmap_spec(result)
    colors = colorize(result.values, spec)
    return {
        "metric": result.metric,
        "backend": result.backend,
        "sky": result.sky_kind,
        "instant": None
        if result.instant is None
        else {
            "year": result.instant.year,
            "month": result.instant.month,
            "day": result.instant.day,
            "hour": result.instant.hour,
            "minute": result.instant.minute,
        },
        "grid": {
            "center": list(result.grid.center_xy),
            "height": result.grid.height_z,
            "width": result.grid.width_x,
            "depth": result.grid.depth_y,
            "spacing": [result.grid.spacing_x, result.grid.spacing_y],
            "count_x": result.grid.count_x,
            "count_y": result.grid.count_y,
            "positions": result.grid.positions.tolist(),
        },
        "values": result.values.tolist(),
        "spec": {"min": spec.min, "mid": spec.mid, "max": spec.max},
        "colors": colors.tolist(),
    }


def result_from_dict(doc: dict[str, Any]) -> tuple[SimulationResult, HeatmapSpec]:
    g = doc["grid"]
    grid = SensorGrid(
        center_xy=(float(g["center"][0]), float(g["center"][1])),
        height_z=float(g["height"]),
        width_x=float(g["width"]),
        depth_y=float(g["depth"]),
        spacing_x=float(g["spacing"][0]),
        spacing_y=float(g["spacing"][1]),
        positions=np.asarray(g["positions"], dtype=np.float64),
    )
    instant_doc = doc.get("instant")
    instant = (
        CivilInstant(
            instant_doc["year"],
            instant_doc["month"],
            instant_doc["day"],
            instant_doc["hour"],
            instant_doc["minute"],
        )
        if instant_doc
        else None
    )
    result = SimulationResult(
        metric=doc["metric"],
        grid=grid,
        values=np.asarray(doc["values"], dtype=np.float64),
        backend=doc.get("backend", BACKEND_ORACLE),
        sky_kind=doc.get("sky", SKY_CIE_OVERCAST),
        instant=instant,
    )
    s = doc["spec"]
    return result, HeatmapSpec(min=float(s["min"]), mid=float(s["mid"]), max=float(s["max"]))
