"""Observer-centered sun-path diagram: monthly arcs, hourly analemmas, visibility.

Each arc follows one representative day from sunrise to sunset (10-minute
steps, terminal samples pinned to the horizon crossings); each analemma holds
one sample per representative day at a fixed civil hour. Every sample carries
a direct-sun visibility flag: rays toward the sun are traced against the
scene, with glazing counted transparent.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from .raytrace import triangle_set
from .scene import Scene
from .solar import (
    DEFAULT_YEAR,
    CivilInstant,
    SolarPosition,
    representative_days,
    solar_position,
)

VIS_VISIBLE = "visible"
VIS_BLOCKED = "blocked"
VIS_BELOW_HORIZON = "below_horizon"

WINTER_RGB = (0, 0, 255)
SUMMER_RGB = (255, 165, 0)

ARC_STEP_MINUTES = 10.0
_CROSSING_TOL_MINUTES = 0.01


@dataclass(frozen=True)
class SunSample:
    """One diagram sample: instant, sun angles, diagram point, visibility flag."""

    instant: CivilInstant
    altitude_deg: float
    azimuth_deg: float
    direction: tuple[float, float, float]
    point: tuple[float, float, float]
    visibility: str


@dataclass(eq=False)
class MonthArc:
    month: int
    day: int
    color: tuple[int, int, int]
    samples: list[SunSample]


@dataclass(eq=False)
class HourAnalemma:
    hour: int
    samples: list[SunSample]


@dataclass(eq=False)
class SunPathDiagram:
    observer: np.ndarray
    radius: float
    arcs: list[MonthArc]
    analemmas: list[HourAnalemma]
    year: int
    strict_days: bool


def classify_visibility(
    scene: Scene, observer: np.ndarray, direction: np.ndarray
) -> str:
    """Direct-sun visibility of a unit direction from the observer.

    Below the horizon when the direction points downward; otherwise blocked
    iff an opaque (plastic) triangle intersects the ray. Glass and trans hits
    never block the direct-sun indicator.
    """
    direction = np.asarray(direction, dtype=np.float64)
    if direction[2] < 0.0:
        return VIS_BELOW_HORIZON
    ts = triangle_set(scene)
    if ts.blocked(np.asarray(observer, dtype=np.float64), direction[None, :])[0]:
        return VIS_BLOCKED
    return VIS_VISIBLE


def arc_color(declination: float, decl_min: float, decl_max: float, latitude: float) -> tuple[int, int, int]:
    """Season color for an arc: local-winter blue to local-summer orange.

    Linear RGB interpolation parameterized by the day's declination, scaled so
    the extreme representative days land exactly on the anchor colors. In the
    southern hemisphere the mapping flips: the June arc is the winter (blue) one.
    """
    if decl_max == decl_min:
        s = 1.0
    else:
        s = (declination - decl_min) / (decl_max - decl_min)
    if latitude < 0.0:
        s = 1.0 - s
    return tuple(
        int(round(w + s * (u - w))) for w, u in zip(WINTER_RGB, SUMMER_RGB)
    )


def _instant_at_minutes(year: int, month: int, day: int, minutes: float) -> CivilInstant:
    minutes = min(max(minutes, 0.0), 1439.999)
    hour = int(minutes // 60.0)
    return CivilInstant(year, month, day, hour, minutes - hour * 60.0)


def _altitude_at(scene_site, year, month, day, minutes: float) -> float:
    return solar_position(
        scene_site, _instant_at_minutes(year, month, day, minutes)
    ).altitude_deg


def _bisect_crossing(site, year, month, day, lo: float, hi: float) -> float:
    """Minute-of-day of the horizon crossing within [lo, hi].

    Returns the above-horizon side of the bracket, so terminal arc samples
    sit at a slightly positive altitude rather than flickering below zero.
    """
    f_lo = _altitude_at(site, year, month, day, lo)
    while hi - lo > _CROSSING_TOL_MINUTES:
        mid = 0.5 * (lo + hi)
        f_mid = _altitude_at(site, year, month, day, mid)
        if (f_lo <= 0.0) == (f_mid <= 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return lo if f_lo > 0.0 else hi


def daylight_window(site, year: int, month: int, day: int) -> tuple[float, float] | None:
    """(sunrise, sunset) in minutes of the civil day, or None in polar night.

    Polar day yields the full (0, 1440) window. Uses the refraction-corrected
    altitude, so the window edges match the visible horizon crossings.
    """
    step = ARC_STEP_MINUTES
    grid = np.arange(0.0, 1440.0 + step, step)
    alts = [_altitude_at(site, year, month, day, min(m, 1439.999)) for m in grid]
    above = [a > 0.0 for a in alts]
    if not any(above):
        return None
    if all(above):
        return 0.0, 1440.0
    # First rising edge, then the falling edge after it.
    rise = None
    for i in range(len(grid) - 1):
        if not above[i] and above[i + 1]:
            rise = _bisect_crossing(site, year, month, day, grid[i], grid[i + 1])
            break
    fall = None
    for i in range(len(grid) - 1):
        if above[i] and not above[i + 1]:
            fall = _bisect_crossing(site, year, month, day, grid[i], grid[i + 1])
            if rise is not None and fall > rise:
                break
    if rise is None:  # sun already up at midnight; arc starts at day begin
        rise = 0.0
    if fall is None or fall <= rise:
        fall = 1440.0
    return rise, fall


def _sample(
    scene: Scene,
    observer: np.ndarray,
    radius: float,
    instant: CivilInstant,
    position: SolarPosition | None = None,
) -> SunSample:
    pos = position or solar_position(scene.site, instant)
    direction = pos.sun_direction
    point = observer + radius * direction
    if pos.altitude_deg <= 0.0:
        vis = VIS_BELOW_HORIZON
    else:
        vis = classify_visibility(scene, observer, direction)
    return SunSample(
        instant=instant,
        altitude_deg=pos.altitude_deg,
        azimuth_deg=pos.azimuth_deg,
        direction=tuple(direction.tolist()),
        point=tuple(point.tolist()),
        visibility=vis,
    )


def build_diagram(
    scene: Scene,
    observer: np.ndarray,
    radius: float,
    *,
    year: int = DEFAULT_YEAR,
    strict_days: bool = False,
) -> SunPathDiagram:
    """Assemble arcs and analemmas around an observer point."""
    if not radius > 0.0:
        raise ValueError(f"radius must be positive, got {radius}")
    observer = np.asarray(observer, dtype=np.float64)
    if not np.isfinite(observer).all():
        raise ValueError("observer must be finite")

    site = scene.site
    days = representative_days(strict=strict_days)

    declinations = {
        (m, d): solar_position(site, CivilInstant(year, m, d, 12, 0.0)).declination_deg
        for m, d in days
    }
    decl_min = min(declinations.values())
    decl_max = max(declinations.values())

    arcs: list[MonthArc] = []
    for month, day in days:
        window = daylight_window(site, year, month, day)
        samples: list[SunSample] = []
        if window is not None:
            rise, fall = window
            minutes = list(np.arange(rise, fall, ARC_STEP_MINUTES))
            if not minutes or minutes[-1] < fall:
                minutes.append(fall)
            for m in minutes:
                samples.append(
                    _sample(scene, observer, radius, _instant_at_minutes(year, month, day, m))
                )
        arcs.append(
            MonthArc(
                month=month,
                day=day,
                color=arc_color(declinations[(month, day)], decl_min, decl_max, site.latitude),
                samples=samples,
            )
        )

    analemmas: list[HourAnalemma] = []
    for hour in range(24):
        samples = []
        any_up = False
        for month, day in days:
            s = _sample(scene, observer, radius, CivilInstant(year, month, day, hour, 0.0))
            any_up = any_up or s.altitude_deg > 0.0
            samples.append(s)
        if any_up:
            analemmas.append(HourAnalemma(hour=hour, samples=samples))

    return SunPathDiagram(
        observer=observer,
        radius=float(radius),
        arcs=arcs,
        analemmas=analemmas,
        year=year,
        strict_days=strict_days,
    )


def _sample_to_dict(s: SunSample) -> dict[str, Any]:
    return {
        "time": {
            "year": s.instant.year,
            "month": s.instant.month,
            "day": s.instant.day,
            "hour": s.instant.hour,
            "minute": s.instant.minute,
        },
        "altitude": s.altitude_deg,
        "azimuth": s.azimuth_deg,
        "direction": list(s.direction),
        "point": list(s.point),
        "visibility": s.visibility,
    }


def diagram_to_dict(diagram: SunPathDiagram) -> dict[str, Any]:
    return {
        "observer": diagram.observer.tolist(),
        "radius": diagram.radius,
        "year": diagram.year,
        "strict_days": diagram.strict_days,
        "arcs": [
            {
                "month": arc.month,
                "day": arc.day,
                "color": list(arc.color),
                "samples": [_sample_to_dict(s) for s in arc.samples],
            }
            for arc in diagram.arcs
        ],
        "analemmas": [
            {
                "hour": an.hour,
                "samples": [_sample_to_dict(s) for s in an.samples],
            }
            for an in diagram.analemmas
        ],
    }


def save_diagram(diagram: SunPathDiagram, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(diagram_to_dict(diagram), indent=2) + "\n", encoding="utf-8"
    )
