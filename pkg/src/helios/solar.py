"""Sun position and time navigation.

Positions follow the NOAA solar calculator chain (derived from Meeus):
Julian day -> Julian century -> geometric mean longitude/anomaly ->
equation of center -> apparent longitude -> corrected obliquity ->
declination and equation of time -> true solar time -> hour angle ->
zenith/azimuth, with NOAA's piecewise atmospheric refraction correction
applied to altitudes above -1 degrees.

Times are civil clock times with a fixed UTC offset; no DST is applied.
Azimuth is measured clockwise from true north in degrees, in [0, 360).
"""

from __future__ import annotations

import datetime as dt
import math
from dataclasses import dataclass, replace

import numpy as np

from .scene import Site

DEFAULT_YEAR = 2021

SNAP_OFF = "off"
SNAP_HOUR = "hour"
SNAP_DAY = "day"
SNAP_BOTH = "both"
SNAP_MODES = (SNAP_OFF, SNAP_HOUR, SNAP_DAY, SNAP_BOTH)

# Days standing in for their month in sun-path work. April is absent from the
# source list; day 20 keeps the declination spacing of its neighbours.
_REPRESENTATIVE_DAYS = (
    (1, 21),
    (2, 18),
    (3, 20),
    (4, 20),
    (5, 21),
    (6, 21),
    (7, 21),
    (8, 23),
    (9, 22),
    (10, 22),
    (11, 21),
    (12, 22),
)

SUMMER_SOLSTICE = (6, 21)
EQUINOX = (3, 20)
WINTER_SOLSTICE = (12, 22)


class InvalidInstantError(ValueError):
    """The civil date/time fields do not form a valid instant."""


@dataclass(frozen=True)
class CivilInstant:
    """Civil clock time at the site (no DST). Minutes may be fractional."""

    year: int
    month: int
    day: int
    hour: int
    minute: float = 0.0

    def __post_init__(self) -> None:
        try:
            dt.date(self.year, self.month, self.day)
        except ValueError as exc:
            raise InvalidInstantError(str(exc)) from exc
        if not 0 <= self.hour < 24:
            raise InvalidInstantError(f"hour out of range: {self.hour}")
        if not 0 <= self.minute < 60:
            raise InvalidInstantError(f"minute out of range: {self.minute}")

    @property
    def day_fraction(self) -> float:
        """Local time as a fraction of the civil day."""
        return (self.hour + self.minute / 60.0) / 24.0

    @property
    def decimal_hour(self) -> float:
        return self.hour + self.minute / 60.0

    def to_datetime(self) -> dt.datetime:
        whole = int(self.minute)
        seconds = (self.minute - whole) * 60.0
        return dt.datetime(self.year, self.month, self.day, self.hour, whole) + dt.timedelta(
            seconds=seconds
        )

    @classmethod
    def from_datetime(cls, value: dt.datetime) -> "CivilInstant":
        return cls(
            value.year,
            value.month,
            value.day,
            value.hour,
            value.minute + value.second / 60.0 + value.microsecond / 6e7,
        )

    def isoformat(self) -> str:
        return self.to_datetime().isoformat(timespec="minutes")


@dataclass(eq=False)
class SolarPosition:
    """Sun position for one site and instant.

    ``altitude_deg`` includes the refraction correction; ``zenith_deg`` is its
    exact complement. ``sun_direction`` is the unit vector from the observer
    toward the sun in scene coordinates (model north offset applied).
    """

    altitude_deg: float
    azimuth_deg: float
    zenith_deg: float
    declination_deg: float
    equation_of_time_min: float
    sun_direction: np.ndarray

    @property
    def above_horizon(self) -> bool:
        return self.altitude_deg > 0.0


def julian_day(instant: CivilInstant, tz_offset_hours: float) -> float:
    """Julian day number for a civil instant with a fixed UTC offset."""
    year, month = instant.year, instant.month
    day = instant.day + instant.day_fraction - tz_offset_hours / 24.0
    if month <= 2:
        year -= 1
        month += 12
    a = year // 100
    b = 2 - a + a // 4
    return (
        math.floor(365.25 * (year + 4716))
        + math.floor(30.6001 * (month + 1))
        + day
        + b
        - 1524.5
    )


def _sun_geometry(jc: float) -> tuple[float, float]:
    """Declination (deg) and equation of time (minutes) at a Julian century."""
    mean_long = (280.46646 + jc * (36000.76983 + jc * 0.0003032)) % 360.0
    mean_anom = 357.52911 + jc * (35999.05029 - 0.0001537 * jc)
    eccentricity = 0.016708634 - jc * (0.000042037 + 0.0000001267 * jc)
    eq_center = (
        math.sin(math.radians(mean_anom))
        * (1.914602 - jc * (0.004817 + 0.000014 * jc))
        + math.sin(math.radians(2 * mean_anom)) * (0.019993 - 0.000101 * jc)
        + math.sin(math.radians(3 * mean_anom)) * 0.000289
    )
    true_long = mean_long + eq_center
    omega = math.radians(125.04 - 1934.136 * jc)
    apparent_long = true_long - 0.00569 - 0.00478 * math.sin(omega)
    mean_obliq = 23.0 + (
        26.0 + (21.448 - jc * (46.815 + jc * (0.00059 - jc * 0.001813))) / 60.0
    ) / 60.0
    obliq = mean_obliq + 0.00256 * math.cos(omega)
    declination = math.degrees(
        math.asin(math.sin(math.radians(obliq)) * math.sin(math.radians(apparent_long)))
    )
    var_y = math.tan(math.radians(obliq / 2.0)) ** 2
    ml = math.radians(mean_long)
    ma = math.radians(mean_anom)
    eot = 4.0 * math.degrees(
        var_y * math.sin(2 * ml)
        - 2 * eccentricity * math.sin(ma)
        + 4 * eccentricity * var_y * math.sin(ma) * math.cos(2 * ml)
        - 0.5 * var_y * var_y * math.sin(4 * ml)
        - 1.25 * eccentricity * eccentricity * math.sin(2 * ma)
    )
    return declination, eot


def _refraction_deg(elevation_deg: float) -> float:
    """NOAA piecewise atmospheric refraction; zero at or below -1 deg."""
    if elevation_deg <= -1.0:
        return 0.0
    if elevation_deg > 85.0:
        return 0.0
    tan_e = math.tan(math.radians(elevation_deg))
    if elevation_deg > 5.0:
        arcsec = 58.1 / tan_e - 0.07 / tan_e**3 + 0.000086 / tan_e**5
    elif elevation_deg > -0.575:
        e = elevation_deg
        arcsec = 1735.0 + e * (-518.2 + e * (103.4 + e * (-12.79 + e * 0.711)))
    else:
        arcsec = -20.772 / tan_e
    return arcsec / 3600.0


def sun_direction_from_angles(
    altitude_deg: float, azimuth_deg: float, north_offset_deg: float = 0.0
) -> np.ndarray:
    """Unit vector toward the sun in model coordinates (Z-up).

    ``north_offset_deg`` is the compass bearing of the model +Y axis; the
    azimuth is remapped into the model frame before projection.
    """
    az = math.radians(azimuth_deg - north_offset_deg)
    alt = math.radians(altitude_deg)
    cos_alt = math.cos(alt)
    return np.array(
        [math.sin(az) * cos_alt, math.cos(az) * cos_alt, math.sin(alt)], dtype=np.float64
    )


def solar_position(site: Site, instant: CivilInstant) -> SolarPosition:
    """Sun altitude/azimuth (and supporting terms) for a site and civil instant."""
    jd = julian_day(instant, site.timezone_offset_hours)
    jc = (jd - 2451545.0) / 36525.0
    declination, eot = _sun_geometry(jc)

    minutes_local = instant.day_fraction * 1440.0
    true_solar_min = (
        minutes_local + eot + 4.0 * site.longitude - 60.0 * site.timezone_offset_hours
    ) % 1440.0
    hour_angle = true_solar_min / 4.0 - 180.0

    lat = math.radians(site.latitude)
    decl = math.radians(declination)
    ha = math.radians(hour_angle)
    cos_zenith = math.sin(lat) * math.sin(decl) + math.cos(lat) * math.cos(decl) * math.cos(ha)
    cos_zenith = min(1.0, max(-1.0, cos_zenith))
    zenith = math.degrees(math.acos(cos_zenith))
    elevation = 90.0 - zenith

    denom = math.cos(lat) * math.sin(math.radians(zenith))
    if abs(denom) < 1e-12:
        azimuth = 180.0 if site.latitude >= 0 else 0.0  # sun at zenith/nadir or pole
    else:
        cos_az = (math.sin(lat) * cos_zenith - math.sin(decl)) / denom
        cos_az = min(1.0, max(-1.0, cos_az))
        az_acos = math.degrees(math.acos(cos_az))
        if hour_angle > 0.0:
            azimuth = (az_acos + 180.0) % 360.0
        else:
            azimuth = (540.0 - az_acos) % 360.0

    altitude = elevation + _refraction_deg(elevation)
    return SolarPosition(
        altitude_deg=altitude,
        azimuth_deg=azimuth,
        zenith_deg=90.0 - altitude,
        declination_deg=declination,
        equation_of_time_min=eot,
        sun_direction=sun_direction_from_angles(
            altitude, azimuth, site.north_offset_deg
        ),
    )


def solar_noon(site: Site, year: int, month: int, day: int) -> CivilInstant:
    """Civil clock time of solar noon for the given date."""
    noon_guess = CivilInstant(year, month, day, 12, 0.0)
    jc = (julian_day(noon_guess, site.timezone_offset_hours) - 2451545.0) / 36525.0
    _, eot = _sun_geometry(jc)
    noon_min = 720.0 - 4.0 * site.longitude - eot + 60.0 * site.timezone_offset_hours
    noon_min %= 1440.0
    hour = int(noon_min // 60.0)
    return CivilInstant(year, month, day, hour, noon_min - hour * 60.0)


def representative_days(strict: bool = False) -> list[tuple[int, int]]:
    """(month, day) pairs anchoring the monthly sun-path arcs.

    Default mode covers all 12 months; strict mode drops the April entry and
    returns the verbatim 11-day list.
    """
    if strict:
        return [(m, d) for m, d in _REPRESENTATIVE_DAYS if m != 4]
    return list(_REPRESENTATIVE_DAYS)


def nine_point_matrix(site: Site | None = None, year: int = DEFAULT_YEAR) -> list[CivilInstant]:
    """The nine canonical study instants: solstices + equinox x {9h, 12h, 15h}.

    Ordered season-major (summer solstice, equinox, winter solstice), then by
    hour. ``site`` is accepted for interface symmetry; the instants are civil
    clock times and do not depend on it.
    """
    del site
    days = (SUMMER_SOLSTICE, EQUINOX, WINTER_SOLSTICE)
    return [
        CivilInstant(year, month, day, hour, 0.0)
        for month, day in days
        for hour in (9, 12, 15)
    ]


def _nearest_21st(date: dt.date) -> dt.date:
    """The 21st closest to ``date`` by day distance; ties go to the later month."""
    candidates = []
    for months_back in (-1, 0, 1):
        month = date.month + months_back
        year = date.year
        if month == 0:
            month, year = 12, year - 1
        elif month == 13:
            month, year = 1, year + 1
        candidates.append(dt.date(year, month, 21))
    best = min(candidates, key=lambda c: (abs((c - date).days), -c.toordinal()))
    return best


def snap_time(instant: CivilInstant, mode: str) -> CivilInstant:
    """Round an instant onto the hour/day navigation lattice.

    hour: nearest whole hour, halves round up. day: the 21st of the nearest
    month (ties to the later month), clock time preserved. both: day then
    hour. off: identity.
    """
    if mode not in SNAP_MODES:
        raise ValueError(f"unknown snap mode: {mode!r}")
    if mode == SNAP_OFF:
        return instant
    result = instant
    if mode in (SNAP_DAY, SNAP_BOTH):
        target = _nearest_21st(dt.date(result.year, result.month, result.day))
        result = replace(result, year=target.year, month=target.month, day=target.day)
    if mode in (SNAP_HOUR, SNAP_BOTH):
        base = dt.datetime(result.year, result.month, result.day, result.hour)
        if result.minute >= 30.0:
            base += dt.timedelta(hours=1)
        result = CivilInstant(base.year, base.month, base.day, base.hour, 0.0)
    return result


def step_time(instant: CivilInstant, *, hours: int = 0, days: int = 0) -> CivilInstant:
    """Shift by whole hours (date wraps) or whole days (clock preserved)."""
    minute = instant.minute
    base = dt.datetime(instant.year, instant.month, instant.day, instant.hour)
    base += dt.timedelta(hours=hours, days=days)
    return CivilInstant(base.year, base.month, base.day, base.hour, minute)


def _adjacent_21st(date: dt.date, forward: bool) -> dt.date:
    """Closest 21st at-or-after (forward) / at-or-before (backward) ``date``."""
    if forward:
        if date.day <= 21:
            return dt.date(date.year, date.month, 21)
        month, year = date.month + 1, date.year
        if month == 13:
            month, year = 1, year + 1
        return dt.date(year, month, 21)
    if date.day >= 21:
        return dt.date(date.year, date.month, 21)
    month, year = date.month - 1, date.year
    if month == 0:
        month, year = 12, year - 1
    return dt.date(year, month, 21)


def step_snapped(instant: CivilInstant, mode: str, axis: str, delta: int) -> CivilInstant:
    """Step along one time axis, then snap directionally onto the active lattice.

    With snapping on, a step moves to the adjacent lattice point in the
    direction of travel (hour: next/previous whole hour; day: next/previous
    21st), so repeated steps walk hour-by-hour or month-by-month. The other
    axis, when mode is ``both``, snaps by the nearest rule.
    """
    if mode not in SNAP_MODES:
        raise ValueError(f"unknown snap mode: {mode!r}")
    if axis not in ("hour", "day"):
        raise ValueError(f"unknown step axis: {axis!r}")
    stepped = step_time(
        instant,
        hours=delta if axis == "hour" else 0,
        days=delta if axis == "day" else 0,
    )
    if mode == SNAP_OFF or delta == 0:
        return stepped if mode == SNAP_OFF else snap_time(stepped, mode)
    forward = delta > 0

    result = stepped
    if axis == "day" and mode in (SNAP_DAY, SNAP_BOTH):
        target = _adjacent_21st(dt.date(result.year, result.month, result.day), forward)
        result = replace(result, year=target.year, month=target.month, day=target.day)
        if mode == SNAP_BOTH:
            result = snap_time(result, SNAP_HOUR)
        return result
    if axis == "hour" and mode in (SNAP_HOUR, SNAP_BOTH):
        if result.minute > 0.0:
            base = dt.datetime(result.year, result.month, result.day, result.hour)
            if forward:
                base += dt.timedelta(hours=1)
            result = CivilInstant(base.year, base.month, base.day, base.hour, 0.0)
        if mode == SNAP_BOTH:
            result = snap_time(result, SNAP_DAY)
        return result
    return snap_time(result, mode)
