"""Embedded direct-sun / overcast-sky simulator.

Dependency-free reference backend: direct solar illuminance with shadow rays,
and overcast-sky illuminance integrated over a Tregenza-style patch
subdivision of the hemisphere. Useful as a fast preview when no external
raytracer is installed, and as the ground truth the raytracing pipeline is
checked against. Interreflection is deliberately out of scope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .raytrace import TriangleSet, triangle_set
from .scene import Scene
from .solar import SolarPosition

# Tregenza hemisphere: 7 altitude bands of 12 degrees plus a zenith cap.
_TREGENZA_AZ_COUNTS = (30, 30, 24, 24, 18, 12, 6)
_BAND_DEG = 12.0

# Clear-sky direct normal illuminance in lux as a function of solar altitude.
# Self-consistent preview model, not a calibrated irradiance product.
_DNI_LUX = 127_500.0
_DNI_EXTINCTION = 0.21


@dataclass(frozen=True)
class OracleConfig:
    """Tuning knobs for the reference simulator."""

    sky_patches: int = 145

    def __post_init__(self) -> None:
        if self.sky_patches < 1:
            raise ValueError("sky_patches must be >= 1")


def direct_normal_illuminance(altitude_deg: float) -> float:
    """Beam illuminance at normal incidence; zero at or below the horizon."""
    if altitude_deg <= 0.0:
        return 0.0
    return _DNI_LUX * math.exp(-_DNI_EXTINCTION / math.sin(math.radians(altitude_deg)))


def _subdivision_factor(requested_patches: int) -> int:
    """Smallest row-subdivision factor whose patch count reaches the request."""
    m = 1
    while 144 * m * m + 1 < requested_patches:
        m += 1
    return m


def sky_patches(count: int = 145) -> tuple[np.ndarray, np.ndarray]:
    """Hemisphere patch centers and solid angles: (directions (N,3), omegas (N,)).

    Rows follow the Tregenza band layout, subdivided uniformly until the patch
    count reaches ``count`` (145, 577, 2305, ... are the exact sizes). Patch
    solid angles are exact band integrals, so they always sum to 2*pi.
    """
    m = _subdivision_factor(count)
    row_height = _BAND_DEG / m
    directions: list[tuple[float, float, float]] = []
    omegas: list[float] = []
    for band, base_count in enumerate(_TREGENZA_AZ_COUNTS):
        for sub in range(m):
            alt_lo = band * _BAND_DEG + sub * row_height
            alt_hi = alt_lo + row_height
            alt_c = math.radians(0.5 * (alt_lo + alt_hi))
            n_az = base_count * m
            d_az = 2.0 * math.pi / n_az
            omega = d_az * (math.sin(math.radians(alt_hi)) - math.sin(math.radians(alt_lo)))
            cos_alt, sin_alt = math.cos(alt_c), math.sin(alt_c)
            for j in range(n_az):
                az = (j + 0.5) * d_az
                directions.append(
                    (math.sin(az) * cos_alt, math.cos(az) * cos_alt, sin_alt)
                )
                omegas.append(omega)
    # Zenith cap: the region above the last band, a single patch.
    cap_lo = len(_TREGENZA_AZ_COUNTS) * _BAND_DEG
    directions.append((0.0, 0.0, 1.0))
    omegas.append(2.0 * math.pi * (1.0 - math.sin(math.radians(cap_lo))))
    return np.asarray(directions, dtype=np.float64), np.asarray(omegas, dtype=np.float64)


def overcast_patch_luminances(zenith_luminance: float, directions: np.ndarray) -> np.ndarray:
    """CIE overcast luminance L(theta) = Lz * (1 + 2 cos theta) / 3 at patch centers."""
    cos_zenith_angle = directions[:, 2]
    return zenith_luminance * (1.0 + 2.0 * cos_zenith_angle) / 3.0


def direct_illuminance(
    scene: Scene,
    sensor_position: np.ndarray,
    sensor_direction: np.ndarray,
    sun: SolarPosition,
    tris: TriangleSet | None = None,
) -> float:
    """Direct beam illuminance at one sensor, lux.

    Zero when the sun is below the horizon or an opaque surface blocks the
    shadow ray; glazing along the ray attenuates by its beam transmission.
    """
    if sun.altitude_deg <= 0.0:
        return 0.0
    sensor_direction = np.asarray(sensor_direction, dtype=np.float64)
    cos_incidence = float(np.dot(sun.sun_direction, sensor_direction))
    if cos_incidence <= 0.0:
        return 0.0
    tris = tris if tris is not None else triangle_set(scene)
    transmission = tris.beam_transmission(
        np.asarray(sensor_position, dtype=np.float64), sun.sun_direction
    )
    if transmission <= 0.0:
        return 0.0
    return direct_normal_illuminance(sun.altitude_deg) * cos_incidence * transmission


def overcast_sky_illuminance(
    scene: Scene,
    sensor_position: np.ndarray,
    sensor_direction: np.ndarray,
    zenith_luminance: float,
    config: OracleConfig | None = None,
    tris: TriangleSet | None = None,
) -> float:
    """Overcast-sky illuminance at one sensor, lux.

    Sums patch luminance x solid angle x incidence cosine over the visible
    patches; visibility is a binary center-ray test where only opaque
    (plastic) hits block.
    """
    config = config or OracleConfig()
    sensor_direction = np.asarray(sensor_direction, dtype=np.float64)
    if sensor_direction[2] <= 0.0:
        raise ValueError("overcast oracle expects an upward-facing sensor")
    directions, omegas = sky_patches(config.sky_patches)
    luminances = overcast_patch_luminances(zenith_luminance, directions)
    cosines = directions @ sensor_direction
    weights = luminances * omegas * np.clip(cosines, 0.0, None)

    tris = tris if tris is not None else triangle_set(scene)
    if len(tris):
        blocked = tris.blocked(np.asarray(sensor_position, dtype=np.float64), directions)
        weights = np.where(blocked, 0.0, weights)
    return float(weights.sum())


def unobstructed_overcast_illuminance(
    zenith_luminance: float, config: OracleConfig | None = None
) -> float:
    """Patch-integrated horizontal illuminance under the open overcast sky."""
    config = config or OracleConfig()
    directions, omegas = sky_patches(config.sky_patches)
    luminances = overcast_patch_luminances(zenith_luminance, directions)
    return float((luminances * omegas * directions[:, 2]).sum())


def closed_form_overcast_illuminance(zenith_luminance: float) -> float:
    """Exact integral of the CIE overcast distribution over the hemisphere."""
    return 7.0 * math.pi / 9.0 * zenith_luminance
