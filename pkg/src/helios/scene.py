"""Semantic scene model: triangle meshes with material assignments plus site metadata.

The interchange format is a single JSON document (see ``docs/scene-schema.md``
or the README). Units are meters and degrees; coordinates are right-handed,
Z-up, with +Y pointing to project north (reconciled to true north through
``Site.north_offset_deg``). Scenes are immutable after load and safe to share
across concurrent simulation jobs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any

import numpy as np

SCHEMA_VERSION = 1

MATERIAL_KINDS = ("plastic", "glass", "trans")

# Number of Radiance-style parameters per material kind, in Radiance order:
# plastic: r g b specularity roughness
# glass:   rt gt bt (transmissivity)
# trans:   r g b specularity roughness transmission transmitted-specularity
_PARAM_COUNT = {"plastic": 5, "glass": 3, "trans": 7}

MIN_TRIANGLE_AREA = 1e-12  # m^2, degeneracy threshold


class SceneError(Exception):
    """Base class for scene loading/validation failures."""


class SceneParseError(SceneError):
    """The document is not valid JSON or misses required structure."""


class SceneValidationError(SceneError):
    """The document parsed but violates a scene invariant."""


@dataclass(frozen=True)
class Site:
    """Geographic site: latitude (+N), longitude (+E), fixed UTC offset, north offset.

    ``north_offset_deg`` is the compass bearing of the model +Y axis in degrees
    clockwise from true north; 0 means +Y points at true north.
    """

    latitude: float
    longitude: float
    timezone_offset_hours: float
    north_offset_deg: float = 0.0


# Case-study default used by the CLI/service whenever no scene is loaded:
# downtown San Francisco, fixed UTC-8.
DEFAULT_SITE = Site(latitude=37.77, longitude=-122.42, timezone_offset_hours=-8.0)


@dataclass(frozen=True)
class Material:
    """Optical material: one of the supported Radiance primitive kinds.

    ``params`` holds the kind-specific reals in Radiance argument order
    (see ``_PARAM_COUNT``); every component is confined to [0, 1].
    """

    name: str
    kind: str
    params: tuple[float, ...]

    @property
    def blocks_direct(self) -> bool:
        """True when the material stops a shadow/visibility ray."""
        return self.kind == "plastic"

    @property
    def direct_transmission(self) -> float:
        """Scalar beam transmission used by shadow rays through glazing."""
        if self.kind == "glass":
            return float(sum(self.params[:3]) / 3.0)
        if self.kind == "trans":
            return float(self.params[5])
        return 0.0


@dataclass(eq=False)
class TriangleMesh:
    """Indexed triangle mesh bound to one material."""

    material_id: str
    vertices: np.ndarray  # (V, 3) float64, meters
    triangles: np.ndarray  # (F, 3) int64 vertex indices

    def __post_init__(self) -> None:
        self.vertices = np.asarray(self.vertices, dtype=np.float64).reshape(-1, 3)
        self.triangles = np.asarray(self.triangles, dtype=np.int64).reshape(-1, 3)

    def triangle_areas(self) -> np.ndarray:
        a = self.vertices[self.triangles[:, 0]]
        b = self.vertices[self.triangles[:, 1]]
        c = self.vertices[self.triangles[:, 2]]
        return 0.5 * np.linalg.norm(np.cross(b - a, c - a), axis=1)


@dataclass(eq=False)
class Scene:
    """A validated scene: meshes + material table + site. Immutable by convention."""

    meshes: list[TriangleMesh]
    materials: dict[str, Material]
    site: Site
    schema_version: int = SCHEMA_VERSION


def validate_scene(scene: Scene) -> None:
    """Check every scene invariant; raise SceneValidationError naming the first violation."""
    site = scene.site
    if not -90.0 <= site.latitude <= 90.0:
        raise SceneValidationError(f"latitude out of range: {site.latitude}")
    if not -180.0 <= site.longitude <= 180.0:
        raise SceneValidationError(f"longitude out of range: {site.longitude}")
    if not -14.0 <= site.timezone_offset_hours <= 14.0:
        raise SceneValidationError(
            f"timezone offset out of range: {site.timezone_offset_hours}"
        )
    if not scene.meshes:
        raise SceneValidationError("scene has no meshes")

    for mat in scene.materials.values():
        if mat.kind not in MATERIAL_KINDS:
            raise SceneValidationError(f"unknown material kind: {mat.kind!r}")
        expected = _PARAM_COUNT[mat.kind]
        if len(mat.params) != expected:
            raise SceneValidationError(
                f"material {mat.name!r}: expected {expected} params, got {len(mat.params)}"
            )
        for value in mat.params:
            if not (math.isfinite(value) and 0.0 <= value <= 1.0):
                raise SceneValidationError(
                    f"material {mat.name!r}: parameter out of range: {value}"
                )

    for index, mesh in enumerate(scene.meshes):
        if mesh.material_id not in scene.materials:
            raise SceneValidationError(f"unresolved material {mesh.material_id!r}")
        if mesh.triangles.size == 0:
            raise SceneValidationError(f"mesh {index} has no triangles")
        if not np.isfinite(mesh.vertices).all():
            raise SceneValidationError(f"mesh {index} has non-finite vertices")
        if mesh.triangles.min(initial=0) < 0 or (
            mesh.vertices.shape[0] and mesh.triangles.max(initial=-1) >= mesh.vertices.shape[0]
        ):
            raise SceneValidationError(f"mesh {index}: triangle index out of range")
        areas = mesh.triangle_areas()
        if (areas <= MIN_TRIANGLE_AREA).any():
            bad = int(np.argmax(areas <= MIN_TRIANGLE_AREA))
            raise SceneValidationError(f"mesh {index}: degenerate triangle {bad}")


def _material_from_dict(entry: dict[str, Any]) -> Material:
    try:
        name = entry["name"]
        kind = entry["kind"]
        raw = entry["params"]
    except (KeyError, TypeError) as exc:
        raise SceneParseError(f"malformed material entry: {entry!r}") from exc
    if kind not in MATERIAL_KINDS:
        raise SceneValidationError(f"unknown material kind: {kind!r}")
    try:
        if kind == "plastic":
            params = (*raw["reflectance"], raw["specularity"], raw["roughness"])
        elif kind == "glass":
            params = tuple(raw["transmissivity"])
        else:  # trans
            params = (
                *raw["reflectance"],
                raw["specularity"],
                raw["roughness"],
                raw["transmission"],
                raw["transmitted_specularity"],
            )
    except (KeyError, TypeError) as exc:
        raise SceneParseError(f"material {name!r}: missing parameter {exc}") from exc
    return Material(name=str(name), kind=kind, params=tuple(float(p) for p in params))


def _material_to_dict(mat: Material) -> dict[str, Any]:
    p = mat.params
    if mat.kind == "plastic":
        raw: dict[str, Any] = {
            "reflectance": list(p[0:3]),
            "specularity": p[3],
            "roughness": p[4],
        }
    elif mat.kind == "glass":
        raw = {"transmissivity": list(p[0:3])}
    else:
        raw = {
            "reflectance": list(p[0:3]),
            "specularity": p[3],
            "roughness": p[4],
            "transmission": p[5],
            "transmitted_specularity": p[6],
        }
    return {"name": mat.name, "kind": mat.kind, "params": raw}


def _triangulate_faces(faces: list[list[int]]) -> list[tuple[int, int, int]]:
    """Accept 3- or 4-index faces; quads are fan-split into two triangles."""
    out: list[tuple[int, int, int]] = []
    for face in faces:
        if len(face) == 3:
            out.append((face[0], face[1], face[2]))
        elif len(face) == 4:
            out.append((face[0], face[1], face[2]))
            out.append((face[0], face[2], face[3]))
        else:
            raise SceneParseError(f"face must have 3 or 4 indices, got {len(face)}")
    return out


def scene_from_dict(doc: dict[str, Any]) -> Scene:
    """Build and validate a Scene from a parsed JSON document."""
    if not isinstance(doc, dict):
        raise SceneParseError("scene document must be a JSON object")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SceneParseError(f"unsupported schema_version: {version!r}")
    try:
        site_doc = doc["site"]
        site = Site(
            latitude=float(site_doc["lat"]),
            longitude=float(site_doc["lon"]),
            timezone_offset_hours=float(site_doc["tz"]),
            north_offset_deg=float(site_doc.get("north_offset", 0.0)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SceneParseError(f"malformed site block: {exc}") from exc

    materials: dict[str, Material] = {}
    for entry in doc.get("materials", []):
        mat = _material_from_dict(entry)
        if mat.name in materials:
            raise SceneValidationError(f"duplicate material name: {mat.name!r}")
        materials[mat.name] = mat

    meshes: list[TriangleMesh] = []
    for entry in doc.get("meshes", []):
        try:
            vertices = np.asarray(entry["vertices"], dtype=np.float64)
            triangles = np.asarray(
                _triangulate_faces(entry["triangles"]), dtype=np.int64
            )
            mesh = TriangleMesh(
                material_id=str(entry["material"]),
                vertices=vertices,
                triangles=triangles,
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise SceneParseError(f"malformed mesh entry: {exc}") from exc
        meshes.append(mesh)

    scene = Scene(meshes=meshes, materials=materials, site=site)
    validate_scene(scene)
    return scene


def scene_to_dict(scene: Scene) -> dict[str, Any]:
    return {
        "schema_version": scene.schema_version,
        "site": {
            "lat": scene.site.latitude,
            "lon": scene.site.longitude,
            "tz": scene.site.timezone_offset_hours,
            "north_offset": scene.site.north_offset_deg,
        },
        "materials": [_material_to_dict(m) for m in scene.materials.values()],
        "meshes": [
            {
                "material": mesh.material_id,
                "vertices": mesh.vertices.tolist(),
                "triangles": mesh.triangles.tolist(),
            }
            for mesh in scene.meshes
        ],
    }


def load_scene(path: str | Path) -> Scene:
    """Load, parse and validate a scene JSON file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SceneParseError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SceneParseError(f"{path}: invalid JSON: {exc}") from exc
    return scene_from_dict(doc)


def save_scene(scene: Scene, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(scene_to_dict(scene), indent=2) + "\n", encoding="utf-8"
    )


def scene_bounds(scene: Scene) -> tuple[np.ndarray, np.ndarray]:
    """Axis-aligned bounding box over all mesh vertices: (min_xyz, max_xyz)."""
    mins = np.full(3, np.inf)
    maxs = np.full(3, -np.inf)
    for mesh in scene.meshes:
        if mesh.vertices.size:
            mins = np.minimum(mins, mesh.vertices.min(axis=0))
            maxs = np.maximum(maxs, mesh.vertices.max(axis=0))
    return mins, maxs


def empty_scene_like(scene: Scene) -> Scene:
    """Occluder-free copy sharing site and materials (unobstructed-sky runs).

    Bypasses the at-least-one-mesh load invariant on purpose: this is an
    internal construction, never a loadable document.
    """
    return Scene(
        meshes=[],
        materials=dict(scene.materials),
        site=replace(scene.site),
        schema_version=scene.schema_version,
    )
