from __future__ import annotations

import numpy as np
import pytest

from helios.scene import Material, Scene, Site, TriangleMesh

SF = Site(latitude=37.77, longitude=-122.42, timezone_offset_hours=-8.0)

WALL = Material("wall", "plastic", (0.5, 0.5, 0.5, 0.0, 0.0))
GLAZING = Material("glazing", "glass", (0.65, 0.65, 0.65))


def rect_mesh(material_id: str, p0, p1, p2, p3) -> TriangleMesh:
    """Two triangles covering the quad p0-p1-p2-p3 (given in ring order)."""
    return TriangleMesh(
        material_id=material_id,
        vertices=np.array([p0, p1, p2, p3], dtype=np.float64),
        triangles=np.array([[0, 1, 2], [0, 2, 3]]),
    )


def box_mesh(material_id: str, lo, hi) -> TriangleMesh:
    """Closed axis-aligned box (12 triangles)."""
    x0, y0, z0 = lo
    x1, y1, z1 = hi
    v = np.array(
        [
            [x0, y0, z0], [x1, y0, z0], [x1, y1, z0], [x0, y1, z0],
            [x0, y0, z1], [x1, y0, z1], [x1, y1, z1], [x0, y1, z1],
        ],
        dtype=np.float64,
    )
    quads = [
        (0, 1, 2, 3),  # floor
        (4, 5, 6, 7),  # ceiling
        (0, 1, 5, 4),  # y = y0
        (3, 2, 6, 7),  # y = y1
        (0, 3, 7, 4),  # x = x0
        (1, 2, 6, 5),  # x = x1
    ]
    tris = []
    for a, b, c, d in quads:
        tris.append([a, b, c])
        tris.append([a, c, d])
    return TriangleMesh(material_id=material_id, vertices=v, triangles=np.array(tris))


def wall_with_hole(material_id: str, width: float, height: float, hole) -> TriangleMesh:
    """Wall in the y=0 plane spanning x in [0, width], z in [0, height].

    ``hole`` = (x0, z0, x1, z1) cut out of it.
    """
    hx0, hz0, hx1, hz1 = hole
    vertices: list[list[float]] = []
    triangles: list[list[int]] = []

    def add_rect(x0, z0, x1, z1):
        if x1 - x0 <= 0 or z1 - z0 <= 0:
            return
        base = len(vertices)
        vertices.extend(
            [[x0, 0.0, z0], [x1, 0.0, z0], [x1, 0.0, z1], [x0, 0.0, z1]]
        )
        triangles.append([base, base + 1, base + 2])
        triangles.append([base, base + 2, base + 3])

    add_rect(0.0, 0.0, hx0, height)  # left strip
    add_rect(hx1, 0.0, width, height)  # right strip
    add_rect(hx0, 0.0, hx1, hz0)  # below hole
    add_rect(hx0, hz1, hx1, height)  # above hole
    return TriangleMesh(
        material_id=material_id,
        vertices=np.array(vertices, dtype=np.float64),
        triangles=np.array(triangles),
    )


def room_scene(
    width: float = 6.0,
    depth: float = 4.0,
    height: float = 3.0,
    window=None,
    glaze: bool = False,
    site: Site = SF,
) -> Scene:
    """Rectangular room; an optional window hole (x0, z0, x1, z1) in the south (y=0) wall."""
    meshes = [
        rect_mesh("wall", (0, 0, 0), (width, 0, 0), (width, depth, 0), (0, depth, 0)),
        rect_mesh(
            "wall", (0, 0, height), (width, 0, height), (width, depth, height), (0, depth, height)
        ),
        rect_mesh("wall", (0, depth, 0), (width, depth, 0), (width, depth, height), (0, depth, height)),
        rect_mesh("wall", (0, 0, 0), (0, depth, 0), (0, depth, height), (0, 0, height)),
        rect_mesh("wall", (width, 0, 0), (width, depth, 0), (width, depth, height), (width, 0, height)),
    ]
    materials = {"wall": WALL}
    if window is None:
        meshes.append(
            rect_mesh("wall", (0, 0, 0), (width, 0, 0), (width, 0, height), (0, 0, height))
        )
    else:
        meshes.append(wall_with_hole("wall", width, height, window))
        if glaze:
            x0, z0, x1, z1 = window
            meshes.append(
                rect_mesh("glazing", (x0, 0, z0), (x1, 0, z0), (x1, 0, z1), (x0, 0, z1))
            )
            materials = {"wall": WALL, "glazing": GLAZING}
    return Scene(meshes=meshes, materials=materials, site=site)


def sealed_box_scene(side: float = 4.0, site: Site = SF) -> Scene:
    return Scene(
        meshes=[box_mesh("wall", (0, 0, 0), (side, side, side))],
        materials={"wall": WALL},
        site=site,
    )


def ground_plane_scene(half_size: float = 50.0, site: Site = SF) -> Scene:
    s = half_size
    return Scene(
        meshes=[rect_mesh("wall", (-s, -s, 0), (s, -s, 0), (s, s, 0), (-s, s, 0))],
        materials={"wall": WALL},
        site=site,
    )


def unit_cube_scene_dict() -> dict:
    """Loadable JSON document: unit-cube room plus one glass pane."""
    return {
        "schema_version": 1,
        "site": {"lat": 37.77, "lon": -122.42, "tz": -8, "north_offset": 0.0},
        "materials": [
            {
                "name": "wall",
                "kind": "plastic",
                "params": {"reflectance": [0.5, 0.5, 0.5], "specularity": 0.0, "roughness": 0.0},
            },
            {"name": "glazing", "kind": "glass", "params": {"transmissivity": [0.65, 0.65, 0.65]}},
        ],
        "meshes": [
            {
                "material": "wall",
                "vertices": [
                    [0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0],
                    [0, 0, 1], [1, 0, 1], [1, 1, 1], [0, 1, 1],
                ],
                "triangles": [
                    [0, 1, 2, 3],
                    [4, 5, 6, 7],
                    [0, 3, 7, 4],
                    [1, 2, 6, 5],
                    [3, 2, 6, 7],
                ],
            },
            {
                "material": "glazing",
                "vertices": [[0.2, 0, 0.2], [0.8, 0, 0.2], [0.8, 0, 0.8], [0.2, 0, 0.8]],
                "triangles": [[0, 1, 2], [0, 2, 3]],
            },
        ],
    }


@pytest.fixture
def fixture_room() -> Scene:
    """6 x 4 x 3 m room with a 2 m-wide glazed south window."""
    return room_scene(window=(2.0, 0.5, 4.0, 2.5), glaze=True)


@pytest.fixture
def open_room() -> Scene:
    """Same room with an unglazed window opening."""
    return room_scene(window=(2.0, 0.5, 4.0, 2.5), glaze=False)


@pytest.fixture
def sealed_box() -> Scene:
    return sealed_box_scene()


@pytest.fixture
def ground_plane() -> Scene:
    return ground_plane_scene()
