from __future__ import annotations

import numpy as np
import pytest

from helios.raytrace import MIN_HIT_DISTANCE, ray_hits, triangle_set
from helios.scene import Scene, Site

from .conftest import WALL, box_mesh, rect_mesh, sealed_box_scene
from .reference import brute_force_ray_hits


def unit_cube() -> Scene:
    return Scene(
        meshes=[box_mesh("wall", (0, 0, 0), (1, 1, 1))],
        materials={"wall": WALL},
        site=Site(0, 0, 0),
    )


class TestRayHits:
    def test_through_cube_face_distance(self):
        scene = unit_cube()
        hits = ray_hits(scene, np.array([0.5, 0.5, -1.0]), np.array([0.0, 0.0, 1.0]))
        assert hits
        # nearest hit is the z=0 floor plane, exactly 1 m away
        assert hits[0][0] == pytest.approx(1.0, abs=1e-12)
        assert hits[0][1] == "plastic"
        # and the ray exits through the ceiling at 2 m
        assert hits[-1][0] == pytest.approx(2.0, abs=1e-12)

    def test_parallel_outside_plane_misses(self):
        scene = Scene(
            meshes=[rect_mesh("wall", (0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0))],
            materials={"wall": WALL},
            site=Site(0, 0, 0),
        )
        hits = ray_hits(scene, np.array([0.0, 0.0, 1.0]), np.array([1.0, 0.0, 0.0]))
        assert hits == []

    def test_origin_on_surface_not_self_hit(self):
        scene = unit_cube()
        hits = ray_hits(scene, np.array([0.5, 0.5, 0.0]), np.array([0.0, 0.0, 1.0]))
        distances = [d for d, _ in hits]
        assert all(d > MIN_HIT_DISTANCE for d in distances)

    def test_material_kind_reported(self, fixture_room):
        # straight out the glazed window from inside
        hits = ray_hits(
            fixture_room, np.array([3.0, 2.0, 1.5]), np.array([0.0, -1.0, 0.0])
        )
        kinds = [k for _, k in hits]
        assert "glass" in kinds

    def test_matches_brute_force_on_random_rays(self, fixture_room):
        rng = np.random.default_rng(42)
        for _ in range(1000):
            origin = rng.uniform((-1, -1, -1), (7, 5, 4))
            direction = rng.normal(size=3)
            direction /= np.linalg.norm(direction)
            fast = ray_hits(fixture_room, origin, direction)
            slow = brute_force_ray_hits(fixture_room, origin, direction)
            assert len(fast) == len(slow)
            for (df, kf), (ds, ks) in zip(fast, slow):
                assert df == pytest.approx(ds, rel=1e-9)
                assert kf == ks

    def test_empty_scene_never_hits(self):
        scene = Scene(meshes=[], materials={}, site=Site(0, 0, 0))
        assert ray_hits(scene, np.zeros(3), np.array([0.0, 0.0, 1.0])) == []


class TestTriangleSet:
    def test_blocked_mask_opaque_only(self, fixture_room):
        ts = triangle_set(fixture_room)
        origin = np.array([3.0, 2.0, 1.5])
        dirs = np.array(
            [
                [0.0, -1.0, 0.0],  # out the glazed window: glass only
                [0.0, 1.0, 0.0],  # into the north wall
            ]
        )
        blocked = ts.blocked(origin, dirs)
        assert not blocked[0]
        assert blocked[1]

    def test_beam_transmission_through_glass(self, fixture_room):
        ts = triangle_set(fixture_room)
        tr = ts.beam_transmission(np.array([3.0, 2.0, 1.5]), np.array([0.0, -1.0, 0.0]))
        assert tr == pytest.approx(0.65)

    def test_beam_transmission_blocked(self):
        ts = triangle_set(sealed_box_scene())
        tr = ts.beam_transmission(np.array([2.0, 2.0, 2.0]), np.array([0.0, 0.0, 1.0]))
        assert tr == 0.0

    def test_cached_per_scene(self, fixture_room):
        assert triangle_set(fixture_room) is triangle_set(fixture_room)
