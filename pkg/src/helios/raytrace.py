"""Ray / triangle-mesh intersection for visibility and shadow tests.

Möller–Trumbore, vectorized over (rays x triangles). Scenes stay small enough
that a linear scan over all triangles beats maintaining an acceleration
structure; swap in a BVH behind the same interface if that stops being true.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass

import numpy as np

from .scene import Material, Scene

MIN_HIT_DISTANCE = 1e-6  # m; ignores self-intersection at the ray origin
_DET_EPS = 1e-12


@dataclass(eq=False)
class TriangleSet:
    """Scene triangles flattened into arrays, each row tagged with its material."""

    v0: np.ndarray  # (T, 3)
    edge1: np.ndarray  # (T, 3)
    edge2: np.ndarray  # (T, 3)
    materials: list[Material]  # per triangle

    @classmethod
    def from_scene(cls, scene: Scene) -> "TriangleSet":
        v0s, e1s, e2s, mats = [], [], [], []
        for mesh in scene.meshes:
            mat = scene.materials[mesh.material_id]
            a = mesh.vertices[mesh.triangles[:, 0]]
            b = mesh.vertices[mesh.triangles[:, 1]]
            c = mesh.vertices[mesh.triangles[:, 2]]
            v0s.append(a)
            e1s.append(b - a)
            e2s.append(c - a)
            mats.extend([mat] * len(mesh.triangles))
        if v0s:
            v0 = np.vstack(v0s)
            e1 = np.vstack(e1s)
            e2 = np.vstack(e2s)
        else:
            v0 = np.zeros((0, 3))
            e1 = np.zeros((0, 3))
            e2 = np.zeros((0, 3))
        return cls(v0=v0, edge1=e1, edge2=e2, materials=mats)

    def __len__(self) -> int:
        return self.v0.shape[0]

    def intersect_distances(self, origin: np.ndarray, directions: np.ndarray) -> np.ndarray:
        """Hit distances for each (ray, triangle) pair; +inf where there is no hit.

        ``directions`` is (R, 3) of unit vectors; the result is (R, T).
        """
        directions = np.atleast_2d(np.asarray(directions, dtype=np.float64))
        origin = np.asarray(origin, dtype=np.float64)
        if len(self) == 0:
            return np.full((directions.shape[0], 0), np.inf)

        d = directions[:, None, :]  # (R, 1, 3)
        pvec = np.cross(d, self.edge2[None, :, :])  # (R, T, 3)
        det = np.einsum("rtk,tk->rt", pvec, self.edge1)
        with np.errstate(divide="ignore", invalid="ignore"):
            inv_det = np.where(np.abs(det) > _DET_EPS, 1.0 / det, 0.0)
            tvec = origin[None, None, :] - self.v0[None, :, :]
            u = np.einsum("rtk,rtk->rt", tvec, pvec) * inv_det
            qvec = np.cross(tvec, self.edge1[None, :, :])
            v = np.einsum("rtk,rtk->rt", d, qvec) * inv_det
            t = np.einsum("tk,rtk->rt", self.edge2, qvec) * inv_det

        valid = (
            (np.abs(det) > _DET_EPS)
            & (u >= 0.0)
            & (v >= 0.0)
            & (u + v <= 1.0)
            & (t > MIN_HIT_DISTANCE)
        )
        return np.where(valid, t, np.inf)

    def blocked(self, origin: np.ndarray, directions: np.ndarray) -> np.ndarray:
        """Per-ray mask: True when an opaque triangle lies along the ray."""
        hits = np.isfinite(self.intersect_distances(origin, directions))
        opaque = np.fromiter(
            (m.blocks_direct for m in self.materials), dtype=bool, count=len(self)
        )
        return (hits & opaque[None, :]).any(axis=1)

    def beam_transmission(self, origin: np.ndarray, direction: np.ndarray) -> float:
        """Product of glazing transmissions along a ray; 0 if anything opaque blocks.

        Hits at indistinguishable distances collapse to one crossing: a ray
        grazing the shared edge of a quad's two triangles is one surface.
        """
        dist = self.intersect_distances(origin, np.asarray(direction)[None, :])[0]
        hit_idx = np.nonzero(np.isfinite(dist))[0]
        hit_idx = hit_idx[np.argsort(dist[hit_idx])]
        factor = 1.0
        last_d = -np.inf
        for idx in hit_idx:
            mat = self.materials[idx]
            if mat.blocks_direct:
                return 0.0
            d = dist[idx]
            if d - last_d > 1e-9:
                factor *= mat.direct_transmission
            last_d = d
        return factor


_cache: "weakref.WeakKeyDictionary[Scene, TriangleSet]" = weakref.WeakKeyDictionary()


def triangle_set(scene: Scene) -> TriangleSet:
    """Per-scene cached TriangleSet (scenes are immutable after load)."""
    try:
        return _cache[scene]
    except KeyError:
        ts = TriangleSet.from_scene(scene)
        _cache[scene] = ts
        return ts


def ray_hits(
    scene: Scene, origin: np.ndarray, direction: np.ndarray
) -> list[tuple[float, str]]:
    """All intersections along a unit ray, as (distance, material kind), ascending."""
    ts = triangle_set(scene)
    distances = ts.intersect_distances(origin, np.asarray(direction)[None, :])[0]
    order = np.argsort(distances)
    return [
        (float(distances[i]), ts.materials[i].kind)
        for i in order
        if np.isfinite(distances[i])
    ]
