"""Convex polyhedral gamut geometry: faces, bisectors, intersections.

The gamut is stored as outward unit-normal halfspaces plus the hull
vertices. Everything downstream (candidate enumeration, sampling,
projection) works off the face arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .colors import LabColor
from .convert import ADOBE_RGB_1998, RgbSpace, cube_corner_labs

#: |det| below this (after row normalization) counts as a singular triple.
SINGULAR_TOL = 1e-9

#: Default containment slack in Lab units.
CONTAINS_EPS = 1e-6

#: Coplanar hull facets are merged when their equations agree to this.
_FACE_MERGE_DECIMALS = 7


@dataclass(frozen=True)
class Plane:
    """Oriented plane {x : normal . x = offset} with a unit normal."""

    normal: tuple[float, float, float]
    offset: float
    kind: str = "plane"  # "bisector" | "face" | "plane"
    tag: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        n = np.asarray(self.normal, dtype=float)
        if abs(np.linalg.norm(n) - 1.0) > 1e-9:
            raise ValueError("plane normal must have unit length")

    def normal_array(self) -> np.ndarray:
        return np.asarray(self.normal, dtype=float)

    def signed_distance(self, point: LabColor) -> float:
        """normal . x - offset; positive on the outward side."""
        return float(np.dot(self.normal_array(), point.as_array()) - self.offset)


def bisector_plane(p: LabColor, q: LabColor, tag: tuple[int, ...] = ()) -> Plane:
    """Perpendicular bisector of two sites, normal pointing from p to q."""
    diff = q.as_array() - p.as_array()
    norm = float(np.linalg.norm(diff))
    if norm == 0.0:
        raise ValueError(f"degenerate sites: p == q == {p.as_tuple()}")
    n = diff / norm
    mid = 0.5 * (p.as_array() + q.as_array())
    return Plane(normal=tuple(n), offset=float(n @ mid), kind="bisector", tag=tag)


def intersect_three_planes(a: Plane, b: Plane, c: Plane) -> LabColor | None:
    """Common point of three planes, or None when the system is singular."""
    normals = np.array([a.normal, b.normal, c.normal], dtype=float)
    offsets = np.array([a.offset, b.offset, c.offset], dtype=float)
    # rows are unit-length by construction; guard anyway before the det test
    lengths = np.linalg.norm(normals, axis=1)
    normals = normals / lengths[:, None]
    offsets = offsets / lengths
    if abs(np.linalg.det(normals)) < SINGULAR_TOL:
        return None
    x = np.linalg.solve(normals, offsets)
    return LabColor(float(x[0]), float(x[1]), float(x[2]))


class Gamut:
    """Bounded convex polyhedron in Lab with outward-oriented faces."""

    def __init__(
        self,
        faces: Sequence[Plane],
        vertices: np.ndarray,
        corner_source: np.ndarray,
        name: str = "gamut",
    ):
        self.name = name
        self.faces = tuple(faces)
        self.vertices = np.array(vertices, dtype=float)
        self.corner_source = np.array(corner_source, dtype=float)
        self._face_normals = np.array([f.normal for f in self.faces], dtype=float)
        self._face_offsets = np.array([f.offset for f in self.faces], dtype=float)
        for arr in (self.vertices, self.corner_source,
                    self._face_normals, self._face_offsets):
            arr.setflags(write=False)

    @property
    def face_normals(self) -> np.ndarray:
        """(F, 3) outward unit normals."""
        return self._face_normals

    @property
    def face_offsets(self) -> np.ndarray:
        """(F,) plane offsets; inside means normal . x <= offset."""
        return self._face_offsets

    def contains(self, point: LabColor, eps: float = CONTAINS_EPS) -> bool:
        if eps < 0:
            raise ValueError("eps must be non-negative")
        x = point.as_array()
        return bool(np.all(self._face_normals @ x <= self._face_offsets + eps))

    def contains_many(self, points: np.ndarray, eps: float = CONTAINS_EPS) -> np.ndarray:
        """Vectorized containment test for an (n, 3) array."""
        points = np.asarray(points, dtype=float)
        slack = points @ self._face_normals.T - self._face_offsets
        return np.all(slack <= eps, axis=1)

    def centroid(self) -> LabColor:
        c = self.vertices.mean(axis=0)
        return LabColor(float(c[0]), float(c[1]), float(c[2]))

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def project(self, point: np.ndarray, max_sweeps: int = 200) -> np.ndarray:
        """Euclidean projection onto the polyhedron (Dykstra's algorithm).

        Returns the input unchanged when it is already inside.
        """
        x = np.asarray(point, dtype=float).copy()
        if bool(np.all(self._face_normals @ x <= self._face_offsets + 1e-12)):
            return x
        corrections = np.zeros((len(self.faces), 3))
        for _ in range(max_sweeps):
            moved = 0.0
            for i in range(len(self.faces)):
                n = self._face_normals[i]
                y = x + corrections[i]
                overshoot = float(n @ y - self._face_offsets[i])
                new_x = y - max(overshoot, 0.0) * n
                corrections[i] = y - new_x
                moved = max(moved, float(np.max(np.abs(new_x - x))))
                x = new_x
            if moved < 1e-12:
                break
        return x

    def nearest_boundary_point(self, point: np.ndarray) -> np.ndarray:
        """Closest boundary point for an interior point.

        Uses the minimum-slack face plane; exact except near edges, which
        is all the ballistic solver's tiny boundary charge needs.
        """
        x = np.asarray(point, dtype=float)
        slack = self._face_offsets - self._face_normals @ x
        i = int(np.argmin(slack))
        return x + slack[i] * self._face_normals[i]

    def __repr__(self) -> str:
        return (
            f"Gamut({self.name!r}, {len(self.vertices)} vertices, "
            f"{len(self.faces)} faces)"
        )


def build_gamut(
    corners: Iterable[LabColor] | np.ndarray, name: str = "custom"
) -> Gamut:
    """Convex hull of corner points as a Gamut.

    Raises ValueError for fewer than 4 points or (near-)coplanar input.
    """
    if isinstance(corners, np.ndarray):
        pts = np.asarray(corners, dtype=float)
    else:
        pts = np.array(
            [c.as_tuple() if isinstance(c, LabColor) else tuple(c) for c in corners],
            dtype=float,
        )
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise ValueError(f"expected (n, 3) corner coordinates, got {pts.shape}")
    if len(pts) < 4:
        raise ValueError(f"a gamut needs at least 4 corners, got {len(pts)}")
    try:
        hull = ConvexHull(pts)
    except QhullError as exc:
        raise ValueError(f"degenerate gamut corners (coplanar?): {exc}") from exc

    # merge coplanar facets: group by rounded equation, keep one unrounded
    # representative so hull vertices still satisfy the kept planes exactly
    rounded = np.round(hull.equations, _FACE_MERGE_DECIMALS)
    _, keep = np.unique(rounded, axis=0, return_index=True)
    faces = []
    for idx, i in enumerate(sorted(keep)):
        scale = float(np.linalg.norm(hull.equations[i, :3]))
        n = hull.equations[i, :3] / scale
        faces.append(
            Plane(
                normal=(float(n[0]), float(n[1]), float(n[2])),
                offset=float(-hull.equations[i, 3] / scale),
                kind="face",
                tag=(idx,),
            )
        )

    vertices = pts[hull.vertices]
    order = np.lexsort((vertices[:, 2], vertices[:, 1], vertices[:, 0]))
    return Gamut(faces=faces, vertices=vertices[order], corner_source=pts, name=name)


def default_gamut(space: RgbSpace = ADOBE_RGB_1998) -> Gamut:
    """Gamut spanned by the Lab images of the space's 8 RGB cube corners."""
    return build_gamut(cube_corner_labs(space), name=f"{space.name}-corners")


def sample_in_gamut(
    gamut: Gamut, n: int, rng: np.random.Generator, batch: int = 4096
) -> np.ndarray:
    """n points uniform in the gamut via rejection from the vertex box."""
    lo, hi = gamut.bounding_box()
    out = np.empty((n, 3))
    filled = 0
    while filled < n:
        draw = rng.uniform(lo, hi, size=(batch, 3))
        draw = draw[gamut.contains_many(draw, eps=0.0)]
        take = min(len(draw), n - filled)
        out[filled : filled + take] = draw[:take]
        filled += take
    return out
