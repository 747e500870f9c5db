"""Exact single-color maximin search by candidate-vertex enumeration.

The point of the gamut that maximizes the minimal Euclidean distance to a
site set lies on the intersection of three planes drawn from the site
bisectors and the gamut faces. Enumerating every 3-subset of that plane
pool yields a finite candidate list that provably contains the global
optimum, so scoring the list solves the single-color problem exactly under
CIE76.

Most triple intersections are incidental: their planes are not active
constraints at the point (the bisector's sites are not among its nearest
sites). Candidates whose equidistant-nearest sites and incident gamut
faces pin them in all three directions are the vertices of the clipped
Voronoi structure - the only points that can be local maximin optima.
These carry ``active=True``, and the CIEDE2000-based selection considers
only them; incidental intersections would otherwise win on the second
metric with points that are not maximin-locked at all.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .colors import (
    DeltaE2000Weights,
    LabColor,
    MAP_WEIGHTS,
    Palette,
    delta_e2000_matrix,
    delta_e76_matrix,
)
from .geometry import CONTAINS_EPS, Gamut, Plane, SINGULAR_TOL, bisector_plane

#: Coordinates are rounded to this many decimals when collapsing the many
#: plane triples that regenerate the same geometric vertex.
DEDUP_DECIMALS = 6

#: Objectives differing by less than this count as tied.
TIE_TOL = 1e-9

#: Slack below which a site distance or face is considered active.
ACTIVE_TOL = 1e-6


class SolverError(RuntimeError):
    """No usable candidate or feasible solution was produced."""


@dataclass(frozen=True)
class CandidatePoint:
    """A candidate optimum with its generating planes and scores.

    ``active`` marks vertices of the clipped Voronoi structure: the
    candidate's equidistant nearest sites plus its incident gamut faces
    span three independent plane constraints.
    """

    point: LabColor
    generators: tuple[Plane, Plane, Plane]
    min_de76: float
    nearest_index: int
    min_de00: float
    active: bool = True


@dataclass(frozen=True)
class GreedyStep:
    """One added color and its minima against everything placed before it."""

    name: str
    color: LabColor
    min_de76: float
    min_de00: float


@dataclass(frozen=True)
class SolutionSet:
    """m new colors plus the achieved maximin objectives."""

    colors: tuple[LabColor, ...]
    method: str
    achieved_min_de76: float
    achieved_min_de00: float
    steps: tuple[GreedyStep, ...] = ()
    seed: int | None = None
    converged: bool = True


def _plane_pool(
    palette: Palette | None, gamut: Gamut
) -> tuple[np.ndarray, np.ndarray, list[Plane]]:
    planes: list[Plane] = []
    if palette is not None:
        colors = palette.colors
        for i, j in itertools.combinations(range(len(colors)), 2):
            planes.append(bisector_plane(colors[i], colors[j], tag=(i, j)))
    planes.extend(gamut.faces)
    normals = np.array([p.normal for p in planes], dtype=float)
    offsets = np.array([p.offset for p in planes], dtype=float)
    return normals, offsets, planes


class _CandidateArrays:
    """Vectorized candidate pipeline shared by the solvers."""

    def __init__(
        self,
        palette: Palette | None,
        gamut: Gamut,
        weights: DeltaE2000Weights,
    ):
        normals, offsets, planes = _plane_pool(palette, gamut)
        self.planes = planes
        n = len(planes)
        if n < 3:
            self.points = np.empty((0, 3))
            self.triples = np.empty((0, 3), dtype=np.intp)
            self.min76 = np.empty(0)
            self.min00 = np.empty(0)
            self.nearest = np.empty(0, dtype=np.intp)
            self.active = np.empty(0, dtype=bool)
            return

        idx = np.array(list(itertools.combinations(range(n), 3)), dtype=np.intp)
        n0, n1, n2 = normals[idx[:, 0]], normals[idx[:, 1]], normals[idx[:, 2]]
        cross12 = np.cross(n1, n2)
        det = np.einsum("ij,ij->i", n0, cross12)
        solvable = np.abs(det) > SINGULAR_TOL
        idx = idx[solvable]
        # Cramer's rule over all non-singular triples at once
        d0 = offsets[idx[:, 0], None]
        d1 = offsets[idx[:, 1], None]
        d2 = offsets[idx[:, 2], None]
        pts = (
            d0 * cross12[solvable]
            + d1 * np.cross(n2[solvable], n0[solvable])
            + d2 * np.cross(n0[solvable], n1[solvable])
        ) / det[solvable, None]

        inside = gamut.contains_many(pts, eps=CONTAINS_EPS)
        pts = pts[inside]
        idx = idx[inside]
        if len(pts):
            _, keep = np.unique(
                np.round(pts, DEDUP_DECIMALS), axis=0, return_index=True
            )
            keep = np.sort(keep)
            pts = pts[keep]
            idx = idx[keep]

        if palette is not None and len(pts):
            sites = palette.lab_array()
            d76 = delta_e76_matrix(pts, sites)
            nearest = np.argmin(d76, axis=1)
            min76 = d76[np.arange(len(pts)), nearest]
            min00 = delta_e2000_matrix(pts, sites, weights).min(axis=1)
            n_equidistant = (d76 <= min76[:, None] + ACTIVE_TOL).sum(axis=1)
        else:
            nearest = np.full(len(pts), -1, dtype=np.intp)
            min76 = np.full(len(pts), np.inf)
            min00 = np.full(len(pts), np.inf)
            n_equidistant = np.ones(len(pts), dtype=np.intp)

        face_slack = gamut.face_offsets - pts @ gamut.face_normals.T
        n_faces = (np.abs(face_slack) <= ACTIVE_TOL).sum(axis=1)
        self.points = pts
        self.triples = idx
        self.min76 = min76
        self.min00 = min00
        self.nearest = nearest
        self.active = (n_equidistant - 1) + n_faces >= 3

    def __len__(self) -> int:
        return len(self.points)

    def make_candidate(self, i: int) -> CandidatePoint:
        gens = tuple(self.planes[j] for j in self.triples[i])
        return CandidatePoint(
            point=LabColor(*(float(v) for v in self.points[i])),
            generators=gens,  # type: ignore[arg-type]
            min_de76=float(self.min76[i]),
            nearest_index=int(self.nearest[i]),
            min_de00=float(self.min00[i]),
            active=bool(self.active[i]),
        )

    def best_index(self, objective: np.ndarray, mask: np.ndarray | None = None) -> int:
        """Argmax; objectives within TIE_TOL tie and break by (L, a, b)."""
        pool = np.arange(len(self.points)) if mask is None else np.nonzero(mask)[0]
        if len(pool) == 0:
            raise SolverError("no candidate points to select from")
        decimals = round(-np.log10(TIE_TOL))
        obj = np.round(objective[pool], decimals)
        pts = self.points[pool]
        order = np.lexsort((pts[:, 2], pts[:, 1], pts[:, 0], -obj))
        return int(pool[order[0]])

    def sorted_order(self) -> np.ndarray:
        pts = self.points
        decimals = round(-np.log10(TIE_TOL))
        return np.lexsort(
            (pts[:, 2], pts[:, 1], pts[:, 0], -np.round(self.min76, decimals))
        )


def enumerate_candidates(
    palette: Palette | None,
    gamut: Gamut,
    weights: DeltaE2000Weights = MAP_WEIGHTS,
) -> list[CandidatePoint]:
    """Score every in-gamut triple-plane intersection against the palette.

    The plane pool is all site bisectors plus all gamut faces, so the four
    possible generator combinations (3 bisectors; 2+1; 1+2; 3 faces) are
    covered by plain 3-subsets. Returns candidates sorted by min CIE76
    distance descending, ties broken lexicographically by (L, a, b).
    """
    arrays = _CandidateArrays(palette, gamut, weights)
    return [arrays.make_candidate(i) for i in arrays.sorted_order()]


def solve_one_cie76(
    palette: Palette,
    gamut: Gamut,
    weights: DeltaE2000Weights = MAP_WEIGHTS,
) -> CandidatePoint:
    """Exact single-color maximin optimum under CIE76."""
    arrays = _CandidateArrays(palette, gamut, weights)
    if len(arrays) == 0:
        raise SolverError("no candidate points (degenerate gamut or plane pool)")
    return arrays.make_candidate(arrays.best_index(arrays.min76))


def solve_one_combined(
    palette: Palette,
    gamut: Gamut,
    weights: DeltaE2000Weights = MAP_WEIGHTS,
) -> CandidatePoint:
    """Best CIEDE2000 scorer among the active (Voronoi-vertex) candidates.

    Not an exact CIEDE2000 optimum: the candidate positions come from
    Euclidean bisectors. Fast, and in practice a strong heuristic.
    """
    arrays = _CandidateArrays(palette, gamut, weights)
    if len(arrays) == 0:
        raise SolverError("no candidate points (degenerate gamut or plane pool)")
    mask = arrays.active if arrays.active.any() else None
    return arrays.make_candidate(arrays.best_index(arrays.min00, mask))


def greedy_sequence(
    palette: Palette,
    gamut: Gamut,
    m: int,
    mode: str = "cie76",
    weights: DeltaE2000Weights = MAP_WEIGHTS,
    name_prefix: str = "new",
) -> SolutionSet:
    """Extend the palette one color at a time, m times.

    Each step solves the single-color problem against the original palette
    plus every color added before it, so the recorded per-step minima are
    taken against the whole running set.
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if mode not in ("cie76", "combined"):
        raise ValueError(f"unknown mode {mode!r} (expected 'cie76' or 'combined')")
    solver = solve_one_cie76 if mode == "cie76" else solve_one_combined

    current = palette
    steps = []
    for step in range(1, m + 1):
        winner = solver(current, gamut, weights)
        name = f"{name_prefix}-{step}"
        steps.append(
            GreedyStep(
                name=name,
                color=winner.point,
                min_de76=winner.min_de76,
                min_de00=winner.min_de00,
            )
        )
        current = current.extended(name, winner.point)

    colors = tuple(s.color for s in steps)
    final76, final00 = joint_minima(colors, palette, weights)
    return SolutionSet(
        colors=colors,
        method=f"voronoi-{mode}",
        achieved_min_de76=final76,
        achieved_min_de00=final00,
        steps=tuple(steps),
    )


def joint_minima(
    colors: tuple[LabColor, ...] | list[LabColor],
    palette: Palette,
    weights: DeltaE2000Weights = MAP_WEIGHTS,
) -> tuple[float, float]:
    """Maximin objective of a color set vs the palette, in both metrics."""
    xs = np.array([c.as_tuple() for c in colors], dtype=float)
    sites = palette.lab_array()
    m76 = delta_e76_matrix(xs, sites).min()
    m00 = delta_e2000_matrix(xs, sites, weights).min()
    if len(xs) > 1:
        iu = np.triu_indices(len(xs), k=1)
        m76 = min(m76, delta_e76_matrix(xs, xs)[iu].min())
        m00 = min(m00, delta_e2000_matrix(xs, xs, weights)[iu].min())
    return float(m76), float(m00)
