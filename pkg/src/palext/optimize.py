"""Simultaneous m-color solvers: restarted direct search, Monte-Carlo
sampling, and charged-particle relaxation.

All three maximize the same maximin objective: the smallest distance among
the new colors themselves and from the new colors to the palette. The
direct search works on a slack reformulation (maximize x0 subject to every
distance exceeding x0) with constraint violations folded into a quadratic
penalty, restarted from many random feasible points. Every solver takes an
explicit seed and derives one private stream per restart, so results do
not depend on scheduling.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .colors import (
    DeltaE2000Weights,
    LabColor,
    MAP_WEIGHTS,
    Palette,
    delta_e2000_pairs,
    metric_matrix,
)
from .geometry import Gamut, sample_in_gamut
from .voronoi import SolutionSet, SolverError


@dataclass(frozen=True)
class BallisticParams:
    """Charged-particle relaxation knobs.

    The boundary charge is the small positive charge placed at the nearest
    boundary point of each movable color to keep it from escaping. Coulomb
    forces at Lab scale are tiny (~1/r^2 with r around 50), so the step
    size is an effective mobility, with single-step travel capped at
    ``max_move`` for stability.
    """

    boundary_charge: float = 1e-3
    step_size: float = 10.0
    damping: float = 0.9
    max_steps: int = 10_000
    tol: float = 1e-4
    max_move: float = 2.0

    def __post_init__(self) -> None:
        if self.boundary_charge <= 0:
            raise ValueError("boundary_charge must be positive")
        if self.step_size <= 0:
            raise ValueError("step_size must be positive")
        if not 0.0 <= self.damping < 1.0:
            raise ValueError("damping must lie in [0, 1)")
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.max_move <= 0:
            raise ValueError("max_move must be positive")


@dataclass(frozen=True)
class OptimizerConfig:
    """Shared configuration of the stochastic solvers."""

    restarts: int = 10_000
    x0_range: tuple[float, float] = (0.0, 20.0)
    seed: int = 0
    max_iterations: int = 600
    tol: float = 1e-6
    penalty_weight: float = 1e3
    mc_samples: int = 100_000
    ballistic: BallisticParams = field(default_factory=BallisticParams)

    def __post_init__(self) -> None:
        for name in ("restarts", "max_iterations", "mc_samples"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.penalty_weight <= 0:
            raise ValueError("penalty_weight must be positive")
        if not self.x0_range[0] <= self.x0_range[1]:
            raise ValueError("x0_range must be a non-empty interval")

    @classmethod
    def from_mapping(cls, data: dict) -> "OptimizerConfig":
        """Build a config from flat string keys (see ``from_file``)."""
        base = {}
        ballistic = {}
        casts = {
            "restarts": int, "seed": int, "max_iterations": int,
            "tol": float, "penalty_weight": float, "mc_samples": int,
        }
        bal_casts = {
            "boundary_charge": float, "step_size": float, "damping": float,
            "max_steps": int, "ballistic_tol": float, "max_move": float,
        }
        x0_lo, x0_hi = cls.x0_range
        for key, raw in data.items():
            key = key.strip().lower()
            if key in casts:
                base[key] = casts[key](raw)
            elif key in bal_casts:
                target = "tol" if key == "ballistic_tol" else key
                ballistic[target] = bal_casts[key](raw)
            elif key == "x0_min":
                x0_lo = float(raw)
            elif key == "x0_max":
                x0_hi = float(raw)
            else:
                raise ValueError(f"unknown optimizer config key {key!r}")
        return cls(
            x0_range=(x0_lo, x0_hi),
            ballistic=BallisticParams(**ballistic),
            **base,
        )

    @classmethod
    def from_file(cls, path: str | Path) -> "OptimizerConfig":
        """Parse a flat ``key = value`` text file.

        Recognized keys: restarts, seed, max_iterations, tol,
        penalty_weight, mc_samples, x0_min, x0_max, boundary_charge,
        step_size, damping, max_steps, ballistic_tol, max_move. Lines
        starting with ``#`` are ignored.
        """
        data = {}
        for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = line.partition("=")
            data[key.strip()] = value.strip()
        return cls.from_mapping(data)


def maximin_objective(
    xs: list[LabColor] | tuple[LabColor, ...],
    palette: Palette,
    metric: str = "de76",
    weights: DeltaE2000Weights = MAP_WEIGHTS,
) -> float:
    """Smallest distance among ``xs`` and from ``xs`` to the palette."""
    if not xs:
        raise ValueError("xs must contain at least one color")
    pts = np.array([c.as_tuple() for c in xs], dtype=float)
    return float(_maximin_array(pts, palette.lab_array(), metric, weights))


def _maximin_array(
    pts: np.ndarray, sites: np.ndarray, metric: str, weights: DeltaE2000Weights
) -> float:
    best = metric_matrix(pts, sites, metric, weights).min()
    if len(pts) > 1:
        iu = np.triu_indices(len(pts), k=1)
        best = min(best, metric_matrix(pts, pts, metric, weights)[iu].min())
    return float(best)


def _metric_elementwise(
    a: np.ndarray, b: np.ndarray, metric: str, weights: DeltaE2000Weights
) -> np.ndarray:
    if metric == "de76":
        return np.sqrt(((a - b) ** 2).sum(axis=-1))
    return delta_e2000_pairs(a, b, weights)


def _solution_from_points(
    pts: np.ndarray,
    palette: Palette,
    method: str,
    weights: DeltaE2000Weights,
    seed: int | None,
    converged: bool = True,
) -> SolutionSet:
    colors = tuple(LabColor(float(p[0]), float(p[1]), float(p[2])) for p in pts)
    return SolutionSet(
        colors=colors,
        method=method,
        achieved_min_de76=_maximin_array(pts, palette.lab_array(), "de76", weights),
        achieved_min_de00=_maximin_array(pts, palette.lab_array(), "de00", weights),
        seed=seed,
        converged=converged,
    )


def _nelder_mead_batch(
    fun,
    z0: np.ndarray,
    spread: np.ndarray,
    iterations: int,
    xatol: float,
    fatol: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Run independent downhill-simplex minimizations in lockstep.

    ``fun`` maps an (N, D) batch of points to (N,) values; ``z0`` holds one
    start per instance. Every instance follows its own trajectory; the
    batching is purely so a single core can push thousands of restarts
    through numpy at once. Uses the dimension-adaptive reflection,
    expansion, contraction and shrink coefficients of Gao & Han.
    """
    r, d = z0.shape
    alpha = 1.0
    beta = 1.0 + 2.0 / d
    gamma = 0.75 - 1.0 / (2.0 * d)
    delta = 1.0 - 1.0 / d

    sim = np.repeat(z0[:, None, :], d + 1, axis=1)
    for i in range(d):
        sim[:, i + 1, i] += spread[i]
    fv = fun(sim.reshape(-1, d)).reshape(r, d + 1)
    active = np.ones(r, dtype=bool)

    for _ in range(iterations):
        order = np.argsort(fv, axis=1)
        fv = np.take_along_axis(fv, order, axis=1)
        sim = np.take_along_axis(sim, order[:, :, None], axis=1)

        spread_f = fv[:, -1] - fv[:, 0]
        spread_x = np.abs(sim - sim[:, :1, :]).max(axis=(1, 2))
        active &= ~((spread_f < fatol) & (spread_x < xatol))
        if not active.any():
            break

        centroid = sim[:, :d, :].mean(axis=1)
        worst = sim[:, d, :]
        direction = centroid - worst
        xr = centroid + alpha * direction
        fr = fun(xr)

        fbest = fv[:, 0]
        fsecond = fv[:, d - 1]
        fworst = fv[:, d]
        expand = fr < fbest
        out_c = (fr >= fsecond) & (fr < fworst)
        in_c = fr >= fworst

        x2 = np.where(
            expand[:, None],
            centroid + beta * direction,
            np.where(
                out_c[:, None],
                centroid + gamma * direction,
                np.where(in_c[:, None], centroid - gamma * direction, xr),
            ),
        )
        f2 = fun(x2)

        use2 = (expand & (f2 < fr)) | (out_c & (f2 <= fr)) | (in_c & (f2 < fworst))
        new_vertex = np.where(use2[:, None], x2, xr)
        new_value = np.where(use2, f2, fr)
        shrink = ((out_c & (f2 > fr)) | (in_c & (f2 >= fworst))) & active
        accept = active & ~shrink
        sim[accept, d, :] = new_vertex[accept]
        fv[accept, d] = new_value[accept]
        if shrink.any():
            best = sim[shrink, :1, :]
            shrunk = best + delta * (sim[shrink, 1:, :] - best)
            sim[shrink, 1:, :] = shrunk
            fv[shrink, 1:] = fun(shrunk.reshape(-1, d)).reshape(-1, d)

    order = np.argsort(fv, axis=1)
    fv = np.take_along_axis(fv, order, axis=1)
    sim = np.take_along_axis(sim, order[:, :, None], axis=1)
    return sim[:, 0, :], fv[:, 0]


def _project_batch(pts: np.ndarray, gamut: Gamut, sweeps: int = 12) -> np.ndarray:
    """Push slightly-escaped points back inside via max-violation steps."""
    pts = np.array(pts, dtype=float)
    face_n = gamut.face_normals
    face_d = gamut.face_offsets
    for _ in range(sweeps):
        violation = pts @ face_n.T - face_d
        worst = violation.max(axis=1)
        if (worst <= 1e-12).all():
            break
        j = violation.argmax(axis=1)
        pts = pts - np.maximum(worst, 0.0)[:, None] * face_n[j]
    return pts


def solve_joint_simplex(
    palette: Palette,
    gamut: Gamut,
    m: int,
    cfg: OptimizerConfig = OptimizerConfig(),
    weights: DeltaE2000Weights = MAP_WEIGHTS,
) -> SolutionSet:
    """Restarted downhill-simplex search on the slack formulation.

    Each restart draws the slack variable x0 uniform in ``cfg.x0_range``
    and m in-gamut points, then locally maximizes x0 minus a quadratic
    penalty on violated constraints (every Euclidean distance slack plus
    the gamut face slacks). A half-budget polishing pass restarts each
    search at its own optimum with the slack synchronized to the actual
    maximin value. Local optima are Euclidean; the returned winner is the
    restart whose CIEDE2000 maximin is largest.
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    sites = palette.lab_array()
    face_n = gamut.face_normals
    face_d = gamut.face_offsets
    w = cfg.penalty_weight
    pair_i, pair_j = np.triu_indices(m, k=1)

    def neg_penalized_slack(z: np.ndarray) -> np.ndarray:
        x0 = z[:, 0]
        pts = z[:, 1:].reshape(len(z), m, 3)
        d_sites = np.sqrt(
            ((pts[:, :, None, :] - sites[None, None, :, :]) ** 2).sum(axis=-1)
        )
        slacks = [d_sites.reshape(len(z), -1) - x0[:, None]]
        if m > 1:
            d_pairs = np.sqrt(((pts[:, pair_i, :] - pts[:, pair_j, :]) ** 2).sum(axis=-1))
            slacks.append(d_pairs - x0[:, None])
        slacks.append((face_d[None, None, :] - pts @ face_n.T).reshape(len(z), -1))
        viol = np.minimum(np.concatenate(slacks, axis=1), 0.0)
        return -x0 + w * (viol * viol).sum(axis=1)

    def batch_maximin76(pts: np.ndarray) -> np.ndarray:
        d = np.sqrt(((pts[:, :, None, :] - sites[None, None, :, :]) ** 2).sum(axis=-1))
        vals = d.reshape(len(pts), -1).min(axis=1)
        if m > 1:
            dp = np.sqrt(((pts[:, pair_i, :] - pts[:, pair_j, :]) ** 2).sum(axis=-1))
            vals = np.minimum(vals, dp.min(axis=1))
        return vals

    z0 = np.empty((cfg.restarts, 1 + 3 * m))
    for restart in range(cfg.restarts):
        rng = np.random.default_rng([cfg.seed, restart])
        z0[restart, 0] = rng.uniform(*cfg.x0_range)
        z0[restart, 1:] = sample_in_gamut(gamut, m, rng).ravel()

    spread = np.full(1 + 3 * m, 20.0)
    spread[0] = 8.0
    best_z, _ = _nelder_mead_batch(
        neg_penalized_slack, z0, spread, cfg.max_iterations, cfg.tol, cfg.tol
    )

    # polish: re-seed each search at its optimum, slack set to the real
    # maximin so the simplex starts on the constraint surface
    z1 = best_z.copy()
    z1[:, 0] = batch_maximin76(z1[:, 1:].reshape(-1, m, 3))
    best_z, _ = _nelder_mead_batch(
        neg_penalized_slack,
        z1,
        np.full(1 + 3 * m, 2.0),
        max(1, cfg.max_iterations // 2),
        cfg.tol,
        cfg.tol,
    )

    finite = np.all(np.isfinite(best_z), axis=1)
    if not finite.any():
        raise SolverError(
            f"no feasible local optimum in {cfg.restarts} restarts "
            "(all searches diverged)"
        )
    pts_all = _project_batch(
        best_z[finite][:, 1:].reshape(-1, 3), gamut
    ).reshape(-1, m, 3)

    d00 = metric_matrix(pts_all.reshape(-1, 3), sites, "de00", weights)
    vals = d00.reshape(len(pts_all), -1).min(axis=1)
    if m > 1:
        p00 = _metric_elementwise(
            pts_all[:, pair_i, :], pts_all[:, pair_j, :], "de00", weights
        )
        vals = np.minimum(vals, p00.min(axis=1))

    best_val = vals.max()
    tied = np.nonzero(vals >= best_val)[0]
    winner = min(tied, key=lambda i: tuple(pts_all[i].ravel()))
    best_pts = np.array([gamut.project(p) for p in pts_all[winner]])
    return _solution_from_points(
        best_pts, palette, "joint-simplex", weights, cfg.seed
    )


def solve_monte_carlo(
    palette: Palette,
    gamut: Gamut,
    m: int,
    cfg: OptimizerConfig = OptimizerConfig(),
    metric: str = "de76",
    weights: DeltaE2000Weights = MAP_WEIGHTS,
) -> SolutionSet:
    """Best of ``cfg.mc_samples`` uniform in-gamut m-tuples."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    rng = np.random.default_rng(cfg.seed)
    sites = palette.lab_array()
    pair_i, pair_j = np.triu_indices(m, k=1)

    best_val = -np.inf
    best_pts: np.ndarray | None = None
    remaining = cfg.mc_samples
    chunk = max(1, min(20_000, cfg.mc_samples))
    while remaining > 0:
        take = min(chunk, remaining)
        remaining -= take
        tuples = sample_in_gamut(gamut, take * m, rng).reshape(take, m, 3)
        d_sites = metric_matrix(
            tuples.reshape(-1, 3), sites, metric, weights
        ).reshape(take, m, -1)
        vals = d_sites.min(axis=(1, 2))
        if m > 1:
            pair_d = _metric_elementwise(
                tuples[:, pair_i, :], tuples[:, pair_j, :], metric, weights
            )
            vals = np.minimum(vals, pair_d.min(axis=1))
        i = int(np.argmax(vals))
        if vals[i] > best_val:
            best_val = float(vals[i])
            best_pts = tuples[i]
    assert best_pts is not None
    return _solution_from_points(
        best_pts, palette, f"monte-carlo-{metric}", weights, cfg.seed
    )


def coulomb_potential(pts: np.ndarray, sites: np.ndarray) -> float:
    """Total 1/r potential of movable points vs sites and each other."""
    pts = np.atleast_2d(pts)
    d = np.sqrt(((pts[:, None, :] - sites[None, :, :]) ** 2).sum(axis=-1))
    total = float((1.0 / d).sum())
    if len(pts) > 1:
        iu = np.triu_indices(len(pts), k=1)
        dp = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=-1))[iu]
        total += float((1.0 / dp).sum())
    return total


#: Coulomb softening length: force saturates below this separation.
_SOFTENING = 0.5

#: Step-size cooling applied to a particle whose motion reverses direction.
_COOLING = 0.7


def relax_charges(
    palette: Palette,
    gamut: Gamut,
    start: np.ndarray,
    params: BallisticParams = BallisticParams(),
) -> tuple[np.ndarray, list[float], bool]:
    """Run the charged-particle relaxation from given start positions.

    Unit charges sit on the palette sites and the movable points; a charge
    of ``params.boundary_charge`` sits at each movable point's nearest
    boundary point. Motion is damped (viscous medium); a step that leaves
    the gamut is projected back onto it, dropping the accumulated velocity.
    A particle that starts oscillating around a pinned equilibrium has its
    effective step cooled geometrically until its displacement falls under
    ``params.tol``. Returns the final positions, the per-step Coulomb
    potential of the movable configuration (boundary charges excluded),
    and a convergence flag.
    """
    sites = palette.lab_array()
    face_n = gamut.face_normals
    face_d = gamut.face_offsets
    pts = np.array(start, dtype=float).reshape(-1, 3)
    m = len(pts)
    vel = np.zeros_like(pts)
    prev_move = np.zeros_like(pts)
    cool = np.ones(m)
    trace = [coulomb_potential(pts, sites)]
    converged = False
    for _ in range(params.max_steps):
        diff = pts[:, None, :] - sites[None, :, :]
        dist = np.sqrt((diff * diff).sum(axis=-1))
        np.maximum(dist, _SOFTENING, out=dist)
        force = (diff / dist[..., None] ** 3).sum(axis=1)
        if m > 1:
            pdiff = pts[:, None, :] - pts[None, :, :]
            pdist = np.sqrt((pdiff * pdiff).sum(axis=-1))
            np.fill_diagonal(pdist, np.inf)
            np.maximum(pdist, _SOFTENING, out=pdist)
            force += (pdiff / pdist[..., None] ** 3).sum(axis=1)
        # the boundary charge sits at the nearest boundary point, i.e. the
        # projection onto the smallest-slack face; it pushes straight inward
        slack = face_d[None, :] - pts @ face_n.T
        nearest_face = slack.argmin(axis=1)
        gap = slack[np.arange(m), nearest_face]
        force -= face_n[nearest_face] * (
            params.boundary_charge / np.maximum(gap, _SOFTENING) ** 2
        )[:, None]

        vel = params.damping * vel + force
        disp = (params.step_size * cool)[:, None] * vel
        norms = np.linalg.norm(disp, axis=1)
        disp *= np.minimum(1.0, params.max_move / np.maximum(norms, 1e-12))[:, None]
        new_pts = pts + disp
        outside = ~gamut.contains_many(new_pts, eps=0.0)
        for j in np.nonzero(outside)[0]:
            new_pts[j] = gamut.project(new_pts[j])
            vel[j] = 0.0
        moved = new_pts - pts
        reversed_dir = (moved * prev_move).sum(axis=1) < 0.0
        cool[reversed_dir] *= _COOLING
        vel[reversed_dir] = 0.0
        prev_move = moved
        pts = new_pts
        trace.append(coulomb_potential(pts, sites))
        if float(np.max(np.abs(moved))) < params.tol:
            converged = True
            break
    return pts, trace, converged


def solve_ballistic(
    palette: Palette,
    gamut: Gamut,
    m: int,
    cfg: OptimizerConfig = OptimizerConfig(),
    weights: DeltaE2000Weights = MAP_WEIGHTS,
) -> SolutionSet:
    """Charged-particle relaxation from random in-gamut starts."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    rng = np.random.default_rng(cfg.seed)
    start = sample_in_gamut(gamut, m, rng)
    pts, _, converged = relax_charges(palette, gamut, start, cfg.ballistic)
    return _solution_from_points(
        pts, palette, "ballistic", weights, cfg.seed, converged=converged
    )
