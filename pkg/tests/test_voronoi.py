import numpy as np
import pytest

from palext.colors import (
    LabColor,
    Palette,
    delta_e2000,
    delta_e76,
    delta_e76_matrix,
    min_distance,
)
from palext.geometry import build_gamut
from palext.optimize import OptimizerConfig, solve_monte_carlo
from palext.voronoi import (
    enumerate_candidates,
    greedy_sequence,
    joint_minima,
    solve_one_cie76,
    solve_one_combined,
)

from conftest import random_instance


def grid_scan_best(palette, gamut, step=0.5):
    """Dense-grid brute force over the gamut's bounding box."""
    lo, hi = gamut.bounding_box()
    axes = [np.arange(lo[i], hi[i] + step, step) for i in range(3)]
    pts = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 3)
    pts = pts[gamut.contains_many(pts, eps=1e-9)]
    dmin = delta_e76_matrix(pts, palette.lab_array()).min(axis=1)
    return float(dmin.max())


def test_single_site_cube_candidates(cube_gamut, single_center_palette):
    cands = enumerate_candidates(single_center_palette, cube_gamut)
    pts = np.array([c.point.as_tuple() for c in cands])
    for v in cube_gamut.vertices:
        assert np.linalg.norm(pts - v, axis=1).min() < 1e-9
    # best objective is half the space diagonal of the 40x40x40 box
    assert cands[0].min_de76 == pytest.approx(np.sqrt(3) * 20.0, abs=1e-9)


def test_single_site_cube_solver_picks_lex_smallest_corner(
    cube_gamut, single_center_palette
):
    best = solve_one_cie76(single_center_palette, cube_gamut)
    assert best.point.as_tuple() == pytest.approx((30.0, -20.0, -20.0), abs=1e-9)
    assert best.active


def test_moscow_best_candidate(moscow, adobe_gamut):
    best = solve_one_cie76(moscow, adobe_gamut)
    assert abs(best.min_de76 - 114.4) <= 3.0
    assert delta_e76(best.point, LabColor(83, -138, 91)) <= 5.0
    assert best.nearest_index == list(moscow.names).index("Greenish yellow")


def test_candidate_list_sorted_and_consistent(moscow, adobe_gamut):
    cands = enumerate_candidates(moscow, adobe_gamut)
    values = [c.min_de76 for c in cands]
    assert all(a >= b - 1e-12 for a, b in zip(values, values[1:]))
    for c in cands[:5] + cands[::2500]:
        assert adobe_gamut.contains(c.point, eps=1e-6)
        d, idx = min_distance(c.point, moscow, "de76")
        assert c.min_de76 == pytest.approx(d, abs=1e-9)
        assert c.nearest_index == idx
        d00, _ = min_distance(c.point, moscow, "de00")
        assert c.min_de00 == pytest.approx(d00, abs=1e-9)
        for plane in c.generators:
            assert abs(
                plane.normal_array() @ c.point.as_array() - plane.offset
            ) < 1e-6


def test_solver_matches_grid_oracle_random_tetra():
    rng = np.random.default_rng(21)
    palette, gamut = random_instance(rng, 4, tetra=True)
    best = solve_one_cie76(palette, gamut)
    oracle = grid_scan_best(palette, gamut, step=0.5)
    assert best.min_de76 >= oracle - 0.5


def test_solver_dominates_monte_carlo_random_five_sites():
    rng = np.random.default_rng(22)
    palette, gamut = random_instance(rng, 5)
    best = solve_one_cie76(palette, gamut)
    mc = solve_monte_carlo(
        palette, gamut, 1, OptimizerConfig(seed=4, mc_samples=1_000_000)
    )
    assert best.min_de76 >= mc.achieved_min_de76 - 1e-9


def test_combined_moscow(moscow, adobe_gamut):
    best = solve_one_combined(moscow, adobe_gamut)
    assert abs(best.min_de00 - 23.9) <= 1.5
    assert delta_e76(best.point, LabColor(87, -78, -21)) <= 6.0


def test_combined_single_gray_site_returns_gamut_vertex(adobe_gamut):
    palette = Palette([("gray", LabColor(55.0, 0.0, 0.0))])
    best = solve_one_combined(palette, adobe_gamut)
    assert np.linalg.norm(
        adobe_gamut.vertices - best.point.as_array(), axis=1
    ).min() < 1e-6
    assert best.min_de00 == pytest.approx(
        delta_e2000(best.point, palette.colors[0]), abs=1e-9
    )


def test_combined_dominates_cie76_winner():
    rng = np.random.default_rng(23)
    palette, gamut = random_instance(rng, 5)
    w76 = solve_one_cie76(palette, gamut)
    w00 = solve_one_combined(palette, gamut)
    assert w00.min_de00 >= w76.min_de00 - 1e-9


def test_greedy_cie76_moscow(moscow, adobe_gamut):
    sol = greedy_sequence(moscow, adobe_gamut, 5, "cie76")
    minima = [s.min_de76 for s in sol.steps]
    # per-step minima shrink as colors accumulate
    assert all(a >= b - 1e-9 for a, b in zip(minima, minima[1:]))
    # the early steps track the published extension closely; later steps
    # depend on gamut corners the reference never published
    for got, ref in zip(minima[:3], (114.4, 87.0, 67.7)):
        assert abs(got - ref) <= 3.0
    assert delta_e76(sol.steps[0].color, LabColor(83, -138, 91)) <= 5.0
    # each step's recorded minimum is the true distance to everything before
    running = moscow
    for s in sol.steps:
        d, _ = min_distance(s.color, running, "de76")
        assert s.min_de76 == pytest.approx(d, abs=1e-9)
        running = running.extended(s.name, s.color)
    assert sol.achieved_min_de76 == pytest.approx(minima[-1], abs=1e-9)


def test_greedy_steps_are_exact_optima(moscow, adobe_gamut):
    sol = greedy_sequence(moscow, adobe_gamut, 3, "cie76")
    running = moscow
    cfg = OptimizerConfig(seed=9, mc_samples=100_000)
    for s in sol.steps:
        mc = solve_monte_carlo(running, adobe_gamut, 1, cfg)
        assert s.min_de76 >= mc.achieved_min_de76 - 1e-9
        running = running.extended(s.name, s.color)


def test_greedy_combined_moscow(moscow, adobe_gamut):
    sol = greedy_sequence(moscow, adobe_gamut, 5, "combined")
    minima = [s.min_de00 for s in sol.steps]
    for got, ref in zip(minima, (23.9, 22.0, 19.8, 19.7, 19.8)):
        assert abs(got - ref) <= 1.5


def test_greedy_m1_equals_single_shot(moscow, adobe_gamut):
    sol = greedy_sequence(moscow, adobe_gamut, 1, "cie76")
    single = solve_one_cie76(moscow, adobe_gamut)
    assert sol.colors[0] == single.point
    assert sol.achieved_min_de76 == pytest.approx(single.min_de76, abs=1e-12)


def test_greedy_rejects_bad_arguments(moscow, adobe_gamut):
    with pytest.raises(ValueError):
        greedy_sequence(moscow, adobe_gamut, 0, "cie76")
    with pytest.raises(ValueError):
        greedy_sequence(moscow, adobe_gamut, 1, "fancy")


def test_translation_equivariance():
    rng = np.random.default_rng(31)
    palette, gamut = random_instance(rng, 4)
    shift = np.array([3.0, -11.0, 7.0])
    best = solve_one_cie76(palette, gamut)
    shifted_palette = Palette(
        [(n, LabColor(*(c.as_array() + shift))) for n, c in palette.entries]
    )
    shifted_gamut = build_gamut(gamut.corner_source + shift)
    shifted_best = solve_one_cie76(shifted_palette, shifted_gamut)
    assert shifted_best.point.as_array() == pytest.approx(
        best.point.as_array() + shift, abs=1e-6
    )
    assert shifted_best.min_de76 == pytest.approx(best.min_de76, abs=1e-6)


def test_palette_order_invariance():
    rng = np.random.default_rng(33)
    palette, gamut = random_instance(rng, 5)
    best = solve_one_cie76(palette, gamut)
    reordered = Palette(list(palette.entries)[::-1])
    best2 = solve_one_cie76(reordered, gamut)
    assert best2.point.as_array() == pytest.approx(
        best.point.as_array(), abs=1e-9
    )


def test_enumerate_without_palette_yields_gamut_vertices(adobe_gamut):
    cands = enumerate_candidates(None, adobe_gamut)
    assert cands
    pts = np.array([c.point.as_tuple() for c in cands])
    for v in adobe_gamut.vertices:
        assert np.linalg.norm(pts - v, axis=1).min() < 1e-9
    assert all(np.isinf(c.min_de76) for c in cands)


def test_single_site_tiny_gamut_uses_face_candidates():
    tiny = build_gamut(
        np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]], dtype=float)
    )
    # one site has no bisectors, so only face triples can contribute
    palette = Palette([("a", LabColor(0.1, 0.1, 0.1))])
    best = solve_one_cie76(palette, tiny)
    assert tiny.contains(best.point)


def test_joint_minima_matches_pairwise_brute_force(moscow):
    colors = (LabColor(84, -65, -12), LabColor(86, 35, 7))
    m76, m00 = joint_minima(colors, moscow)
    brute76 = min(
        min(delta_e76(c, pc) for pc in moscow.colors) for c in colors
    )
    brute76 = min(brute76, delta_e76(*colors))
    assert m76 == pytest.approx(brute76, abs=1e-12)
    brute00 = min(
        min(delta_e2000(c, pc) for pc in moscow.colors) for c in colors
    )
    brute00 = min(brute00, delta_e2000(*colors))
    assert m00 == pytest.approx(brute00, abs=1e-12)
