import numpy as np
import pytest

from palext.colors import LabColor, Palette
from palext.datasets import moscow_palette
from palext.geometry import build_gamut, default_gamut, sample_in_gamut


@pytest.fixture(scope="session")
def moscow():
    return moscow_palette()


@pytest.fixture(scope="session")
def adobe_gamut():
    return default_gamut()


@pytest.fixture(scope="session")
def cube_gamut():
    corners = [
        LabColor(L, a, b) for L in (30, 70) for a in (-20, 20) for b in (-20, 20)
    ]
    return build_gamut(corners, name="cube")


@pytest.fixture
def single_center_palette():
    return Palette([("center", LabColor(50.0, 0.0, 0.0))])


def random_box_gamut(rng, name="box"):
    lo = rng.uniform([20, -60, -60], [40, -10, -10])
    hi = lo + rng.uniform(20, 40, size=3)
    corners = np.array(
        [[x, y, z] for x in (lo[0], hi[0]) for y in (lo[1], hi[1])
         for z in (lo[2], hi[2])]
    )
    return build_gamut(corners, name=name)


def random_tetra_gamut(rng, name="tetra"):
    while True:
        pts = np.column_stack([
            rng.uniform(10, 90, size=4),
            rng.uniform(-80, 80, size=4),
            rng.uniform(-80, 80, size=4),
        ])
        # reject nearly flat tetrahedra
        vol = abs(np.linalg.det(pts[1:] - pts[0])) / 6.0
        if vol > 5000.0:
            return build_gamut(pts, name=name)


def random_instance(rng, n_sites, tetra=False):
    gamut = random_tetra_gamut(rng) if tetra else random_box_gamut(rng)
    sites = sample_in_gamut(gamut, n_sites, rng)
    palette = Palette(
        [(f"site-{i}", LabColor(*map(float, s))) for i, s in enumerate(sites)]
    )
    return palette, gamut
