"""palext: extend a color palette with maximally distinct new colors.

Given existing colors in CIELAB and a convex polyhedral gamut, the package
finds new colors that maximize the minimal perceptual distance to the
existing colors and to each other: exactly under CIE76 via candidate-vertex
enumeration, and via a CIEDE2000-ranked variant, restarted direct search
on a slack formulation, Monte-Carlo sampling, or charged-particle
relaxation.
"""

from .colors import (
    DeltaE2000Weights,
    LabColor,
    MAP_WEIGHTS,
    Palette,
    UNIT_WEIGHTS,
    delta_e2000,
    delta_e2000_matrix,
    delta_e76,
    delta_e76_matrix,
    min_distance,
)
from .convert import (
    ADOBE_RGB_1998,
    SRGB,
    RgbSpace,
    hex_from_lab,
    lab_from_rgb,
    rgb_from_lab,
)
from .datasets import load_gamut, load_palette, moscow_palette
from .geometry import (
    Gamut,
    Plane,
    bisector_plane,
    build_gamut,
    default_gamut,
    intersect_three_planes,
    sample_in_gamut,
)
from .optimize import (
    BallisticParams,
    OptimizerConfig,
    maximin_objective,
    solve_ballistic,
    solve_joint_simplex,
    solve_monte_carlo,
)
from .voronoi import (
    CandidatePoint,
    GreedyStep,
    SolutionSet,
    SolverError,
    enumerate_candidates,
    greedy_sequence,
    solve_one_cie76,
    solve_one_combined,
)

__version__ = "0.1.0"

__all__ = [
    "ADOBE_RGB_1998",
    "BallisticParams",
    "CandidatePoint",
    "DeltaE2000Weights",
    "Gamut",
    "GreedyStep",
    "LabColor",
    "MAP_WEIGHTS",
    "OptimizerConfig",
    "Palette",
    "Plane",
    "RgbSpace",
    "SRGB",
    "SolutionSet",
    "SolverError",
    "UNIT_WEIGHTS",
    "bisector_plane",
    "build_gamut",
    "default_gamut",
    "delta_e2000",
    "delta_e2000_matrix",
    "delta_e76",
    "delta_e76_matrix",
    "enumerate_candidates",
    "greedy_sequence",
    "hex_from_lab",
    "intersect_three_planes",
    "lab_from_rgb",
    "load_gamut",
    "load_palette",
    "maximin_objective",
    "min_distance",
    "moscow_palette",
    "rgb_from_lab",
    "sample_in_gamut",
    "solve_ballistic",
    "solve_joint_simplex",
    "solve_monte_carlo",
    "solve_one_cie76",
    "solve_one_combined",
]
