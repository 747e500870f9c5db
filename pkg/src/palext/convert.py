"""RGB <-> CIELAB conversion against a configurable RGB working space.

The conversion matrix is derived from the space's primary and white-point
chromaticities (the usual construction, cf. Lindbloom's notes), so any
gamma-based RGB space can be described. Adobe RGB (1998) under D65 / 2deg
is the default because it is what the bundled gamut corners come from.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .colors import LabColor

_DELTA = 6.0 / 29.0
_DELTA3 = _DELTA ** 3


@dataclass(frozen=True)
class RgbSpace:
    """An RGB working space: primaries, white point, and transfer curve.

    ``gamma`` is the exponent of a pure power-law transfer; ``None`` selects
    the piecewise sRGB curve instead.
    """

    name: str
    red: tuple[float, float]
    green: tuple[float, float]
    blue: tuple[float, float]
    white: tuple[float, float]
    gamma: float | None


ADOBE_RGB_1998 = RgbSpace(
    name="adobe-rgb-1998",
    red=(0.6400, 0.3300),
    green=(0.2100, 0.7100),
    blue=(0.1500, 0.0600),
    white=(0.3127, 0.3290),  # D65, 2 degree observer
    gamma=563.0 / 256.0,
)

SRGB = RgbSpace(
    name="srgb",
    red=(0.6400, 0.3300),
    green=(0.3000, 0.6000),
    blue=(0.1500, 0.0600),
    white=(0.3127, 0.3290),
    gamma=None,
)


def _xyz_column(x: float, y: float) -> np.ndarray:
    return np.array([x / y, 1.0, (1.0 - x - y) / y])


@lru_cache(maxsize=None)
def _space_matrices(space: RgbSpace) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(RGB->XYZ matrix, XYZ->RGB matrix, white XYZ) for a space."""
    primaries = np.column_stack(
        [_xyz_column(*space.red), _xyz_column(*space.green), _xyz_column(*space.blue)]
    )
    white = _xyz_column(*space.white)
    scale = np.linalg.solve(primaries, white)
    forward = primaries * scale
    for m in (forward, white):
        m.setflags(write=False)
    inverse = np.linalg.inv(forward)
    inverse.setflags(write=False)
    return forward, inverse, white


def _encode(linear: np.ndarray, space: RgbSpace) -> np.ndarray:
    if space.gamma is not None:
        return np.power(np.clip(linear, 0.0, None), 1.0 / space.gamma)
    return np.where(
        linear <= 0.0031308,
        12.92 * linear,
        1.055 * np.power(np.clip(linear, 0.0, None), 1.0 / 2.4) - 0.055,
    )


def _decode(encoded: np.ndarray, space: RgbSpace) -> np.ndarray:
    if space.gamma is not None:
        return np.power(encoded, space.gamma)
    return np.where(
        encoded <= 0.04045,
        encoded / 12.92,
        np.power((encoded + 0.055) / 1.055, 2.4),
    )


def _lab_f(t: np.ndarray) -> np.ndarray:
    return np.where(t > _DELTA3, np.cbrt(t), t / (3.0 * _DELTA ** 2) + 4.0 / 29.0)


def _lab_f_inv(t: np.ndarray) -> np.ndarray:
    return np.where(t > _DELTA, t ** 3, 3.0 * _DELTA ** 2 * (t - 4.0 / 29.0))


def lab_from_rgb(
    rgb: tuple[float, float, float], space: RgbSpace = ADOBE_RGB_1998
) -> LabColor:
    """Convert encoded RGB components in [0, 1] to Lab.

    Raises ValueError when a component is out of range.
    """
    rgb_arr = np.asarray(rgb, dtype=float)
    if rgb_arr.shape != (3,):
        raise ValueError(f"expected an RGB triple, got shape {rgb_arr.shape}")
    if np.any(rgb_arr < 0.0) or np.any(rgb_arr > 1.0):
        raise ValueError(f"RGB components must lie in [0, 1], got {tuple(rgb_arr)}")
    forward, _, white = _space_matrices(space)
    xyz = forward @ _decode(rgb_arr, space)
    f = _lab_f(xyz / white)
    return LabColor(
        L=float(116.0 * f[1] - 16.0),
        a=float(500.0 * (f[0] - f[1])),
        b=float(200.0 * (f[1] - f[2])),
    )


def rgb_from_lab(
    color: LabColor, space: RgbSpace = ADOBE_RGB_1998
) -> tuple[tuple[float, float, float], bool]:
    """Convert Lab to encoded RGB, clamping out-of-range components.

    Returns ``(rgb, clipped)`` where ``clipped`` is True when any component
    had to be clamped into [0, 1].
    """
    _, inverse, white = _space_matrices(space)
    fy = (color.L + 16.0) / 116.0
    f = np.array([fy + color.a / 500.0, fy, fy - color.b / 200.0])
    xyz = _lab_f_inv(f) * white
    linear = inverse @ xyz
    encoded = _encode(np.clip(linear, 0.0, None), space)
    clipped = bool(np.any(linear < -1e-9) or np.any(encoded > 1.0 + 1e-9))
    encoded = np.clip(encoded, 0.0, 1.0)
    return (float(encoded[0]), float(encoded[1]), float(encoded[2])), clipped


def hex_from_lab(
    color: LabColor, space: RgbSpace = ADOBE_RGB_1998
) -> tuple[str, bool]:
    """8-bit hex swatch of a Lab color, with a flag when gamut-clipped."""
    (r, g, b), clipped = rgb_from_lab(color, space)
    return "#%02x%02x%02x" % tuple(int(round(v * 255.0)) for v in (r, g, b)), clipped


def cube_corner_labs(space: RgbSpace = ADOBE_RGB_1998) -> np.ndarray:
    """Lab images of the 8 RGB cube corners (K, B, G, C, R, M, Y, W)."""
    corners = []
    for r in (0.0, 1.0):
        for g in (0.0, 1.0):
            for b in (0.0, 1.0):
                corners.append(lab_from_rgb((r, g, b), space).as_tuple())
    return np.array(corners, dtype=float)


def chroma_hue(color: LabColor) -> tuple[float, float]:
    """Polar form (chroma, hue-in-radians) of the (a, b) plane."""
    return math.hypot(color.a, color.b), color.hue
