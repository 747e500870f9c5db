"""CIELAB colors, palettes, and the CIE76 / CIEDE2000 difference formulas.

The CIE76 difference is plain Euclidean distance in Lab. CIEDE2000 follows
the standard published definition (chroma compensation G, hue rotation R_T,
and the mean-hue special cases), validated against the classic 34-pair
verification dataset of Sharma, Wu and Dalal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

_POW25_7 = 25.0 ** 7


@dataclass(frozen=True)
class LabColor:
    """A point (L, a, b) in CIELAB space."""

    L: float
    a: float
    b: float

    @property
    def chroma(self) -> float:
        return math.hypot(self.a, self.b)

    @property
    def hue(self) -> float:
        """Hue angle in radians; 0 by convention when a = b = 0."""
        if self.a == 0.0 and self.b == 0.0:
            return 0.0
        return math.atan2(self.b, self.a)

    def as_array(self) -> np.ndarray:
        return np.array([self.L, self.a, self.b], dtype=float)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.L, self.a, self.b)


@dataclass(frozen=True)
class DeltaE2000Weights:
    """Parametric weights kL, kC, kH of the CIEDE2000 formula.

    The default halves the influence of lightness relative to chroma and
    hue, which suits picking colors that must stay apart on a printed map.
    """

    kl: float = 2.0
    kc: float = 1.0
    kh: float = 1.0

    def __post_init__(self) -> None:
        if not (self.kl > 0 and self.kc > 0 and self.kh > 0):
            raise ValueError("CIEDE2000 weights must be strictly positive")


#: Unit weights, as used by the published verification dataset.
UNIT_WEIGHTS = DeltaE2000Weights(1.0, 1.0, 1.0)

#: Lightness de-emphasized; the package-wide default.
MAP_WEIGHTS = DeltaE2000Weights()


class Palette:
    """An ordered set of named Lab colors.

    Entries are immutable after construction; duplicate coordinates are
    rejected because coincident sites have no bisector plane.
    """

    def __init__(self, entries: Iterable[tuple[str, LabColor]], name: str = "palette"):
        entries = tuple((str(n), c) for n, c in entries)
        if not entries:
            raise ValueError("empty palette")
        seen: dict[tuple[float, float, float], str] = {}
        for entry_name, color in entries:
            if not 0.0 <= color.L <= 100.0:
                raise ValueError(
                    f"palette entry {entry_name!r}: L={color.L} outside [0, 100]"
                )
            key = color.as_tuple()
            if key in seen:
                raise ValueError(
                    f"palette entries {seen[key]!r} and {entry_name!r} share "
                    f"coordinates {key}"
                )
            seen[key] = entry_name
        self._entries = entries
        self.name = name
        self._array = np.array([c.as_tuple() for _, c in entries], dtype=float)
        self._array.setflags(write=False)

    @property
    def entries(self) -> tuple[tuple[str, LabColor], ...]:
        return self._entries

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self._entries)

    @property
    def colors(self) -> tuple[LabColor, ...]:
        return tuple(c for _, c in self._entries)

    def lab_array(self) -> np.ndarray:
        """All coordinates as a read-only (k, 3) array."""
        return self._array

    def extended(self, name: str, color: LabColor) -> "Palette":
        """A new palette with one more entry appended."""
        return Palette(self._entries + ((name, color),), name=self.name)

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self):
        return iter(self._entries)

    def __repr__(self) -> str:
        return f"Palette({self.name!r}, {len(self)} colors)"


def delta_e76(c1: LabColor, c2: LabColor) -> float:
    """CIE76 color difference: Euclidean distance in Lab."""
    return math.sqrt(
        (c1.L - c2.L) ** 2 + (c1.a - c2.a) ** 2 + (c1.b - c2.b) ** 2
    )


def delta_e76_matrix(labs1: np.ndarray, labs2: np.ndarray) -> np.ndarray:
    """Pairwise CIE76 distances between (n, 3) and (m, 3) arrays -> (n, m)."""
    labs1 = np.asarray(labs1, dtype=float)
    labs2 = np.asarray(labs2, dtype=float)
    diff = labs1[..., :, None, :] - labs2[..., None, :, :]
    return np.sqrt((diff * diff).sum(axis=-1))


def delta_e2000(
    c1: LabColor, c2: LabColor, weights: DeltaE2000Weights = MAP_WEIGHTS
) -> float:
    """CIEDE2000 color difference with the given weights."""
    return float(delta_e2000_pairs(c1.as_array(), c2.as_array(), weights))


def delta_e2000_pairs(
    labs1: np.ndarray, labs2: np.ndarray, weights: DeltaE2000Weights = MAP_WEIGHTS
) -> np.ndarray:
    """Elementwise CIEDE2000 over broadcastable (..., 3) Lab arrays.

    Hue arithmetic is done in degrees, matching the published reference
    implementation step by step.
    """
    labs1 = np.asarray(labs1, dtype=float)
    labs2 = np.asarray(labs2, dtype=float)
    L1, a1, b1 = labs1[..., 0], labs1[..., 1], labs1[..., 2]
    L2, a2, b2 = labs2[..., 0], labs2[..., 1], labs2[..., 2]

    c1 = np.hypot(a1, b1)
    c2 = np.hypot(a2, b2)
    cbar7 = (0.5 * (c1 + c2)) ** 7
    g = 0.5 * (1.0 - np.sqrt(cbar7 / (cbar7 + _POW25_7)))
    a1p = (1.0 + g) * a1
    a2p = (1.0 + g) * a2
    c1p = np.hypot(a1p, b1)
    c2p = np.hypot(a2p, b2)
    # atan2(0, 0) == 0 covers the achromatic convention
    h1p = np.degrees(np.arctan2(b1, a1p)) % 360.0
    h2p = np.degrees(np.arctan2(b2, a2p)) % 360.0

    dlp = L2 - L1
    dcp = c2p - c1p
    cprod = c1p * c2p
    dh = h2p - h1p
    dhp = np.where(dh > 180.0, dh - 360.0, np.where(dh < -180.0, dh + 360.0, dh))
    dhp = np.where(cprod == 0.0, 0.0, dhp)
    dHp = 2.0 * np.sqrt(cprod) * np.sin(np.radians(dhp) / 2.0)

    lbar = 0.5 * (L1 + L2)
    cbarp = 0.5 * (c1p + c2p)
    hsum = h1p + h2p
    hbar = np.where(
        np.abs(h1p - h2p) <= 180.0,
        0.5 * hsum,
        np.where(hsum < 360.0, 0.5 * (hsum + 360.0), 0.5 * (hsum - 360.0)),
    )
    hbar = np.where(cprod == 0.0, hsum, hbar)

    t = (
        1.0
        - 0.17 * np.cos(np.radians(hbar - 30.0))
        + 0.24 * np.cos(np.radians(2.0 * hbar))
        + 0.32 * np.cos(np.radians(3.0 * hbar + 6.0))
        - 0.20 * np.cos(np.radians(4.0 * hbar - 63.0))
    )
    dtheta = 30.0 * np.exp(-(((hbar - 275.0) / 25.0) ** 2))
    cbarp7 = cbarp ** 7
    rc = 2.0 * np.sqrt(cbarp7 / (cbarp7 + _POW25_7))
    l50 = (lbar - 50.0) ** 2
    sl = 1.0 + 0.015 * l50 / np.sqrt(20.0 + l50)
    sc = 1.0 + 0.045 * cbarp
    sh = 1.0 + 0.015 * cbarp * t
    rt = -np.sin(np.radians(2.0 * dtheta)) * rc

    fl = dlp / (weights.kl * sl)
    fc = dcp / (weights.kc * sc)
    fh = dHp / (weights.kh * sh)
    return np.sqrt(fl * fl + fc * fc + fh * fh + rt * fc * fh)


def delta_e2000_matrix(
    labs1: np.ndarray, labs2: np.ndarray, weights: DeltaE2000Weights = MAP_WEIGHTS
) -> np.ndarray:
    """Pairwise CIEDE2000 between (n, 3) and (m, 3) arrays -> (n, m)."""
    labs1 = np.asarray(labs1, dtype=float)
    labs2 = np.asarray(labs2, dtype=float)
    return delta_e2000_pairs(labs1[:, None, :], labs2[None, :, :], weights)


def metric_matrix(
    labs1: np.ndarray,
    labs2: np.ndarray,
    metric: str = "de76",
    weights: DeltaE2000Weights = MAP_WEIGHTS,
) -> np.ndarray:
    """Pairwise distances under ``metric`` ("de76" or "de00")."""
    if metric == "de76":
        return delta_e76_matrix(labs1, labs2)
    if metric == "de00":
        return delta_e2000_matrix(labs1, labs2, weights)
    raise ValueError(f"unknown metric {metric!r} (expected 'de76' or 'de00')")


def min_distance(
    color: LabColor,
    palette: Palette | Sequence[tuple[str, LabColor]],
    metric: str = "de76",
    weights: DeltaE2000Weights = MAP_WEIGHTS,
) -> tuple[float, int]:
    """Minimum distance from ``color`` to a palette and the nearest index.

    Ties break toward the lowest index.
    """
    if not isinstance(palette, Palette):
        palette = Palette(palette)
    dists = metric_matrix(color.as_array()[None, :], palette.lab_array(),
                          metric, weights)[0]
    idx = int(np.argmin(dists))
    return float(dists[idx]), idx
