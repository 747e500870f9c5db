"""Bundled data: the moscow-2014 palette, its published reference results,
and the semicolon-delimited palette/gamut file format.

File format: UTF-8 text, one ``name;L;a;b`` entry per line with ``.`` as
the decimal separator; lines starting with ``#`` and blank lines are
skipped.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

from .colors import LabColor, Palette
from .geometry import Gamut, build_gamut

#: The 14 colors of the 2014 Moscow metro map (11 lines, water,
#: background, text), with integer Lab coordinates.
MOSCOW_2014 = (
    ("Red", 52, 74, 53),
    ("Ocean green", 56, -45, 26),
    ("Cobalt", 35, 7, -43),
    ("Sky blue", 61, -16, -42),
    ("Olive brown", 41, 6, 27),
    ("Peach", 76, 24, 67),
    ("Pinkish purple", 43, 64, -24),
    ("Light mustard", 86, 4, 85),
    ("Light grey", 71, 0, -2),
    ("Greenish yellow", 80, -26, 68),
    ("Turquoise blue", 56, -21, -29),
    ("Pale blue", 93, -8, -9),
    ("White", 100, 0, 0),
    ("Black", 13, 2, 0),
)

#: Published minimal CIEDE2000 (kL=2) of each entry against the rest,
#: and the published column mean.
REFERENCE_MIN_DE00 = (29.1, 21.7, 19.4, 6.3, 20.4, 14.5, 28.3,
                      14.5, 9.4, 17.8, 6.3, 11.3, 9.4, 20.4)
REFERENCE_MIN_DE00_MEAN = 16.3

#: Published one-by-one extension under CIE76:
#: (name, per-step min dE76, per-step min dE00, L, a, b).
REFERENCE_GREEDY_CIE76 = (
    ("Bright green", 114.4, 22.0, 83, -138, 91),
    ("Blue", 87.0, 19.8, 33, 80, -109),
    ("Sea green", 67.7, 13.1, 85, -106, 31),
    ("Cyan", 65.3, 21.9, 87, -78, -21),
    ("Bright pink", 56.1, 14.4, 60, 100, -64),
)

#: Published one-by-one extension under the combined selection:
#: (name, per-step min dE00, L, a, b).
REFERENCE_GREEDY_COMBINED = (
    ("Cyan", 23.9, 87, -78, -21),
    ("Bright green", 22.0, 83, -138, 91),
    ("Blue", 19.8, 33, 80, -109),
    ("Pale lavender", 19.7, 86, 23, -22),
    ("Rose pink", 19.8, 78, 59, 12),
)

#: Published simultaneous two-color result (at a million restarts) and the
#: desk-scale floor asserted at ten thousand restarts.
REFERENCE_JOINT2_DE00 = 22.7
REFERENCE_JOINT2_FLOOR = 21.5
REFERENCE_JOINT2_COLORS = (
    ("Bright aqua", 84, -65, -12),
    ("Baby pink", 86, 35, 7),
)

#: Reproduction tolerances. The greedy tables depend on gamut corners the
#: reference never published, so they get wider bands than the pure-metric
#: checks; the step-1 radii bound how far the first found color may drift
#: from the published coordinates.
TOLERANCES = {
    "table1": 0.05,
    "table2": 3.0,
    "table2_step1_radius": 5.0,
    "table3": 1.5,
    "table3_step1_radius": 6.0,
}

BUILTIN_PALETTES = ("moscow-2014",)


def moscow_palette() -> Palette:
    return Palette(
        [(name, LabColor(float(L), float(a), float(b)))
         for name, L, a, b in MOSCOW_2014],
        name="moscow-2014",
    )


def parse_palette_text(text: str, name: str = "palette") -> Palette:
    """Parse ``name;L;a;b`` lines into a Palette."""
    entries = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(";")]
        if len(parts) != 4:
            raise ValueError(
                f"line {lineno}: expected 'name;L;a;b', got {line!r}"
            )
        try:
            coords = tuple(float(p) for p in parts[1:])
        except ValueError as exc:
            raise ValueError(f"line {lineno}: bad coordinate in {line!r}") from exc
        entries.append((parts[0], LabColor(*coords)))
    if not entries:
        raise ValueError("no palette entries found")
    return Palette(entries, name=name)


def load_palette(source: str | Path) -> Palette:
    """Load a palette from a builtin name or a file path."""
    if str(source) in BUILTIN_PALETTES:
        return moscow_palette()
    path = Path(source)
    return parse_palette_text(path.read_text(encoding="utf-8"), name=path.stem)


def format_palette_lines(entries: Iterable[tuple[str, LabColor]],
                         decimals: int = 2) -> str:
    """Render entries in the palette file format."""
    return "\n".join(
        f"{name};{c.L:.{decimals}f};{c.a:.{decimals}f};{c.b:.{decimals}f}"
        for name, c in entries
    )


def load_gamut(path: str | Path) -> Gamut:
    """Build a gamut from a corner-list file (palette file format)."""
    path = Path(path)
    corners = parse_palette_text(path.read_text(encoding="utf-8"), name=path.stem)
    return build_gamut(list(corners.colors), name=path.stem)
