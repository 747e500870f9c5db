"""Swatch-sheet rendering: one labeled rectangle per color, saved to file."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.patches import Rectangle

from .colors import LabColor
from .convert import ADOBE_RGB_1998, RgbSpace, hex_from_lab, rgb_from_lab


def save_swatch_sheet(
    path: str | Path,
    entries: Sequence[tuple[str, LabColor]],
    space: RgbSpace = ADOBE_RGB_1998,
    title: str | None = None,
    columns: int = 4,
) -> Path:
    """Render labeled color rectangles and save to ``path``.

    The file format follows the extension (svg, png, pdf, ...). Colors
    outside the displayable RGB range are shown clipped and flagged with a
    dashed border and an asterisk after the hex code.
    """
    if not entries:
        raise ValueError("nothing to render: empty entry list")
    cols = min(columns, len(entries))
    rows = (len(entries) + cols - 1) // cols

    fig, ax = plt.subplots(figsize=(2.4 * cols, 1.6 * rows))
    ax.set_xlim(0, cols)
    ax.set_ylim(rows, 0)
    ax.axis("off")
    if title:
        ax.set_title(title)

    for i, (name, color) in enumerate(entries):
        col, row = i % cols, i // cols
        rgb, _ = rgb_from_lab(color, space)
        hex_code, clipped = hex_from_lab(color, space)
        ax.add_patch(
            Rectangle(
                (col + 0.03, row + 0.03), 0.94, 0.94,
                facecolor=rgb,
                edgecolor="black",
                linestyle="--" if clipped else "-",
                linewidth=1.2 if clipped else 0.6,
            )
        )
        text_color = "black" if color.L > 55 else "white"
        label = f"{name}\n{hex_code}{'*' if clipped else ''}\n" \
                f"({color.L:.0f}, {color.a:.0f}, {color.b:.0f})"
        ax.text(col + 0.5, row + 0.5, label, ha="center", va="center",
                color=text_color, fontsize=8)

    fig.tight_layout()
    out = Path(path)
    fig.savefig(out)
    plt.close(fig)
    return out
