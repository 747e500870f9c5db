"""Run reports: one structure rendered as human text or stable JSON.

Text output rounds distances to one decimal; JSON carries six decimals.
JSON is byte-stable for a given configuration (keys sorted, volatile
wall-clock field emitted as null) so repeated runs with the same seed can
be compared verbatim.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .colors import LabColor
from .convert import ADOBE_RGB_1998, RgbSpace, hex_from_lab
from .voronoi import SolutionSet


@dataclass
class RunReport:
    palette_name: str
    gamut_name: str
    method: str
    config: dict
    solution: SolutionSet
    space: RgbSpace = ADOBE_RGB_1998
    duration_ms: float | None = None
    seed: int | None = None

    def _color_entry(self, name: str, color: LabColor) -> dict:
        hex_code, clipped = hex_from_lab(color, self.space)
        return {
            "name": name,
            "L": round(color.L, 6),
            "a": round(color.a, 6),
            "b": round(color.b, 6),
            "hex": hex_code,
            "clipped": clipped,
        }

    def named_colors(self) -> list[tuple[str, LabColor]]:
        if self.solution.steps:
            return [(s.name, s.color) for s in self.solution.steps]
        return [
            (f"new-{i}", c) for i, c in enumerate(self.solution.colors, start=1)
        ]

    def to_dict(self) -> dict:
        sol = self.solution
        steps = [
            {
                "name": s.name,
                "L": round(s.color.L, 6),
                "a": round(s.color.a, 6),
                "b": round(s.color.b, 6),
                "min_de76": round(s.min_de76, 6),
                "min_de00": round(s.min_de00, 6),
            }
            for s in sol.steps
        ]
        return {
            "palette": self.palette_name,
            "gamut": self.gamut_name,
            "method": self.method,
            "config": self.config,
            "solution": [
                self._color_entry(n, c) for n, c in self.named_colors()
            ],
            "min_de76": round(sol.achieved_min_de76, 6),
            "min_de00": round(sol.achieved_min_de00, 6),
            "steps": steps,
            "seed": self.seed if self.seed is not None else sol.seed,
            # measured time varies run to run; kept out of the stable output
            "duration_ms": None,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        sol = self.solution
        lines = [
            f"method: {self.method}",
            f"palette: {self.palette_name}    gamut: {self.gamut_name}",
        ]
        seed = self.seed if self.seed is not None else sol.seed
        meta = []
        if seed is not None:
            meta.append(f"seed: {seed}")
        if self.duration_ms is not None:
            meta.append(f"duration: {self.duration_ms:.0f} ms")
        if not sol.converged:
            meta.append("NOT CONVERGED (step limit reached)")
        if meta:
            lines.append("    ".join(meta))
        lines.append("")

        named = self.named_colors()
        per_step = {s.name: s for s in sol.steps}
        header = f"{'name':<10} {'L':>8} {'a':>8} {'b':>8}"
        if per_step:
            header += f" {'min dE76':>9} {'min dE00':>9}"
        header += "  hex"
        lines.append(header)
        for name, color in named:
            row = f"{name:<10} {color.L:>8.2f} {color.a:>8.2f} {color.b:>8.2f}"
            if per_step:
                s = per_step[name]
                row += f" {s.min_de76:>9.1f} {s.min_de00:>9.1f}"
            hex_code, clipped = hex_from_lab(color, self.space)
            row += f"  {hex_code}" + (" (clipped)" if clipped else "")
            lines.append(row)
        lines.append("")
        lines.append(f"achieved min dE76: {sol.achieved_min_de76:.1f}")
        lines.append(f"achieved min dE00: {sol.achieved_min_de00:.1f}")
        lines.append("")
        lines.append("# solution in palette file format")
        for name, color in named:
            lines.append(f"{name};{color.L:.2f};{color.a:.2f};{color.b:.2f}")
        return "\n".join(lines) + "\n"
