"""Command-line surface.

Exit codes: 0 success (and all reproduction rows in tolerance), 1 solver
failure or out-of-tolerance reproduction, 2 usage or input errors.
"""

from __future__ import annotations

import sys
import time
from dataclasses import replace

import click
import numpy as np

import palext

from .colors import DeltaE2000Weights, LabColor, delta_e2000, delta_e76
from .datasets import (
    REFERENCE_GREEDY_CIE76,
    REFERENCE_GREEDY_COMBINED,
    REFERENCE_JOINT2_DE00,
    REFERENCE_JOINT2_FLOOR,
    REFERENCE_MIN_DE00,
    REFERENCE_MIN_DE00_MEAN,
    TOLERANCES,
    load_gamut,
    load_palette,
    moscow_palette,
)
from .geometry import default_gamut
from .optimize import (
    OptimizerConfig,
    solve_ballistic,
    solve_joint_simplex,
    solve_monte_carlo,
)
from .report import RunReport
from .swatches import save_swatch_sheet
from .voronoi import SolverError, greedy_sequence


def _parse_lab(value: str) -> LabColor:
    parts = value.split(",")
    if len(parts) != 3:
        raise click.UsageError(
            f"expected a Lab triple like '52,74,53', got {value!r}"
        )
    try:
        return LabColor(*(float(p) for p in parts))
    except ValueError:
        raise click.UsageError(f"non-numeric Lab component in {value!r}")


def _load_palette_arg(source: str):
    try:
        return load_palette(source)
    except (OSError, ValueError) as exc:
        raise click.UsageError(f"cannot load palette {source!r}: {exc}")


def _load_gamut_arg(path: str | None):
    if path is None:
        return default_gamut()
    try:
        return load_gamut(path)
    except (OSError, ValueError) as exc:
        raise click.UsageError(f"cannot load gamut {path!r}: {exc}")


def _build_config(config_path, **overrides) -> OptimizerConfig:
    try:
        cfg = (
            OptimizerConfig.from_file(config_path)
            if config_path
            else OptimizerConfig()
        )
        clean = {k: v for k, v in overrides.items() if v is not None}
        return replace(cfg, **clean) if clean else cfg
    except (OSError, ValueError) as exc:
        raise click.UsageError(f"bad optimizer config: {exc}")


def _emit(report: RunReport, as_json: bool, swatches: str | None) -> None:
    if swatches:
        save_swatch_sheet(
            swatches, report.named_colors(), report.space,
            title=f"{report.palette_name} + {report.method}",
        )
    click.echo(report.to_json() if as_json else report.to_text(), nl=False)


@click.group()
@click.version_option(version=palext.__version__, prog_name="palext")
def main() -> None:
    """Pick new colors maximally distant from a palette inside a gamut."""


@main.command()
@click.argument("color1")
@click.argument("color2")
@click.option("--metric", type=click.Choice(["de76", "de2000"]), default="de2000",
              show_default=True)
@click.option("--kl", type=float, default=2.0, show_default=True,
              help="CIEDE2000 lightness weight.")
@click.option("--kc", type=float, default=1.0, show_default=True)
@click.option("--kh", type=float, default=1.0, show_default=True)
def dist(color1, color2, metric, kl, kc, kh) -> None:
    """Distance between two Lab colors, e.g. `dist 61,-16,-42 56,-21,-29`."""
    c1, c2 = _parse_lab(color1), _parse_lab(color2)
    if metric == "de76":
        value = delta_e76(c1, c2)
    else:
        value = delta_e2000(c1, c2, DeltaE2000Weights(kl, kc, kh))
    click.echo(f"{value:.4f}")


@main.command("next")
@click.argument("palette")
@click.option("--method", type=click.Choice(["voronoi76", "combined", "mc", "ballistic"]),
              default="voronoi76", show_default=True)
@click.option("--count", "-n", type=click.IntRange(min=1), default=1,
              show_default=True, help="How many new colors.")
@click.option("--gamut", "gamut_path", type=str, default=None,
              help="Corner-list file overriding the built-in gamut.")
@click.option("--metric", type=click.Choice(["de76", "de00"]), default="de76",
              show_default=True, help="Objective metric for --method mc.")
@click.option("--kl", type=float, default=2.0, show_default=True)
@click.option("--kc", type=float, default=1.0, show_default=True)
@click.option("--kh", type=float, default=1.0, show_default=True)
@click.option("--seed", type=int, default=None, help="Random seed (mc/ballistic).")
@click.option("--samples", type=click.IntRange(min=1), default=None,
              help="Monte-Carlo sample count.")
@click.option("--config", "config_path", type=str, default=None,
              help="Optimizer config file (key = value lines).")
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
@click.option("--swatches", type=str, default=None,
              help="Also render a swatch sheet to this file.")
def next_cmd(palette, method, count, gamut_path, metric, kl, kc, kh, seed,
             samples, config_path, as_json, swatches) -> None:
    """Extend PALETTE (builtin name or file) with new colors."""
    pal = _load_palette_arg(palette)
    gamut = _load_gamut_arg(gamut_path)
    weights = DeltaE2000Weights(kl, kc, kh)
    cfg = _build_config(config_path, seed=seed, mc_samples=samples)

    started = time.perf_counter()
    try:
        if method == "voronoi76":
            solution = greedy_sequence(pal, gamut, count, "cie76", weights)
        elif method == "combined":
            solution = greedy_sequence(pal, gamut, count, "combined", weights)
        elif method == "mc":
            solution = solve_monte_carlo(pal, gamut, count, cfg, metric, weights)
        else:
            solution = solve_ballistic(pal, gamut, count, cfg, weights)
    except SolverError as exc:
        click.echo(f"solver error: {exc}", err=True)
        sys.exit(1)
    duration_ms = 1000.0 * (time.perf_counter() - started)

    config_echo = {"count": count, "kl": kl, "kc": kc, "kh": kh}
    if method == "mc":
        config_echo.update(metric=metric, samples=cfg.mc_samples, seed=cfg.seed)
    elif method == "ballistic":
        config_echo.update(
            seed=cfg.seed,
            step_size=cfg.ballistic.step_size,
            damping=cfg.ballistic.damping,
            boundary_charge=cfg.ballistic.boundary_charge,
            max_steps=cfg.ballistic.max_steps,
        )
    report = RunReport(
        palette_name=pal.name,
        gamut_name=gamut.name,
        method=solution.method,
        config=config_echo,
        solution=solution,
        duration_ms=duration_ms,
        seed=solution.seed,
    )
    _emit(report, as_json, swatches)


@main.command()
@click.argument("palette")
@click.option("--m", "--count", "m", type=click.IntRange(min=1), default=2,
              show_default=True, help="How many colors to place at once.")
@click.option("--restarts", type=click.IntRange(min=1), default=None,
              help="Local-search restarts (default 10000).")
@click.option("--seed", type=int, default=None)
@click.option("--gamut", "gamut_path", type=str, default=None)
@click.option("--kl", type=float, default=2.0, show_default=True)
@click.option("--kc", type=float, default=1.0, show_default=True)
@click.option("--kh", type=float, default=1.0, show_default=True)
@click.option("--config", "config_path", type=str, default=None)
@click.option("--json", "as_json", is_flag=True)
@click.option("--swatches", type=str, default=None)
def joint(palette, m, restarts, seed, gamut_path, kl, kc, kh, config_path,
          as_json, swatches) -> None:
    """Place m new colors simultaneously (restarted direct search)."""
    pal = _load_palette_arg(palette)
    gamut = _load_gamut_arg(gamut_path)
    weights = DeltaE2000Weights(kl, kc, kh)
    cfg = _build_config(config_path, seed=seed, restarts=restarts)

    started = time.perf_counter()
    try:
        solution = solve_joint_simplex(pal, gamut, m, cfg, weights)
    except SolverError as exc:
        click.echo(f"solver error: {exc}", err=True)
        sys.exit(1)
    duration_ms = 1000.0 * (time.perf_counter() - started)

    report = RunReport(
        palette_name=pal.name,
        gamut_name=gamut.name,
        method=solution.method,
        config={
            "m": m,
            "restarts": cfg.restarts,
            "seed": cfg.seed,
            "max_iterations": cfg.max_iterations,
            "penalty_weight": cfg.penalty_weight,
            "kl": kl, "kc": kc, "kh": kh,
        },
        solution=solution,
        duration_ms=duration_ms,
        seed=cfg.seed,
    )
    _emit(report, as_json, swatches)


def _check_rows(rows) -> bool:
    """Print computed-vs-reference rows; return overall pass."""
    all_pass = True
    click.echo(f"{'entry':<18} {'computed':>9} {'reference':>10}  status")
    for label, computed, reference, ok in rows:
        all_pass &= ok
        click.echo(
            f"{label:<18} {computed:>9.2f} {reference:>10.1f}  "
            f"{'PASS' if ok else 'FAIL'}"
        )
    return all_pass


@main.command()
@click.argument("target", type=click.Choice(["table1", "table2", "table3", "joint2"]))
@click.option("--restarts", type=click.IntRange(min=1), default=10_000,
              show_default=True, help="Restarts for the joint2 target.")
@click.option("--seed", type=int, default=0, show_default=True)
def reproduce(target, restarts, seed) -> None:
    """Recompute a published reference result and report PASS/FAIL rows."""
    pal = moscow_palette()
    gamut = default_gamut()

    if target == "table1":
        tol = TOLERANCES["table1"]
        from .colors import delta_e2000_matrix

        labs = pal.lab_array()
        d = delta_e2000_matrix(labs, labs)
        np.fill_diagonal(d, np.inf)
        mins = d.min(axis=1)
        rows = [
            (name, float(computed), ref, abs(computed - ref) <= tol)
            for (name, _), computed, ref in zip(pal.entries, mins, REFERENCE_MIN_DE00)
        ]
        mean = float(mins.mean())
        rows.append(("mean", mean, REFERENCE_MIN_DE00_MEAN,
                     abs(mean - REFERENCE_MIN_DE00_MEAN) <= tol))
        click.echo(f"table1: per-entry min dE00 (kl=2), tolerance +-{tol}")
        ok = _check_rows(rows)

    elif target == "table2":
        tol = TOLERANCES["table2"]
        solution = greedy_sequence(pal, gamut, 5, "cie76")
        rows = [
            (ref_name, s.min_de76, ref_val, abs(s.min_de76 - ref_val) <= tol)
            for s, (ref_name, ref_val, _, *_)
            in zip(solution.steps, REFERENCE_GREEDY_CIE76)
        ]
        click.echo(f"table2: one-by-one min dE76, tolerance +-{tol}")
        ok = _check_rows(rows)
        first = solution.steps[0].color
        ref = LabColor(*(float(v) for v in REFERENCE_GREEDY_CIE76[0][3:]))
        drift = delta_e76(first, ref)
        near = drift <= TOLERANCES["table2_step1_radius"]
        click.echo(f"step-1 color drift from reference: {drift:.2f} dE76 "
                   f"(limit {TOLERANCES['table2_step1_radius']})  "
                   f"{'PASS' if near else 'FAIL'}")
        ok &= near

    elif target == "table3":
        tol = TOLERANCES["table3"]
        solution = greedy_sequence(pal, gamut, 5, "combined")
        rows = [
            (ref_name, s.min_de00, ref_val, abs(s.min_de00 - ref_val) <= tol)
            for s, (ref_name, ref_val, *_)
            in zip(solution.steps, REFERENCE_GREEDY_COMBINED)
        ]
        click.echo(f"table3: one-by-one min dE00, tolerance +-{tol}")
        ok = _check_rows(rows)
        first = solution.steps[0].color
        ref = LabColor(*(float(v) for v in REFERENCE_GREEDY_COMBINED[0][2:]))
        drift = delta_e76(first, ref)
        near = drift <= TOLERANCES["table3_step1_radius"]
        click.echo(f"step-1 color drift from reference: {drift:.2f} dE76 "
                   f"(limit {TOLERANCES['table3_step1_radius']})  "
                   f"{'PASS' if near else 'FAIL'}")
        ok &= near

    else:  # joint2
        cfg = OptimizerConfig(restarts=restarts, seed=seed)
        solution = solve_joint_simplex(pal, gamut, 2, cfg)
        floor = REFERENCE_JOINT2_FLOOR
        ok = solution.achieved_min_de00 >= floor
        click.echo(
            f"joint2: two colors at {restarts} restarts, seed {seed}\n"
            f"achieved min dE00 = {solution.achieved_min_de00:.2f} "
            f"(floor {floor}, reference full-scale value "
            f"{REFERENCE_JOINT2_DE00})  "
            f"{'PASS' if ok else 'FAIL'}"
        )
        for c in solution.colors:
            click.echo(f"  ({c.L:.2f}, {c.a:.2f}, {c.b:.2f})")

    click.echo(f"{target}: {'PASS' if ok else 'FAIL'}")
    sys.exit(0 if ok else 1)


if __name__ == "__main__":
    main()
