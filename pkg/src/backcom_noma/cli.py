"""Command-line entry point: sweep runner, acceptance suite, ladder design.

Thresholds and powers are taken in dB/dBm on the command line; linear units
never appear.  Failures exit nonzero after printing a single machine-readable
JSON error line on stderr.
"""

from __future__ import annotations

import dataclasses
import json
import sys

import click

from .config import SystemConfig, default_partition
from .design import design_ladder
from .experiments import emit_csv, emit_svg, experiment_from_json, presets
from .experiments import run as run_experiment


def _fail(message: str, **detail):
    sys.stderr.write(json.dumps({"error": message, **detail}, sort_keys=True) + "\n")
    sys.exit(1)


@click.group()
def main():
    """Evaluation toolkit for NOMA-enhanced backscatter uplinks."""


@main.command("run")
@click.argument("target")
@click.option("--trials", type=int, default=None, help="Monte Carlo trials per grid point.")
@click.option("--seed", type=int, default=None, help="Master seed; fixes output bytes.")
@click.option("--out", type=click.Path(), default=None, help="CSV output path.")
@click.option("--engines", default=None, help="Comma-separated subset of analytic,montecarlo.")
@click.option("--svg", "svg_path", type=click.Path(), default=None, help="Also emit an SVG chart.")
def run_cmd(target, trials, seed, out, engines, svg_path):
    """Run a preset experiment or a JSON experiment file."""
    try:
        table = presets()
        if target in table:
            exp = table[target]
        else:
            exp = experiment_from_json(target)
        changes = {}
        if trials is not None:
            changes["trials"] = trials
        if seed is not None:
            changes["seed"] = seed
        if engines is not None:
            changes["engines"] = tuple(e.strip() for e in engines.split(",") if e.strip())
        if changes:
            exp = dataclasses.replace(exp, **changes)
        result = run_experiment(exp)
        path = out if out is not None else f"{exp.name}.csv"
        emit_csv(result, path)
        click.echo(f"wrote {path} ({len(result.rows)} rows)")
        if svg_path is not None:
            emit_svg(result, svg_path)
            click.echo(f"wrote {svg_path}")
    except SystemExit:
        raise
    except FileNotFoundError as exc:
        _fail("target is neither a preset nor a readable file", target=target, detail=str(exc))
    except Exception as exc:
        _fail(str(exc), target=target)


@main.command("validate")
@click.option("--trials", type=int, default=1_000_000, help="Monte Carlo trials per check.")
@click.option("--seed", type=int, default=20240901, help="Master seed for the checks.")
def validate_cmd(trials, seed):
    """Run the acceptance suite; one pass/fail line per criterion."""
    from .acceptance import run_all

    try:
        results = run_all(trials=trials, seed=seed)
    except Exception as exc:
        _fail(str(exc))
    failed = 0
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        click.echo(f"{status} criterion {r.index}: {r.title} -- {r.detail}")
        failed += not r.passed
    if failed:
        _fail(f"{failed} criterion(s) failed", failed=failed, total=len(results))


@main.command("design")
@click.argument("config_file", required=False)
@click.option("--gamma-db", type=float, default=None, help="Override the SINR threshold, dB.")
@click.option("--subregions", type=int, default=None, help="Override the subregion count.")
@click.option("--slack", type=float, default=1.0, help="Multiplier above each decode floor.")
def design_cmd(config_file, gamma_db, subregions, slack):
    """Print the minimum reflection-coefficient ladder for a config."""
    try:
        cfg = SystemConfig.from_json(config_file) if config_file else SystemConfig()
        if gamma_db is not None:
            cfg = cfg.with_(sinr_threshold_db=gamma_db)
        if subregions is not None:
            cfg = cfg.with_(subregion_count=subregions)
        ladder = design_ladder(cfg, default_partition(cfg), slack=slack)
    except Exception as exc:
        _fail(str(exc))
    for i, (xi, floor) in enumerate(zip(ladder.coefficients, ladder.binding_constraints), 1):
        click.echo(f"xi_{i} = {xi:.12g}  (floor {floor:.12g})")
    click.echo(f"feasible: {ladder.feasible}")
    if not ladder.feasible:
        sys.exit(2)


if __name__ == "__main__":
    main()
