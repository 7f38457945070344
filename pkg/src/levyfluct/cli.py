"""Command-line front end: scale-function tables, ad-hoc evaluation of the
analytic functionals, and the named verification experiments."""
from __future__ import annotations

import json
import os
import sys

import click
import numpy as np

from . import fluctuation as fl
from ._backend import backend_name
from .experiments import (EXPERIMENT_NAMES, ExperimentSpec,
                          InsufficientSampleError, default_specs, emit_report,
                          run_experiment)
from .models import LevyModel
from .scale import build_evaluator

FUNCTIONALS = {
    "exit-up": (fl.exit_up_lt, ("x", "b")),
    "exit-down": (fl.exit_down_lt, ("x", "b")),
    "one-sided-down": (fl.one_sided_down_lt, ("x",)),
    "killed-before-down": (fl.killed_before_down, ("x",)),
    "killed-before-up": (fl.killed_before_up, ("z",)),
    "killed-in-window": (fl.killed_in_window, ("u", "span")),
    "killed-before-exit": (fl.killed_before_exit, ("z", "a", "b")),
    "joint-cdf": (lambda ev, a, b: fl.joint_sup_inf_cdf(ev, fl.Window(a, b)),
                  ("a", "b")),
    "post-inf-sup-cdf": (fl.post_inf_sup_cdf, ("a", "b")),
    "max-loss-post-sup-cdf": (fl.max_loss_post_sup_cdf, ("d", "a", "b")),
    "exit-up-from-min": (fl.exit_up_lt_from_min, ("x", "i", "b")),
}


def _load_model(text):
    """Model from a JSON file path or an inline JSON object."""
    if text.strip().startswith("{"):
        return LevyModel.from_json(text)
    with open(text) as fh:
        return LevyModel.from_json(fh.read())


def _parse_values(spec):
    """A float or an inclusive lo:hi:count range."""
    parts = spec.split(":")
    if len(parts) == 1:
        return np.array([float(parts[0])])
    if len(parts) == 3:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 1:
            raise click.BadParameter(f"range count must be >= 1 in {spec!r}")
        return np.linspace(lo, hi, count)
    raise click.BadParameter(f"expected VALUE or LO:HI:COUNT, got {spec!r}")


@click.group()
@click.version_option()
def main():
    """Fluctuation identities of killed spectrally negative Levy processes,
    with Monte Carlo verification."""


@main.command()
@click.option("--model", "model_text", required=True,
              help="Model JSON (file path or inline object).")
@click.option("--gamma", type=float, required=True, help="Killing rate.")
@click.option("--x-max", type=float, default=6.0, show_default=True)
@click.option("--h-grid", type=float, default=1e-3, show_default=True)
@click.option("--method", type=click.Choice(["auto", "closed_form", "inversion"]),
              default="auto", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default="-",
              help="Destination CSV ('-' for stdout).")
def scale(model_text, gamma, x_max, h_grid, method, out):
    """Dump the scale-function grid as CSV (columns x,W,Wprime,Z)."""
    model = _load_model(model_text)
    ev = build_evaluator(model, gamma, x_max=x_max, h_grid=h_grid, method=method)
    if out == "-":
        click.echo("x,W,Wprime,Z")
        for row in ev.grid_table():
            click.echo(",".join(format(v, ".12g") for v in row))
    else:
        ev.dump_csv(out)
        click.echo(f"wrote {ev.xs.size} rows to {out}")


@main.command(name="eval")
@click.argument("functional", type=click.Choice(sorted(FUNCTIONALS)))
@click.option("--model", "model_text", required=True,
              help="Model JSON (file path or inline object).")
@click.option("--gamma", type=float, required=True, help="Killing rate.")
@click.option("--x-max", type=float, default=6.0, show_default=True)
@click.option("--param", "params", multiple=True, metavar="NAME=SPEC",
              help="Parameter value or range lo:hi:count; repeatable.")
@click.option("--out", type=click.Path(dir_okay=False), default="-",
              help="Destination CSV ('-' for stdout).")
def eval_cmd(functional, model_text, gamma, x_max, params, out):
    """Evaluate one analytic functional over a parameter grid.

    Example: eval joint-cdf --model m.json --gamma 0.5
    --param a=-1.5:-0.5:3 --param b=0.5:1.5:3
    """
    func, names = FUNCTIONALS[functional]
    given = {}
    for p in params:
        if "=" not in p:
            raise click.BadParameter(f"expected NAME=SPEC, got {p!r}")
        name, spec = p.split("=", 1)
        if name not in names:
            raise click.BadParameter(
                f"{functional} takes parameters {names}, got {name!r}")
        given[name] = _parse_values(spec)
    missing = [n for n in names if n not in given]
    if missing:
        raise click.BadParameter(f"missing --param for {missing}")

    model = _load_model(model_text)
    ev = build_evaluator(model, gamma, x_max=x_max)
    grids = np.meshgrid(*[given[n] for n in names], indexing="ij")
    lines = [",".join(names) + ",value"]
    for point in zip(*[g.ravel() for g in grids]):
        value = func(ev, *point)
        lines.append(",".join(format(v, ".12g") for v in point)
                     + "," + format(value, ".12g"))
    text = "\n".join(lines) + "\n"
    if out == "-":
        click.echo(text, nl=False)
    else:
        with open(out, "w") as fh:
            fh.write(text)
        click.echo(f"wrote {len(lines) - 1} rows to {out}")


@main.command()
@click.argument("experiment",
                type=click.Choice(sorted(EXPERIMENT_NAMES) + ["all"]))
@click.option("--spec", "spec_path", type=click.Path(exists=True, dir_okay=False),
              help="JSON spec overriding the shipped default.")
@click.option("--out", "out_dir", type=click.Path(file_okay=False),
              default="verify-out", show_default=True)
@click.option("--workers", type=int, default=None,
              help="Worker processes (default: LEVYFLUCT_WORKERS or CPU count).")
@click.option("--dump-paths", type=click.Path(dir_okay=False), default=None,
              help="Also write raw per-path summaries as CSV.")
@click.option("--backend", type=click.Choice(["auto", "compiled", "python"]),
              default="auto", show_default=True,
              help="Simulation kernel backend.")
def verify(experiment, spec_path, out_dir, workers, dump_paths, backend):
    """Run a named verification experiment; exit 0 iff every tolerance holds.

    Without --spec, the shipped default spec(s) for the experiment run (these
    defaults are the acceptance suite).  Reports are written as report.csv
    plus summary.txt per spec.
    """
    if spec_path is not None:
        with open(spec_path) as fh:
            specs = [ExperimentSpec.from_json(fh.read())]
        if experiment != "all" and specs[0].name != experiment:
            raise click.BadParameter(
                f"spec file is for {specs[0].name!r}, not {experiment!r}")
    elif experiment == "all":
        specs = [s for name in EXPERIMENT_NAMES for s in default_specs(name)]
    else:
        specs = default_specs(experiment)

    click.echo(f"backend: {backend_name(backend)}")
    all_passed = True
    for k, spec in enumerate(specs):
        tag = spec.name if len(specs) == 1 else f"{spec.name}_{k}"
        try:
            report = run_experiment(spec, workers=workers, backend=backend,
                                    dump_paths=dump_paths)
        except InsufficientSampleError as exc:
            click.echo(f"[FAIL] {tag}: {exc}")
            all_passed = False
            continue
        dest = os.path.join(out_dir, tag)
        csv_path, _ = emit_report(report, dest)
        status = "PASS" if report.passed else "FAIL"
        click.echo(f"[{status}] {tag}: {len(report.rows)} checks, "
                   f"max gap {report.max_gap:.4g}, "
                   f"runtime {report.runtime_s:.1f}s -> {csv_path}")
        for row in report.rows:
            mark = "ok" if row.passed else "FAIL"
            click.echo(f"    {mark:>4} {row.label}: analytic={row.analytic:.6g} "
                       f"empirical={row.empirical:.6g} tol={row.tolerance:g}")
        all_passed = all_passed and report.passed
    sys.exit(0 if all_passed else 1)


if __name__ == "__main__":
    main()
