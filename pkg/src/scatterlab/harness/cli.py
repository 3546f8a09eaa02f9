"""Command line entry point: ``scatterlab run | verify-all | list-experiments``."""
from __future__ import annotations

import sys

import click

from .config import ConfigError, load_config
from .experiments import REGISTRY
from .runner import run, write_outputs
from .suites import default_suite


def _summary(report) -> str:
    ok = sum(r.passed for r in report.rows)
    flag = "PASS" if report.passed else "FAIL"
    return f"{flag} {report.experiment}: {ok}/{len(report.rows)} rows"


@click.group()
def main():
    """Numerical experiments for Green's-function eigenfunctions on spheres."""


@main.command("run")
@click.argument("config", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=None,
              help="Directory for reports (defaults to output.path in the config).")
def run_cmd(config, out_dir):
    """Run one experiment CONFIG and write its report."""
    try:
        cfg = load_config(config)
    except ConfigError as exc:
        raise click.UsageError(str(exc)) from exc
    report = run(cfg)
    for path in write_outputs(report, cfg, out_dir):
        click.echo(f"wrote {path}")
    click.echo(_summary(report))
    sys.exit(0 if report.passed else 1)


@main.command("verify-all")
@click.option("--dim", "d", type=click.Choice(["2", "3"]), required=True)
@click.option("--out", "out_dir", type=click.Path(file_okay=False), required=True)
def verify_all(d, out_dir):
    """Run the built-in suite for one sphere dimension."""
    all_ok = True
    for cfg in default_suite(int(d)):
        cfg.output_format = "both"
        report = run(cfg)
        write_outputs(report, cfg, out_dir)
        click.echo(_summary(report))
        all_ok &= report.passed
    sys.exit(0 if all_ok else 1)


@main.command("list-experiments")
def list_experiments():
    """Show the experiment kinds a config may name."""
    for kind, exp in REGISTRY.items():
        click.echo(f"{kind:14s} {exp.description}")
