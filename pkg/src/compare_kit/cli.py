"""Command-line front end: evaluation, sweeps, conversions, and the server.

Exit codes: 0 success, 2 validation or infeasibility, 3 numeric failure,
1 I/O error. Human-readable messages go to stderr; with ``--format json``
a machine-readable error object is also printed to stdout.
"""

from __future__ import annotations

import csv
import io
import json
import os
import sys
from typing import Callable

import click

from . import engine
from .errors import CompareKitError, ValidationFailure
from .svg import render_svg

__all__ = ["main"]


def _emit(text: str, output: str | None) -> None:
    if output is None:
        click.echo(text, nl=not text.endswith("\n"))
    else:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _run(producer: Callable[[], str], fmt: str, output: str | None) -> None:
    try:
        text = producer()
        _emit(text, output)
    except CompareKitError as exc:
        click.echo(f"error: {exc.message}", err=True)
        if fmt == "json":
            click.echo(engine.canonical_json({"error": exc.to_payload()}))
        sys.exit(exc.exit_code)
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


def _load_scenario(path: str) -> engine.Scenario:
    with open(path, encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationFailure(f"malformed JSON in {path}: {exc}",
                                    field="scenario")
    return engine.Scenario.from_dict(payload)


def _kv_render(result: dict, fmt: str) -> str:
    if fmt == "json":
        return engine.canonical_json(result)
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(result.keys())
        writer.writerow(result.values())
        return buffer.getvalue()
    lines = ["| Field | Value |", "| --- | --- |"]
    lines += [f"| {key} | {value} |" for key, value in result.items()]
    return "\n".join(lines) + "\n"


def _shape_flag(value: str | None):
    if value is None:
        return None
    try:
        return float(value)
    except ValueError:
        return value


format_option = click.option(
    "--format", "fmt", type=click.Choice(["json", "csv", "markdown"]),
    default="json", show_default=True, help="Output format.")
output_option = click.option(
    "--output", type=click.Path(dir_okay=False), default=None,
    help="Write to this file instead of stdout.")


@click.group()
@click.version_option(package_name="artifact", prog_name="compare-kit")
def main() -> None:
    """Composite-versus-single endpoint design calculations."""


@main.command()
@click.option("--scenario", required=True, type=click.Path(dir_okay=False),
              help="Scenario JSON file.")
@format_option
@output_option
def evaluate(scenario: str, fmt: str, output: str | None) -> None:
    """Evaluate one scenario and print its design report."""
    def producer() -> str:
        report = engine.evaluate(_load_scenario(scenario))
        return engine.render_report(report, fmt)
    _run(producer, fmt, output)


@main.command()
@click.option("--scenario", required=True, type=click.Path(dir_okay=False),
              help="Base scenario JSON file.")
@click.option("--grid", "grids", multiple=True, required=True,
              help="Axis as name=start:stop:step or name=v1,v2,... "
                   "(repeat for a second axis).")
@click.option("--svg", "svg_path", type=click.Path(dir_okay=False),
              default=None, help="Also write an ARE line chart to this file.")
@format_option
@output_option
def sweep(scenario: str, grids: tuple[str, ...], svg_path: str | None,
          fmt: str, output: str | None) -> None:
    """Evaluate a 1- or 2-axis grid of scenario variants."""
    def producer() -> str:
        base = _load_scenario(scenario)
        table = engine.sweep(base, [engine.parse_grid_axis(g) for g in grids])
        if svg_path is not None:
            with open(svg_path, "w", encoding="utf-8", newline="") as fh:
                fh.write(render_svg(table))
        return engine.render_report(table, fmt)
    _run(producer, fmt, output)


@main.command()
@click.option("--scenario", type=click.Path(dir_okay=False), default=None,
              help="Scenario JSON file (alternative to inline flags).")
@click.option("--kind", type=click.Choice(["binary", "survival"]),
              default=None)
@click.option("--label", default=None)
@click.option("--p1", type=float, default=None)
@click.option("--p2", type=float, default=None)
@click.option("--delta1", type=float, default=None)
@click.option("--delta2", type=float, default=None)
@click.option("--rho", type=float, default=None)
@click.option("--variance-variant", "variance_variant",
              type=click.Choice(["pooled", "unpooled"]), default=None)
@click.option("--shape1", default=None,
              help="Number or constant/increasing/decreasing.")
@click.option("--shape2", default=None,
              help="Number or constant/increasing/decreasing.")
@click.option("--hr1", type=float, default=None)
@click.option("--hr2", type=float, default=None)
@click.option("--spearman-rho", "spearman_rho", type=float, default=None)
@click.option("--tau", type=float, default=None)
@click.option("--eps1-terminal/--eps1-nonterminal", "eps1_terminal",
              default=None)
@click.option("--alpha", type=float, default=None)
@click.option("--power", type=float, default=None)
@click.option("--sidedness", type=click.Choice(["one", "two"]), default=None)
@format_option
@output_option
def samplesize(scenario: str | None, fmt: str, output: str | None,
               **flags) -> None:
    """Required total sample sizes for the composite and relevant designs."""
    def producer() -> str:
        if scenario is not None:
            sc = _load_scenario(scenario)
        else:
            flags["shape1"] = _shape_flag(flags.get("shape1"))
            flags["shape2"] = _shape_flag(flags.get("shape2"))
            payload = {k: v for k, v in flags.items() if v is not None}
            sc = engine.Scenario.from_dict(payload)
        return _kv_render(engine.sample_size_summary(sc), fmt)
    _run(producer, fmt, output)


@main.command()
@click.option("--p1", type=float, default=None)
@click.option("--p2", type=float, default=None)
@click.option("--rho", type=float, default=None)
@click.option("--conditional-eps1-given-eps2", "conditional_eps1_given_eps2",
              type=float, default=None)
@click.option("--spearman-rho", "spearman_rho", type=float, default=None)
@click.option("--theta", type=float, default=None)
@format_option
@output_option
def associate(fmt: str, output: str | None, **flags) -> None:
    """Convert between association measures (correlation, conditionals,
    copula parameter, Kendall tau)."""
    def producer() -> str:
        payload = {k: v for k, v in flags.items() if v is not None}
        return _kv_render(engine.convert_association(payload), fmt)
    _run(producer, fmt, output)


@main.command()
@click.option("--scenario", required=True, type=click.Path(dir_okay=False),
              help="Scenario JSON file.")
@click.option("--endpoint", type=click.Choice(["composite", "relevant"]),
              default="composite", show_default=True)
@click.option("--n-total", "n_total", type=int, required=True,
              help="Total subjects across both arms.")
@click.option("--n-replications", "n_replications", type=int, default=1000,
              show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@format_option
@output_option
def simulate(scenario: str, endpoint: str, n_total: int, n_replications: int,
             seed: int, fmt: str, output: str | None) -> None:
    """Estimate power at a given sample size by Monte Carlo."""
    def producer() -> str:
        sc = _load_scenario(scenario)
        result = engine.simulate(sc, endpoint, n_total, n_replications, seed)
        return _kv_render(result, fmt)
    _run(producer, fmt, output)


@main.command()
@click.option("--p1", type=float, required=True,
              help="Control-arm frequency of the relevant endpoint.")
@click.option("--p2", type=float, required=True,
              help="Control-arm frequency of the additional endpoint.")
@format_option
@output_option
def bounds(p1: float, p2: float, fmt: str, output: str | None) -> None:
    """Feasible correlation interval for two binary endpoints."""
    def producer() -> str:
        from .binary import BinaryMarginals, correlation_bounds
        lower, upper = correlation_bounds(BinaryMarginals(p1=p1, p2=p2))
        result = {"p1": p1, "p2": p2, "rho_lower_bound": lower,
                  "rho_upper_bound": upper}
        if fmt == "json":
            return engine.canonical_json(result)
        if fmt == "csv":
            return _kv_render(result, "csv")
        return (f"rho_lower_bound = {lower:.6f}\n"
                f"rho_upper_bound = {upper:.6f}")
    _run(producer, fmt, output)


@main.command()
@click.option("--bind", default=None,
              help="host:port to listen on (default env BIND_ADDR or "
                   "127.0.0.1:8000).")
def serve(bind: str | None) -> None:
    """Run the HTTP service (blocks until interrupted)."""
    import uvicorn

    from .service import create_app

    address = bind or os.environ.get("BIND_ADDR", "127.0.0.1:8000")
    host, _, port_text = address.rpartition(":")
    if not host or not port_text.isdigit():
        click.echo(f"error: BIND_ADDR must look like host:port, got "
                   f"{address!r}", err=True)
        sys.exit(2)
    level = os.environ.get("LOG_LEVEL", "info").lower()
    uvicorn.run(create_app(), host=host, port=int(port_text), log_level=level)


if __name__ == "__main__":
    main()
