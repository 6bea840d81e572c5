"""Command-line interface.

Exit codes: 0 on success, 1 when learning finished but some step failed or
the learned structure diverges from the demonstration, 2 on I/O errors.
"""

from __future__ import annotations

import json
import sys
from dataclasses import replace
from pathlib import Path

import click

from .fixtures import fixture_events, fixture_names, fixture_trace
from .pipeline import (
    PipelineConfig,
    STANDARD_NOISE,
    config_from_json,
    learn as run_learn,
    run_metrics,
    standard_config,
)
from .plan import PlanFormatError, parse, reverse_plan, serialize
from .sensor import NoiseConfig, expand_demo, frames_to_json, trace_from_json, trace_to_json
from .assembly import InfeasiblePlacement

IO_ERROR = 2
STEP_FAILURE = 1


def _load_trace(spec: str):
    """A trace argument is a file path or a built-in fixture name."""
    path = Path(spec)
    if path.exists():
        try:
            return trace_from_json(path.read_text())
        except (ValueError, InfeasiblePlacement) as e:
            click.echo(f"error: bad trace file {spec}: {e}", err=True)
            sys.exit(IO_ERROR)
    if spec in fixture_names():
        return fixture_trace(spec)
    click.echo(f"error: {spec!r} is neither a file nor a fixture ({', '.join(fixture_names())})", err=True)
    sys.exit(IO_ERROR)


def _load_config(path: str | None) -> PipelineConfig:
    if path is None:
        return PipelineConfig()
    try:
        return config_from_json(Path(path).read_text())
    except (OSError, ValueError) as e:
        click.echo(f"error: bad config {path}: {e}", err=True)
        sys.exit(IO_ERROR)


@click.group()
def main() -> None:
    """Learn machine-readable brick construction plans from demonstrations."""


@main.command(name="learn")
@click.option("--trace", required=True, help="Trace JSON file or built-in fixture name.")
@click.option("--config", "config_path", default=None, help="Pipeline config JSON file.")
@click.option("--out", required=True, type=click.Path(), help="Output plan file.")
@click.option("--no-verify", is_flag=True, help="Disable simulation verification (ablation).")
def learn_cmd(trace: str, config_path: str | None, out: str, no_verify: bool) -> None:
    """Learn a construction plan from a demonstration trace."""
    demo = _load_trace(trace)
    cfg = _load_config(config_path)
    if no_verify:
        cfg = replace(cfg, verification_enabled=False)
    report = run_learn(demo, cfg)
    try:
        Path(out).write_bytes(serialize(report.plan, demo.catalog))
    except OSError as e:
        click.echo(f"error: cannot write {out}: {e}", err=True)
        sys.exit(IO_ERROR)
    click.echo(
        f"learned {len(report.plan.tasks)} tasks in {report.elapsed:.2f}s; "
        f"cost={report.cost.total} success={report.success}"
    )
    for err in report.step_errors:
        click.echo(f"  step failure: {err}", err=True)
    if report.step_errors or not report.success:
        sys.exit(STEP_FAILURE)


@main.command(name="metrics")
@click.option("--fixtures", default="all", help="Comma-separated fixture names or 'all'.")
@click.option("--noise-grid", default="standard", help="'standard', 'zero', or a JSON file of noise points.")
@click.option("--seeds", default=50, type=int, help="Paired seeds per (fixture, noise) cell.")
@click.option("--out", required=True, type=click.Path(), help="Output report JSON.")
def metrics_cmd(fixtures: str, noise_grid: str, seeds: int, out: str) -> None:
    """Compare verified vs unverified success rates over seeded trials."""
    names = fixture_names() if fixtures == "all" else [f.strip() for f in fixtures.split(",")]
    try:
        events = {name: fixture_events(name) for name in names}
    except KeyError as e:
        click.echo(f"error: {e.args[0]}", err=True)
        sys.exit(IO_ERROR)
    if noise_grid == "standard":
        grid = [STANDARD_NOISE]
    elif noise_grid == "zero":
        grid = [NoiseConfig()]
    else:
        try:
            doc = json.loads(Path(noise_grid).read_text())
            grid = [NoiseConfig(**point) for point in doc]
        except (OSError, ValueError) as e:
            click.echo(f"error: bad noise grid {noise_grid}: {e}", err=True)
            sys.exit(IO_ERROR)
    report = run_metrics(events, grid, seeds, standard_config())
    try:
        Path(out).write_text(report.to_json())
    except OSError as e:
        click.echo(f"error: cannot write {out}: {e}", err=True)
        sys.exit(IO_ERROR)
    for row in report.rows:
        click.echo(
            f"{row.fixture:8s} sigma_d={row.noise.sigma_d:.2f} {row.mode:10s} "
            f"success={row.success_rate:6.1%} cost={row.mean_cost:6.2f}"
        )


@main.command(name="reverse")
@click.option("--plan", "plan_path", required=True, type=click.Path(), help="Plan JSON file.")
@click.option("--out", default=None, type=click.Path(), help="Output file (default stdout).")
def reverse_cmd(plan_path: str, out: str | None) -> None:
    """Reverse an assembly plan into its disassembly plan."""
    try:
        data = Path(plan_path).read_bytes()
    except OSError as e:
        click.echo(f"error: cannot read {plan_path}: {e}", err=True)
        sys.exit(IO_ERROR)
    try:
        plan = parse(data)
        reversed_plan = reverse_plan(plan)
    except (PlanFormatError, InfeasiblePlacement) as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(IO_ERROR)
    payload = serialize(reversed_plan)
    if out:
        Path(out).write_bytes(payload)
        click.echo(f"wrote {out}")
    else:
        click.echo(payload.decode("utf-8"), nl=False)


@main.command(name="render")
@click.option("--trace", required=True, help="Trace JSON file or built-in fixture name.")
@click.option("--out", required=True, type=click.Path(), help="Output frames JSON.")
def render_cmd(trace: str, out: str) -> None:
    """Expand a demonstration trace and dump its frame stream."""
    demo = _load_trace(trace)
    frames = expand_demo(demo)
    try:
        Path(out).write_text(frames_to_json(frames))
    except OSError as e:
        click.echo(f"error: cannot write {out}: {e}", err=True)
        sys.exit(IO_ERROR)
    click.echo(f"wrote {len(frames)} frames to {out}")


@main.command(name="serve")
@click.option("--port", default=8000, type=int)
@click.option("--host", default="127.0.0.1")
def serve_cmd(port: int, host: str) -> None:
    """Run the live demonstration HTTP service."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=host, port=port, log_level="warning")


@main.command(name="dump-trace", hidden=True)
@click.option("--fixture", required=True, help="Built-in fixture name.")
@click.option("--out", required=True, type=click.Path())
def dump_trace_cmd(fixture: str, out: str) -> None:
    """Write a built-in fixture as a trace JSON file (debug helper)."""
    try:
        demo = fixture_trace(fixture)
    except KeyError as e:
        click.echo(f"error: {e.args[0]}", err=True)
        sys.exit(IO_ERROR)
    Path(out).write_text(trace_to_json(demo))
    click.echo(f"wrote {out}")


if __name__ == "__main__":
    main()
