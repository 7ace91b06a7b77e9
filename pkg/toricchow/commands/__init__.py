"""CLI commands for toricchow."""

from enum import Enum
from pathlib import Path
from typing import Any

import typer
from rich.console import Console
from rich.markup import escape

from toricchow.config import ToricChowSettings
from toricchow.runner import RunOptions, run
from toricchow.templates import render_report

err_console = Console(stderr=True)


class OutputFormat(str, Enum):
    text = "text"
    json = "json"


INPUT_OPTION = typer.Option(
    None, "--input", "-i", help="Complex document (.json, .yaml or .yml)"
)
FIXTURE_OPTION = typer.Option(None, "--fixture", "-f", help="Named fixture, e.g. p1:3")
K_OPTION = typer.Option(None, "--k", "-k", help="Dimension k (default: all)")
ALL_OPTION = typer.Option(False, "--all", help="Every k from 0 to n+1")
FORMAT_OPTION = typer.Option(OutputFormat.text, "--format", help="Output format")
FORCE_OPTION = typer.Option(False, "--force", help="Compute on non-regular complexes")
SEED_OPTION = typer.Option(None, "--seed", help="Seed of the completeness audit")


def settings_of(ctx: typer.Context) -> ToricChowSettings:
    if isinstance(ctx.obj, ToricChowSettings):
        return ctx.obj
    return ToricChowSettings()


def build_options(
    ctx: typer.Context,
    input_path: Path | None,
    fixture: str | None,
    seed: int | None,
    **extra: Any,
) -> RunOptions:
    settings = settings_of(ctx)
    return RunOptions(
        input=input_path,
        fixture=fixture,
        seed=settings.audit_seed if seed is None else seed,
        audit_factor=settings.audit_factor,
        **extra,
    )


def emit(ctx: typer.Context, command: str, options: RunOptions, fmt: OutputFormat) -> None:
    """Run a command and print its report; errors go to stderr and set the exit code."""
    report, code = run(command, options)

    if report.error is not None:
        err_console.print(f"[red]✗[/red] {escape(report.error)}")
        raise typer.Exit(code)

    if fmt == OutputFormat.json:
        typer.echo(report.model_dump_json(indent=2, exclude_none=True))
    else:
        typer.echo(render_report(report, settings_of(ctx).text_matrix_limit), nl=False)

    if code:
        raise typer.Exit(code)
