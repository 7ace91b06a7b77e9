"""Commands that describe a complex without computing Chow groups."""

from pathlib import Path

import typer
from rich.markup import escape

from toricchow.commands import (
    FIXTURE_OPTION,
    FORMAT_OPTION,
    INPUT_OPTION,
    SEED_OPTION,
    OutputFormat,
    build_options,
    emit,
    err_console,
)
from toricchow.runner import run


def check(
    ctx: typer.Context,
    input_path: Path | None = INPUT_OPTION,
    fixture: str | None = FIXTURE_OPTION,
    fmt: OutputFormat = FORMAT_OPTION,
    seed: int | None = SEED_OPTION,
) -> None:
    """Validate a complex and report its flags and cell counts."""
    emit(ctx, "check", build_options(ctx, input_path, fixture, seed), fmt)


def orbits(
    ctx: typer.Context,
    input_path: Path | None = INPUT_OPTION,
    fixture: str | None = FIXTURE_OPTION,
    fmt: OutputFormat = FORMAT_OPTION,
    seed: int | None = SEED_OPTION,
) -> None:
    """List orbit lattices, star sizes and component intersections."""
    emit(ctx, "orbits", build_options(ctx, input_path, fixture, seed), fmt)


def show_fixture(
    ctx: typer.Context,
    input_path: Path | None = INPUT_OPTION,
    fixture: str | None = FIXTURE_OPTION,
    seed: int | None = SEED_OPTION,
) -> None:
    """Print the complex document of a fixture, ready to be fed back with --input."""
    report, code = run("fixture", build_options(ctx, input_path, fixture, seed))

    if report.error is not None or report.document is None:
        err_console.print(f"[red]✗[/red] {escape(report.error or 'no document')}")
        raise typer.Exit(code or 1)

    typer.echo(report.document.model_dump_json(indent=2))
