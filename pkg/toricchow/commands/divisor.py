"""Divisor commands."""

from pathlib import Path

import typer

from toricchow.commands import (
    FIXTURE_OPTION,
    FORCE_OPTION,
    FORMAT_OPTION,
    INPUT_OPTION,
    SEED_OPTION,
    OutputFormat,
    build_options,
    emit,
)


def monomial(
    ctx: typer.Context,
    input_path: Path | None = INPUT_OPTION,
    fixture: str | None = FIXTURE_OPTION,
    m: list[int] | None = typer.Option(
        None, "--m", help="Character m, one --m per coordinate (default: zero)"
    ),
    ell: int = typer.Option(0, "--l", help="Power of the uniformizer"),
    fmt: OutputFormat = FORMAT_OPTION,
    force: bool = FORCE_OPTION,
    seed: int | None = SEED_OPTION,
) -> None:
    """Principal divisor of a monomial."""
    options = build_options(ctx, input_path, fixture, seed, m=m or [], l=ell, force=force)
    emit(ctx, "divisor", options, fmt)


def piecewise(
    ctx: typer.Context,
    input_path: Path | None = INPUT_OPTION,
    fixture: str | None = FIXTURE_OPTION,
    function: Path = typer.Option(
        ..., "--function", help="Document of (cell, m, l) pieces, JSON or YAML"
    ),
    fmt: OutputFormat = FORMAT_OPTION,
    force: bool = FORCE_OPTION,
    seed: int | None = SEED_OPTION,
) -> None:
    """Divisor of a piecewise affine function."""
    options = build_options(ctx, input_path, fixture, seed, function=function, force=force)
    emit(ctx, "pa-divisor", options, fmt)
