"""Chow group commands."""

from pathlib import Path

import typer

from toricchow.commands import (
    ALL_OPTION,
    FIXTURE_OPTION,
    FORCE_OPTION,
    FORMAT_OPTION,
    INPUT_OPTION,
    K_OPTION,
    SEED_OPTION,
    OutputFormat,
    build_options,
    emit,
)


def presentation(
    ctx: typer.Context,
    input_path: Path | None = INPUT_OPTION,
    fixture: str | None = FIXTURE_OPTION,
    k: int | None = K_OPTION,
    all_ks: bool = ALL_OPTION,
    fmt: OutputFormat = FORMAT_OPTION,
    force: bool = FORCE_OPTION,
    seed: int | None = SEED_OPTION,
) -> None:
    """Generators, relation matrix and dimension of CH_k."""
    options = build_options(ctx, input_path, fixture, seed, k=k, all=all_ks, force=force)
    emit(ctx, "chow", options, fmt)


def generic_fiber(
    ctx: typer.Context,
    input_path: Path | None = INPUT_OPTION,
    fixture: str | None = FIXTURE_OPTION,
    k: int | None = K_OPTION,
    all_ks: bool = ALL_OPTION,
    fmt: OutputFormat = FORMAT_OPTION,
    force: bool = FORCE_OPTION,
    seed: int | None = SEED_OPTION,
) -> None:
    """Chow dimensions of the generic fiber next to the total and special ones."""
    options = build_options(ctx, input_path, fixture, seed, k=k, all=all_ks, force=force)
    emit(ctx, "generic-fiber", options, fmt)


def special_fiber(
    ctx: typer.Context,
    input_path: Path | None = INPUT_OPTION,
    fixture: str | None = FIXTURE_OPTION,
    k: int | None = K_OPTION,
    all_ks: bool = ALL_OPTION,
    fmt: OutputFormat = FORMAT_OPTION,
    force: bool = FORCE_OPTION,
    seed: int | None = SEED_OPTION,
) -> None:
    """Chow dimensions of the special fiber, with CH_0 from the edge incidence."""
    options = build_options(ctx, input_path, fixture, seed, k=k, all=all_ks, force=force)
    emit(ctx, "special-fiber", options, fmt)


def rank_poly(
    ctx: typer.Context,
    input_path: Path | None = INPUT_OPTION,
    fixture: str | None = FIXTURE_OPTION,
    fmt: OutputFormat = FORMAT_OPTION,
    force: bool = FORCE_OPTION,
    seed: int | None = SEED_OPTION,
) -> None:
    """The rank polynomial counted from the cone complex."""
    emit(ctx, "rank-poly", build_options(ctx, input_path, fixture, seed, force=force), fmt)


def verify(
    ctx: typer.Context,
    input_path: Path | None = INPUT_OPTION,
    fixture: str | None = FIXTURE_OPTION,
    fmt: OutputFormat = FORMAT_OPTION,
    force: bool = FORCE_OPTION,
    seed: int | None = SEED_OPTION,
) -> None:
    """Cross-check the rank polynomial, localization bounds and extreme dimensions."""
    emit(ctx, "verify", build_options(ctx, input_path, fixture, seed, force=force), fmt)


def specialize(
    ctx: typer.Context,
    input_path: Path | None = INPUT_OPTION,
    fixture: str | None = FIXTURE_OPTION,
    k: int | None = K_OPTION,
    all_ks: bool = ALL_OPTION,
    fmt: OutputFormat = FORMAT_OPTION,
    force: bool = FORCE_OPTION,
    seed: int | None = SEED_OPTION,
) -> None:
    """Matrix of the specialization map from the generic to the special fiber."""
    options = build_options(ctx, input_path, fixture, seed, k=k, all=all_ks, force=force)
    emit(ctx, "specialize", options, fmt)
