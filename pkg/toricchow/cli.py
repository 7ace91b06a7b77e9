"""CLI entry point for toricchow."""

import logging

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape

from toricchow import __version__
from toricchow.commands import chow, divisor, inspect
from toricchow.config import load_settings
from toricchow.errors import ToricChowError

app = typer.Typer(
    name="toricchow",
    help="Chow groups of toric schemes over a discrete valuation ring.",
    no_args_is_help=True,
)
console = Console()
err_console = Console(stderr=True)


def configure_logging(level: str) -> None:
    """Send toricchow log records to stderr through rich."""
    handler = RichHandler(console=err_console, show_time=False, show_path=False)
    logger = logging.getLogger("toricchow")
    logger.handlers = [handler]
    logger.setLevel(level)
    logger.propagate = False


@app.command()
def version() -> None:
    """Show the toricchow version."""
    console.print(f"toricchow v{__version__}")


@app.callback()
def main(
    ctx: typer.Context,
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Log debug output to stderr"),
) -> None:
    """toricchow - Chow groups of toric schemes from polyhedral complexes."""
    try:
        settings = load_settings()
    except (ToricChowError, ValidationError) as e:
        err_console.print(f"[red]✗[/red] Invalid settings: {escape(str(e))}")
        raise typer.Exit(1)

    configure_logging("DEBUG" if verbose else settings.log_level)
    ctx.obj = settings


# Commands live at the root of the app
app.command(name="check")(inspect.check)
app.command(name="orbits")(inspect.orbits)
app.command(name="fixture")(inspect.show_fixture)
app.command(name="chow")(chow.presentation)
app.command(name="generic-fiber")(chow.generic_fiber)
app.command(name="special-fiber")(chow.special_fiber)
app.command(name="rank-poly")(chow.rank_poly)
app.command(name="verify")(chow.verify)
app.command(name="specialize")(chow.specialize)
app.command(name="divisor")(divisor.monomial)
app.command(name="pa-divisor")(divisor.piecewise)

if __name__ == "__main__":
    app()
