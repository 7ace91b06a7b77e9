"""Template rendering for text reports."""

from __future__ import annotations

from collections.abc import Sequence
from pathlib import Path
from typing import Any

from jinja2 import Environment, FileSystemLoader, select_autoescape

from toricchow.runner import Report

# Get template directory
TEMPLATE_DIR = Path(__file__).parent

DEFAULT_MATRIX_LIMIT = 30


def _format_matrix(
    rows: Sequence[Sequence[Any]],
    columns: Sequence[str],
    row_labels: Sequence[str] | None = None,
    limit: int = DEFAULT_MATRIX_LIMIT,
    indent: int = 4,
) -> str:
    """One line per row under a header of column labels, or a stub when too large."""
    pad = " " * indent
    if len(rows) > limit or len(columns) > limit:
        return f"{pad}({len(rows)} x {len(columns)} matrix elided; use --format json)"
    if not rows:
        return f"{pad}(no rows)"
    cells = [[str(x) for x in row] for row in rows]
    widths = [
        max(len(columns[j]), *(len(row[j]) for row in cells)) for j in range(len(columns))
    ]
    label_width = max((len(label) for label in row_labels), default=0) if row_labels else 0
    lead = " " * label_width + ("  " if row_labels else "")
    lines = [pad + lead + "  ".join(c.rjust(w) for c, w in zip(columns, widths))]
    for i, row in enumerate(cells):
        label = row_labels[i].ljust(label_width) + "  " if row_labels else ""
        lines.append(pad + label + "  ".join(x.rjust(w) for x, w in zip(row, widths)))
    return "\n".join(lines)


def _yes_no(value: bool | None) -> str:
    if value is None:
        return "n/a"
    return "yes" if value else "no"


def get_jinja_env() -> Environment:
    """Get configured Jinja2 environment."""
    env = Environment(
        loader=FileSystemLoader(TEMPLATE_DIR),
        autoescape=select_autoescape(),
        trim_blocks=True,
        lstrip_blocks=True,
        keep_trailing_newline=True,
    )
    env.filters["matrix"] = _format_matrix
    env.filters["yes_no"] = _yes_no
    return env


def render_report(report: Report, matrix_limit: int = DEFAULT_MATRIX_LIMIT) -> str:
    """Render the human-readable form of a report."""
    env = get_jinja_env()
    template = env.get_template("report.txt.j2")

    return template.render(report=report, limit=matrix_limit)
