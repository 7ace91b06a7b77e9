"""Input documents: complexes and piecewise affine functions as JSON or YAML."""

from __future__ import annotations

import json
import logging
import re
from fractions import Fraction
from pathlib import Path
from typing import Any

import yaml
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from toricchow.complex import (
    DEFAULT_AUDIT_FACTOR,
    DEFAULT_AUDIT_SEED,
    PolyhedralComplex,
    build_complex,
)
from toricchow.divisors import PiecewiseAffine
from toricchow.errors import DocumentError, ToricChowError
from toricchow.exactalg import as_rat, format_rat
from toricchow.polyhedron import Polyhedron

logger = logging.getLogger(__name__)

RATIONAL_PATTERN = r"^-?\d+(/\d+)?$"

Rational = int | str


def _check_rational(value: Rational, where: str) -> Rational:
    if isinstance(value, bool):
        raise ValueError(f"{where}: booleans are not rational numbers")
    if isinstance(value, str):
        text = value.strip()
        try:
            if not re.match(RATIONAL_PATTERN, text):
                raise ValueError(text)
            Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"{where}: malformed rational '{value}'") from None
    return value


def _rational_out(value: Any) -> Rational:
    rat = as_rat(value)
    return rat.numerator if rat.denominator == 1 else format_rat(rat)


class CellRecord(BaseModel):
    """A maximal cell as indices into the document's vertex and ray lists."""

    vertices: list[int]
    rays: list[int] = Field(default_factory=list)


class ComplexDocument(BaseModel):
    """A complex given by its maximal cells."""

    lattice_rank: int = Field(ge=0)
    vertices: list[list[Rational]]
    rays: list[list[int]] = Field(default_factory=list)
    maximal_cells: list[CellRecord]

    @field_validator("vertices")
    @classmethod
    def check_vertex_entries(cls, v: list[list[Rational]]) -> list[list[Rational]]:
        for i, point in enumerate(v):
            for j, x in enumerate(point):
                _check_rational(x, f"vertices[{i}][{j}]")
        return v

    @model_validator(mode="after")
    def check_indices(self) -> ComplexDocument:
        for i, point in enumerate(self.vertices):
            if len(point) != self.lattice_rank:
                raise ValueError(f"vertices[{i}] has {len(point)} coordinates, "
                                 f"expected {self.lattice_rank}")
        for i, ray in enumerate(self.rays):
            if len(ray) != self.lattice_rank:
                raise ValueError(f"rays[{i}] has {len(ray)} coordinates, "
                                 f"expected {self.lattice_rank}")
        if not self.maximal_cells:
            raise ValueError("maximal_cells must not be empty")
        for i, cell in enumerate(self.maximal_cells):
            if not cell.vertices:
                raise ValueError(f"maximal_cells[{i}] has no vertices")
            for j in cell.vertices:
                if not 0 <= j < len(self.vertices):
                    raise ValueError(f"maximal_cells[{i}].vertices: index {j} out of range")
            for j in cell.rays:
                if not 0 <= j < len(self.rays):
                    raise ValueError(f"maximal_cells[{i}].rays: index {j} out of range")
        return self


class PieceRecord(BaseModel):
    """Affine data ``(m, ℓ)`` on the cell with index ``cell`` in the canonical cell list."""

    cell: int
    m: list[Rational]
    l: Rational = 0  # noqa: E741

    @field_validator("m")
    @classmethod
    def check_slope(cls, v: list[Rational]) -> list[Rational]:
        for j, x in enumerate(v):
            _check_rational(x, f"m[{j}]")
        return v

    @field_validator("l")
    @classmethod
    def check_offset(cls, v: Rational) -> Rational:
        return _check_rational(v, "l")


class FunctionDocument(BaseModel):
    pieces: list[PieceRecord]


def _location(error: ValidationError) -> str:
    first = error.errors()[0]
    return ".".join(str(part) for part in first["loc"]) or "document"


def _read_data(path: Path) -> Any:
    if not path.exists():
        raise DocumentError(f"no such file: {path}")
    text = path.read_text(encoding="utf-8")
    try:
        if path.suffix in (".yaml", ".yml"):
            return yaml.safe_load(text)
        return json.loads(text)
    except (yaml.YAMLError, json.JSONDecodeError) as exc:
        raise DocumentError(f"cannot parse {path.name}: {exc}") from exc


def load_document(path: Path) -> ComplexDocument:
    """Read a ComplexDocument from a ``.json``, ``.yaml`` or ``.yml`` file."""
    return validate_document(_read_data(path))


def validate_document(data: Any) -> ComplexDocument:
    try:
        return ComplexDocument.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        raise DocumentError(first["msg"], _location(exc)) from exc


def parse_complex(
    document: ComplexDocument | dict[str, Any] | Path,
    *,
    seed: int = DEFAULT_AUDIT_SEED,
    audit_factor: int = DEFAULT_AUDIT_FACTOR,
) -> PolyhedralComplex:
    """Build and validate the complex described by a document."""
    if isinstance(document, Path):
        document = load_document(document)
    elif not isinstance(document, ComplexDocument):
        document = validate_document(document)
    n = document.lattice_rank
    vertices = [tuple(as_rat(x) for x in point) for point in document.vertices]
    cells = []
    for i, record in enumerate(document.maximal_cells):
        try:
            cells.append(
                Polyhedron.from_generators(
                    n,
                    [vertices[j] for j in record.vertices],
                    [document.rays[j] for j in record.rays],
                )
            )
        except ToricChowError as exc:
            raise DocumentError(str(exc), f"maximal_cells.{i}") from exc
    logger.debug("parsed document with %d maximal cells in rank %d", len(cells), n)
    return build_complex(n, cells, seed=seed, audit_factor=audit_factor)


def serialize_complex(c: PolyhedralComplex) -> ComplexDocument:
    """The document of a complex; ``parse_complex`` inverts it."""
    vertices = [cell.vertices[0] for cell in c.skeleton(0)]
    rays = sorted({r for cell in c.cells for r in cell.rays})
    vertex_index = {v: i for i, v in enumerate(vertices)}
    ray_index = {r: i for i, r in enumerate(rays)}
    return ComplexDocument(
        lattice_rank=c.ambient_rank,
        vertices=[[_rational_out(x) for x in v] for v in vertices],
        rays=[list(r) for r in rays],
        maximal_cells=[
            CellRecord(
                vertices=[vertex_index[v] for v in cell.vertices],
                rays=[ray_index[r] for r in cell.rays],
            )
            for cell in c.maximal_cells
        ],
    )


def load_function(path: Path, c: PolyhedralComplex) -> PiecewiseAffine:
    """Read ``(cell, m, l)`` triples; every maximal cell needs exactly one piece."""
    try:
        document = FunctionDocument.model_validate(_read_data(path))
    except ValidationError as exc:
        raise DocumentError(exc.errors()[0]["msg"], _location(exc)) from exc
    by_cell: dict[int, PieceRecord] = {}
    for i, piece in enumerate(document.pieces):
        if piece.cell not in c.maximal_indices:
            raise DocumentError(f"cell {piece.cell} is not a maximal cell", f"pieces.{i}.cell")
        if piece.cell in by_cell:
            raise DocumentError(f"cell {piece.cell} is given twice", f"pieces.{i}.cell")
        if len(piece.m) != c.ambient_rank:
            raise DocumentError(f"slope has {len(piece.m)} entries, expected {c.ambient_rank}",
                                f"pieces.{i}.m")
        by_cell[piece.cell] = piece
    missing = [j for j in c.maximal_indices if j not in by_cell]
    if missing:
        raise DocumentError(f"no affine piece for maximal cells {missing}", "pieces")
    return PiecewiseAffine.from_pieces(
        c, [(by_cell[j].m, by_cell[j].l) for j in c.maximal_indices]
    )
