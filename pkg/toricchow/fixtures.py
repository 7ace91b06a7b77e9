"""Named example complexes.

Names accept parameters either as ``name:param`` or ``name(param)``:

* ``p1:r`` - the line subdivided at the vertices ``0, 1, ..., r-1``
* ``p1-half`` - the line subdivided at ``0, 1/2, 1`` (regular, special fiber not reduced)
* ``p2-model`` - a regular model of the projective plane with two vertices
* ``blp2-model`` - a regular model of the blown-up plane with a triangle of vertices
* ``projective:n`` - the fan of projective ``n``-space
* ``canonical:<name>`` - the recession fan of another fixture, seen as a complex
"""

from __future__ import annotations

import logging
import re
from collections.abc import Sequence
from fractions import Fraction
from itertools import combinations
from typing import Any

from toricchow.complex import (
    DEFAULT_AUDIT_FACTOR,
    DEFAULT_AUDIT_SEED,
    PolyhedralComplex,
    build_complex,
)
from toricchow.errors import FixtureError, ToricChowError
from toricchow.polyhedron import Polyhedron

logger = logging.getLogger(__name__)

FIXTURE_NAMES = ("p1", "p1-half", "p2-model", "blp2-model", "projective", "canonical")

_CALL = re.compile(r"^(?P<name>[a-z0-9-]+)\((?P<param>.*)\)$")


def _cell(
    ambient_rank: int, vertices: Sequence[Sequence[Any]], rays: Sequence[Sequence[int]] = ()
) -> Polyhedron:
    return Polyhedron.from_generators(ambient_rank, vertices, rays)


def p1_cells(vertices: Sequence[Fraction]) -> list[Polyhedron]:
    """Subdivision of the line at the given points."""
    points = sorted(vertices)
    cells = [_cell(1, [(points[0],)], [(-1,)]), _cell(1, [(points[-1],)], [(1,)])]
    cells += [_cell(1, [(a,), (b,)]) for a, b in zip(points, points[1:])]
    return cells


def p2_model_cells() -> list[Polyhedron]:
    v1, v2 = (0, 1), (0, 0)
    return [
        _cell(2, [v1, v2], [(1, 0)]),
        _cell(2, [v1], [(1, 0), (0, 1)]),
        _cell(2, [v1], [(0, 1), (-1, -1)]),
        _cell(2, [v1, v2], [(-1, -1)]),
        _cell(2, [v2], [(-1, -1), (1, 0)]),
    ]


def blp2_model_cells() -> list[Polyhedron]:
    w1, w2, w3 = (0, 0), (1, 0), (1, 1)
    return [
        _cell(2, [w1, w2, w3]),
        _cell(2, [w2, w3], [(1, 0)]),
        _cell(2, [w3], [(1, 0), (0, 1)]),
        _cell(2, [w1, w3], [(0, 1)]),
        _cell(2, [w1], [(0, 1), (-1, -1)]),
        _cell(2, [w1], [(-1, -1), (0, -1)]),
        _cell(2, [w1, w2], [(0, -1)]),
        _cell(2, [w2], [(0, -1), (1, 0)]),
    ]


def projective_cells(n: int) -> list[Polyhedron]:
    rays = [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    rays.append(tuple(-1 for _ in range(n)))
    origin = tuple(0 for _ in range(n))
    return [_cell(n, [origin], list(subset)) for subset in combinations(rays, n)]


def split_name(text: str) -> tuple[str, str | None]:
    """``"p1:3"`` and ``"p1(3)"`` both give ``("p1", "3")``."""
    text = text.strip()
    match = _CALL.match(text)
    if match:
        return match.group("name"), match.group("param")
    if ":" in text:
        name, _, param = text.partition(":")
        return name, param
    return text, None


def _int_param(name: str, param: str | None, minimum: int) -> int:
    if param is None:
        raise FixtureError(f"fixture '{name}' needs an integer parameter")
    try:
        value = int(param)
    except ValueError:
        raise FixtureError(f"fixture '{name}' needs an integer parameter, got '{param}'") from None
    if value < minimum:
        raise FixtureError(f"fixture '{name}' needs a parameter >= {minimum}, got {value}")
    return value


def fixture(
    name: str,
    params: str | int | None = None,
    *,
    seed: int = DEFAULT_AUDIT_SEED,
    audit_factor: int = DEFAULT_AUDIT_FACTOR,
) -> PolyhedralComplex:
    """Build a named example complex."""
    if params is None:
        name, param = split_name(name)
    else:
        param = str(params)
    logger.debug("building fixture %s (%s)", name, param)

    def build(n: int, cells: list[Polyhedron]) -> PolyhedralComplex:
        return build_complex(n, cells, seed=seed, audit_factor=audit_factor)

    if name == "p1":
        r = _int_param(name, param, 1)
        return build(1, p1_cells([Fraction(i) for i in range(r)]))
    if name == "p1-half":
        return build(1, p1_cells([Fraction(0), Fraction(1, 2), Fraction(1)]))
    if name == "p2-model":
        return build(2, p2_model_cells())
    if name == "blp2-model":
        return build(2, blp2_model_cells())
    if name == "projective":
        return build(_int_param(name, param, 1), projective_cells(_int_param(name, param, 1)))
    if name == "canonical":
        if not param:
            raise FixtureError("fixture 'canonical' needs another fixture name")
        try:
            inner = fixture(param, seed=seed, audit_factor=audit_factor)
            return inner.recession_fan
        except FixtureError:
            raise
        except ToricChowError as exc:
            raise FixtureError(f"cannot take the canonical model of '{param}': {exc}") from exc
    raise FixtureError(f"unknown fixture '{name}' (known: {', '.join(FIXTURE_NAMES)})")
