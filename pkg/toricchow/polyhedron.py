"""Strongly convex rational polyhedra and cones.

A polyhedron is stored in V-form, ``conv(vertices) + cone(rays)``, with
irredundant vertices and primitive, pairwise distinct rays. Everything else
(faces, facets, equations of the affine span) is derived from the lifted cone
``c(P) = cone({(v, 1)} ∪ {(r, 0)})`` in one extra dimension.

Facets of a cone of dimension ``d`` are found by scanning the ``(d - 1)``-subsets
of its generators, so the cost grows like ``generators^d``. That is fine for
the small ambient ranks the rest of the package works with.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Any

from toricchow.errors import PolyhedronError
from toricchow.exactalg import (
    IntVector,
    QMat,
    RatVector,
    ZMat,
    as_rat,
    denominator_lcm,
    dot,
    format_rat,
    invariant_factors,
    kernel_basis,
    lattice_of_span,
    primitive,
    primitive_direction,
    rank_q,
    rat_vector,
    rref,
)

logger = logging.getLogger(__name__)

CellKey = tuple[tuple[RatVector, ...], tuple[IntVector, ...]]


@dataclass(frozen=True)
class ConeStructure:
    """Combinatorics of the cone spanned by a list of integer generators."""

    generators: tuple[IntVector, ...]
    dim: int
    equations: tuple[RatVector, ...]
    facets: tuple[tuple[IntVector, frozenset[int]], ...]
    faces: tuple[frozenset[int], ...]
    face_dims: dict[frozenset[int], int] = field(compare=False)

    @property
    def extreme(self) -> list[int]:
        return sorted(next(iter(f)) for f in self.faces if self.face_dims[f] == 1 and len(f) == 1)

    def contains(self, y: Sequence[Any]) -> bool:
        return all(dot(w, y) == 0 for w in self.equations) and all(
            dot(u, y) >= 0 for u, _ in self.facets
        )


def analyze_cone(ambient_rank: int, generators: Sequence[IntVector]) -> ConeStructure:
    """Facets and face lattice of ``cone(generators)``; raises if the cone contains a line."""
    return _analyze_cone(ambient_rank, tuple(tuple(int(x) for x in g) for g in generators))


# Shared between equal generator tuples; ConeStructure is never mutated.
@lru_cache(maxsize=8192)
def _analyze_cone(ambient_rank: int, gens: tuple[IntVector, ...]) -> ConeStructure:
    matrix = ZMat.from_rows(gens, ncols=ambient_rank)
    d = rank_q(matrix)
    equations = tuple(kernel_basis(matrix))
    if d == 0:
        empty: frozenset[int] = frozenset()
        return ConeStructure(gens, 0, equations, (), (empty,), {empty: 0})

    reduced, pivots = rref(matrix)
    span = [reduced.row(i) for i in range(len(pivots))]

    found: dict[frozenset[int], IntVector] = {}
    for subset in combinations(range(len(gens)), d - 1):
        # the pairing has the rank of the subset, so a line kernel means rank d - 1
        pairing = QMat.from_rows(
            [[dot(b, gens[i]) for b in span] for i in subset], ncols=d
        )
        kernel = kernel_basis(pairing)
        if len(kernel) != 1:
            continue
        coefficients = kernel[0]
        normal = primitive_direction(
            [sum((c * b[j] for c, b in zip(coefficients, span)), start=Fraction(0))
             for j in range(ambient_rank)]
        )
        values = [dot(normal, g) for g in gens]
        if all(v <= 0 for v in values):
            normal = tuple(-x for x in normal)
            values = [-v for v in values]
        elif not all(v >= 0 for v in values):
            continue
        members = frozenset(i for i, v in enumerate(values) if v == 0)
        found.setdefault(members, normal)

    facets = tuple(sorted(((n, m) for m, n in found.items()), key=lambda f: (sorted(f[1]), f[0])))
    normals = [n for n, _ in facets]
    if not normals or rank_q(ZMat.from_rows(normals, ncols=ambient_rank)) != d:
        raise PolyhedronError("cone contains a line")

    everything = frozenset(range(len(gens)))
    faces: set[frozenset[int]] = {everything, *found}
    frontier = set(found)
    while frontier:
        fresh = set()
        for a in frontier:
            for b in found:
                c = a & b
                if c not in faces:
                    fresh.add(c)
        faces |= fresh
        frontier = fresh

    face_dims = {
        f: rank_q(ZMat.from_rows([gens[i] for i in sorted(f)], ncols=ambient_rank)) for f in faces
    }
    ordered = tuple(sorted(faces, key=lambda f: (face_dims[f], sorted(f))))
    return ConeStructure(gens, d, equations, facets, ordered, face_dims)


def _lift_vertex(v: RatVector) -> IntVector:
    scale = denominator_lcm(v)
    return primitive([int(x * scale) for x in v] + [scale])


@dataclass(frozen=True)
class Polyhedron:
    """``conv(vertices) + cone(rays)``, pointed, with at least one vertex.

    Build instances with :meth:`from_generators`; the constructor expects
    already irredundant, sorted data.
    """

    ambient_rank: int
    vertices: tuple[RatVector, ...]
    rays: tuple[IntVector, ...]
    cone: ConeStructure = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.vertices:
            raise PolyhedronError("a polyhedron needs at least one vertex")
        for point in (*self.vertices, *self.rays):
            if len(point) != self.ambient_rank:
                raise PolyhedronError(
                    f"point {point} does not live in rank {self.ambient_rank}"
                )
        object.__setattr__(
            self, "cone", analyze_cone(self.ambient_rank + 1, self.lifted_generators)
        )

    @classmethod
    def from_generators(
        cls,
        ambient_rank: int,
        vertices: Iterable[Sequence[Any]],
        rays: Iterable[Sequence[Any]] = (),
    ) -> Polyhedron:
        """Normalize arbitrary generators: duplicates, redundant points, non-primitive rays."""
        points = sorted({rat_vector(v) for v in vertices})
        directions = sorted(
            {primitive_direction(r) for r in rays if any(as_rat(x) != 0 for x in r)}
        )
        if not points:
            raise PolyhedronError("a polyhedron needs at least one vertex")
        lifted = [_lift_vertex(v) for v in points] + [(*r, 0) for r in directions]
        structure = analyze_cone(ambient_rank + 1, lifted)
        extreme = structure.extreme
        kept_vertices = tuple(points[i] for i in extreme if i < len(points))
        kept_rays = tuple(directions[i - len(points)] for i in extreme if i >= len(points))
        return cls(ambient_rank, tuple(sorted(kept_vertices)), tuple(sorted(kept_rays)))

    @classmethod
    def point(cls, coordinates: Sequence[Any]) -> Polyhedron:
        return cls.from_generators(len(coordinates), [coordinates])

    @property
    def lifted_generators(self) -> tuple[IntVector, ...]:
        return tuple(_lift_vertex(v) for v in self.vertices) + tuple(
            (*r, 0) for r in self.rays
        )

    @property
    def dim(self) -> int:
        return self.cone.dim - 1

    @property
    def key(self) -> CellKey:
        return (self.vertices, self.rays)

    @property
    def sort_key(self) -> tuple[int, tuple[RatVector, ...], tuple[IntVector, ...]]:
        return (self.dim, self.vertices, self.rays)

    @property
    def is_bounded(self) -> bool:
        return not self.rays

    @property
    def is_cone(self) -> bool:
        """True for a cone with apex at the origin."""
        return self.vertices == (tuple(Fraction(0) for _ in range(self.ambient_rank)),)

    def label(self) -> str:
        parts = [
            "(" + ",".join(format_rat(x) for x in v) + ")" for v in self.vertices
        ]
        text = "conv{" + "; ".join(parts) + "}"
        if self.rays:
            text += " + cone{" + "; ".join(
                "(" + ",".join(str(x) for x in r) + ")" for r in self.rays
            ) + "}"
        return text

    def _face_from_members(self, members: frozenset[int]) -> Polyhedron:
        nv = len(self.vertices)
        return Polyhedron(
            self.ambient_rank,
            tuple(self.vertices[i] for i in sorted(members) if i < nv),
            tuple(self.rays[i - nv] for i in sorted(members) if i >= nv),
        )

    @cached_property
    def all_faces(self) -> tuple[Polyhedron, ...]:
        """Every nonempty face, itself included, ordered by dimension then key."""
        nv = len(self.vertices)
        faces = [
            self._face_from_members(members)
            for members in self.cone.faces
            if any(i < nv for i in members)
        ]
        return tuple(sorted(faces, key=lambda f: f.sort_key))

    @cached_property
    def face_keys(self) -> frozenset[CellKey]:
        return frozenset(f.key for f in self.all_faces)

    def faces(self, d: int) -> list[Polyhedron]:
        """All faces of dimension ``d`` (empty when ``d`` is out of range)."""
        return [f for f in self.all_faces if f.dim == d]

    def directions(self) -> list[RatVector]:
        """Vectors spanning the linear space parallel to the affine span."""
        base = self.vertices[0]
        diffs = [tuple(a - b for a, b in zip(v, base)) for v in self.vertices[1:]]
        return diffs + [tuple(Fraction(x) for x in r) for r in self.rays]

    def affine_span(self) -> str:
        base = "(" + ",".join(format_rat(x) for x in self.vertices[0]) + ")"
        dirs = ", ".join(
            "(" + ",".join(format_rat(x) for x in d) + ")" for d in self.directions()
        )
        return f"{base} + span{{{dirs}}}"

    def contains(self, x: Sequence[Any]) -> bool:
        if len(x) != self.ambient_rank:
            raise PolyhedronError(f"point of length {len(x)} against rank {self.ambient_rank}")
        return self.cone.contains((*rat_vector(x), Fraction(1)))

    def relative_interior_point(self) -> RatVector:
        count = len(self.vertices)
        return tuple(
            sum((v[j] for v in self.vertices), start=Fraction(0)) / count
            + sum((r[j] for r in self.rays), start=0)
            for j in range(self.ambient_rank)
        )

    def multiplicity(self) -> int:
        """Least ``t >= 1`` such that ``t`` times the affine span meets the lattice."""
        lattice = lattice_of_span(self.ambient_rank, self.directions())
        return denominator_lcm(lattice.project(self.vertices[0]))

    def facet_presentation(self) -> list[tuple[IntVector, Fraction]]:
        """Pairs ``(u, a)`` with ``P = {x : <u, x> >= -a}``, ``u`` primitive and inward."""
        if self.dim != self.ambient_rank:
            raise PolyhedronError(
                f"no full-dimensional facet presentation: affine span is {self.affine_span()}"
            )
        nv = len(self.vertices)
        result = []
        for normal, members in self.cone.facets:
            if not any(i < nv for i in members):
                continue
            u = normal[:-1]
            g = math.gcd(*u)
            result.append((tuple(x // g for x in u), Fraction(normal[-1], g)))
        return sorted(result)

    def recession_cone(self) -> Cone:
        return Cone.from_generators(self.ambient_rank, self.rays)

    def cone_over(self) -> Cone:
        return Cone.from_generators(self.ambient_rank + 1, self.lifted_generators)

    def linear_image(self, matrix: ZMat) -> Polyhedron:
        if matrix.ncols != self.ambient_rank:
            raise PolyhedronError(f"cannot map rank {self.ambient_rank} by {matrix.shape}")
        return Polyhedron.from_generators(
            matrix.nrows,
            [matrix.to_qmat().apply(v) for v in self.vertices],
            [matrix.apply(r) for r in self.rays],
        )


@dataclass(frozen=True)
class Cone:
    """Strongly convex rational cone given by its primitive extreme rays."""

    ambient_rank: int
    generators: tuple[IntVector, ...]
    structure: ConeStructure = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "structure", analyze_cone(self.ambient_rank, self.generators))

    @classmethod
    def from_generators(cls, ambient_rank: int, generators: Iterable[Sequence[Any]]) -> Cone:
        rays = sorted(
            {primitive_direction(g) for g in generators if any(as_rat(x) != 0 for x in g)}
        )
        structure = analyze_cone(ambient_rank, rays)
        return cls(ambient_rank, tuple(sorted(rays[i] for i in structure.extreme)))

    @classmethod
    def zero(cls, ambient_rank: int) -> Cone:
        return cls(ambient_rank, ())

    @property
    def dim(self) -> int:
        return self.structure.dim

    def has_face(self, other: Cone) -> bool:
        """Whether ``other`` is a face, read off the cached face lattice."""
        positions = {g: i for i, g in enumerate(self.generators)}
        if self.ambient_rank != other.ambient_rank or any(
            g not in positions for g in other.generators
        ):
            return False
        return frozenset(positions[g] for g in other.generators) in self.structure.faces

    def contains(self, x: Sequence[Any]) -> bool:
        return self.structure.contains(rat_vector(x))

    def faces(self, d: int) -> list[Cone]:
        return sorted(
            (
                Cone(self.ambient_rank, tuple(self.generators[i] for i in sorted(members)))
                for members in self.structure.faces
                if self.structure.face_dims[members] == d
            ),
            key=lambda c: c.generators,
        )

    def to_polyhedron(self) -> Polyhedron:
        origin = tuple(Fraction(0) for _ in range(self.ambient_rank))
        return Polyhedron(self.ambient_rank, (origin,), self.generators)

    def is_regular(self) -> bool:
        """Generated by part of a lattice basis."""
        if len(self.generators) != self.dim:
            return False
        if not self.generators:
            return True
        factors = invariant_factors(ZMat.from_rows(self.generators, ncols=self.ambient_rank))
        return all(f == 1 for f in factors)

    def label(self) -> str:
        if not self.generators:
            return "0"
        return ",".join("(" + ",".join(str(x) for x in g) + ")" for g in self.generators)


def recession_cone(p: Polyhedron) -> Cone:
    return p.recession_cone()


def cone_over(p: Polyhedron) -> Cone:
    return p.cone_over()


def faces(p: Polyhedron, d: int) -> list[Polyhedron]:
    return p.faces(d)


def facet_presentation(p: Polyhedron) -> list[tuple[IntVector, Fraction]]:
    return p.facet_presentation()


def multiplicity(p: Polyhedron) -> int:
    return p.multiplicity()


def contains(p: Polyhedron, x: Sequence[Any]) -> bool:
    return p.contains(x)


def is_face_of(f: Polyhedron, p: Polyhedron) -> bool:
    if f.ambient_rank != p.ambient_rank:
        raise PolyhedronError("polyhedra live in different ambient ranks")
    return f.key in p.face_keys


def extreme_rays(
    dimension: int, equations: Sequence[Sequence[Any]], inequalities: Sequence[Sequence[Any]]
) -> list[IntVector]:
    """Extreme rays of ``{y : E y = 0, I y >= 0}``, which must be pointed."""
    eq_matrix = QMat.from_rows(equations, ncols=dimension)
    all_rows = QMat.from_rows([*equations, *inequalities], ncols=dimension)
    if rank_q(all_rows) < dimension:
        raise PolyhedronError("constraint system contains a line")
    needed = dimension - 1 - rank_q(eq_matrix)
    if needed < 0:
        return []
    rays: set[IntVector] = set()
    for subset in combinations(range(len(inequalities)), needed):
        system = QMat.from_rows(
            [*equations, *(inequalities[i] for i in subset)], ncols=dimension
        )
        kernel = kernel_basis(system)
        if len(kernel) != 1:
            continue
        y = kernel[0]
        values = [dot(row, y) for row in inequalities]
        if all(v >= 0 for v in values):
            rays.add(primitive_direction(y))
        elif all(v <= 0 for v in values):
            rays.add(primitive_direction([-x for x in y]))
    return sorted(rays)


def _from_homogeneous(ambient_rank: int, rays: Iterable[IntVector]) -> Polyhedron | None:
    vertices = []
    directions = []
    for y in rays:
        if y[-1] > 0:
            vertices.append(tuple(Fraction(x, y[-1]) for x in y[:-1]))
        elif y[-1] == 0:
            directions.append(y[:-1])
    if not vertices:
        return None
    return Polyhedron.from_generators(ambient_rank, vertices, directions)


def _height_row(ambient_rank: int) -> tuple[int, ...]:
    return tuple([0] * ambient_rank + [1])


def from_halfspaces(
    ambient_rank: int, halfspaces: Iterable[tuple[Sequence[Any], Any]]
) -> Polyhedron | None:
    """``{x : <u, x> >= -a}`` for the given pairs; ``None`` when empty."""
    rows = [(*rat_vector(u), as_rat(a)) for u, a in halfspaces]
    rows.append(_height_row(ambient_rank))
    return _from_homogeneous(ambient_rank, extreme_rays(ambient_rank + 1, [], rows))


def _separated(p: Polyhedron, q: Polyhedron) -> bool:
    """A facet or equation of ``c(p)`` is strictly one-signed against every generator of ``q``."""
    generators = q.lifted_generators
    for u, _ in p.cone.facets:
        if all(dot(u, g) < 0 for g in generators):
            return True
    for w in p.cone.equations:
        values = [dot(w, g) for g in generators]
        if all(v < 0 for v in values) or all(v > 0 for v in values):
            return True
    return False


def intersect(p: Polyhedron, q: Polyhedron) -> Polyhedron | None:
    """Exact intersection, or ``None`` when the polyhedra are disjoint."""
    if p.ambient_rank != q.ambient_rank:
        raise PolyhedronError("polyhedra live in different ambient ranks")
    if p == q:
        return p
    if _separated(p, q) or _separated(q, p):
        return None
    n = p.ambient_rank
    equations = [*p.cone.equations, *q.cone.equations]
    inequalities = [
        *(u for u, _ in p.cone.facets),
        *(u for u, _ in q.cone.facets),
        _height_row(n),
    ]
    result = _from_homogeneous(n, extreme_rays(n + 1, equations, inequalities))
    logger.debug("intersect %s with %s: %s", p.label(), q.label(), result and result.label())
    return result

