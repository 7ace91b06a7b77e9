"""Polyhedral complexes and fans.

A complex is built from a list of cells; the face closure is computed, the
intersection axiom is checked pairwise on maximal cells, and the completeness
and regularity flags are computed once at build time.

Completeness is certified by four checks:

1. every maximal cell has full dimension,
2. every codimension-one cell is a facet of exactly two maximal cells,
3. the maximal cells are connected through shared codimension-one cells,
4. a sampling audit: ``audit_factor * len(cells)`` rational points drawn from a
   seeded ``random.Random`` inside a box around all vertices and ray directions
   must each lie in some maximal cell.

Checks 1-3 are necessary but not sufficient on their own; the audit is a
falsifier, not a proof.
"""

from __future__ import annotations

import logging
import random
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations

import networkx as nx

from toricchow.errors import ComplexError, NotCompleteError
from toricchow.exactalg import (
    IntVector,
    QuotientLattice,
    RatVector,
    ZMat,
    invariant_factors,
    lattice_of_span,
    primitive,
    unimodular_inverse,
)
from toricchow.polyhedron import CellKey, Cone, Polyhedron, intersect, is_face_of

logger = logging.getLogger(__name__)

DEFAULT_AUDIT_SEED = 0
DEFAULT_AUDIT_FACTOR = 10
MIN_AUDIT_FACTOR = 10


@dataclass(frozen=True)
class OrbitLattices:
    """Quotient lattices ``N(σ)`` for the cones of the recession fan and ``Ñ(Λ)`` for cells."""

    cones: dict[tuple[IntVector, ...], QuotientLattice]
    cells: tuple[QuotientLattice, ...]

    def for_cone(self, generators: Sequence[IntVector]) -> QuotientLattice:
        key = tuple(sorted(tuple(g) for g in generators))
        if key not in self.cones:
            raise ComplexError(f"cone {key} is not in the recession fan")
        return self.cones[key]

    def for_cell(self, index: int) -> QuotientLattice:
        return self.cells[index]


@dataclass(frozen=True, eq=False)
class PolyhedralComplex:
    """A validated complex; cells are sorted by ``(dimension, vertices, rays)``."""

    ambient_rank: int
    cells: tuple[Polyhedron, ...]
    facets: tuple[tuple[int, ...], ...]
    cofacets: tuple[tuple[int, ...], ...]
    poset: nx.DiGraph = field(repr=False)
    complete: bool = False
    regular: bool = False
    audit_seed: int = DEFAULT_AUDIT_SEED
    audit_factor: int = DEFAULT_AUDIT_FACTOR

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PolyhedralComplex):
            return NotImplemented
        return self.ambient_rank == other.ambient_rank and self.cells == other.cells

    def __hash__(self) -> int:
        return hash((self.ambient_rank, self.cells))

    @property
    def dim(self) -> int:
        return max(cell.dim for cell in self.cells)

    @cached_property
    def index(self) -> dict[CellKey, int]:
        return {cell.key: i for i, cell in enumerate(self.cells)}

    def index_of(self, cell: Polyhedron) -> int:
        try:
            return self.index[cell.key]
        except KeyError:
            raise ComplexError(f"{cell.label()} is not a cell of the complex") from None

    def skeleton(self, k: int) -> list[Polyhedron]:
        return [cell for cell in self.cells if cell.dim == k]

    def skeleton_indices(self, k: int) -> list[int]:
        return [i for i, cell in enumerate(self.cells) if cell.dim == k]

    def skeleton_sizes(self) -> list[int]:
        return [len(self.skeleton(k)) for k in range(self.dim + 1)]

    @cached_property
    def maximal_indices(self) -> tuple[int, ...]:
        return tuple(i for i in range(len(self.cells)) if not self.cofacets[i])

    @property
    def maximal_cells(self) -> list[Polyhedron]:
        return [self.cells[i] for i in self.maximal_indices]

    def faces_of(self, index: int) -> set[int]:
        """Indices of all faces of a cell, the cell included."""
        return {index, *nx.descendants(self.poset, index)}

    def cofaces_of(self, index: int) -> set[int]:
        """Indices of all cells having the given cell as a face, the cell included."""
        return {index, *nx.ancestors(self.poset, index)}

    def recession_of(self, index: int) -> Cone:
        return Cone(self.ambient_rank, self.cells[index].rays)

    @property
    def is_fan(self) -> bool:
        return all(cell.is_cone for cell in self.cells)

    @property
    def is_reduced(self) -> bool:
        """All vertices are lattice points."""
        return all(x.denominator == 1 for cell in self.skeleton(0) for x in cell.vertices[0])

    @cached_property
    def recession_fan(self) -> PolyhedralComplex:
        if not self.complete:
            raise NotCompleteError("the recession of a non-complete complex is not computed")
        if self.is_fan:
            return self
        cones = {cell.rays: Cone(self.ambient_rank, cell.rays) for cell in self.cells}
        return build_complex(
            self.ambient_rank,
            [cone.to_polyhedron() for cone in cones.values()],
            seed=self.audit_seed,
            audit_factor=self.audit_factor,
        )

    @cached_property
    def fan_cones(self) -> dict[int, tuple[Cone, ...]]:
        """Cones of the recession fan by dimension, in canonical cell order."""
        by_dim: dict[int, list[Cone]] = {}
        for cell in self.recession_fan.cells:
            by_dim.setdefault(cell.dim, []).append(Cone(self.ambient_rank, cell.rays))
        return {d: tuple(cones) for d, cones in by_dim.items()}

    @cached_property
    def cone_complex(self) -> PolyhedralComplex:
        if not self.complete:
            raise NotCompleteError("the cone complex of a non-complete complex is not computed")
        n = self.ambient_rank
        origin = tuple(Fraction(0) for _ in range(n + 1))
        cones = [
            Polyhedron.from_generators(n + 1, [origin], cell.lifted_generators)
            for cell in self.maximal_cells
        ]
        return build_complex(n + 1, cones, seed=self.audit_seed, audit_factor=self.audit_factor)

    @cached_property
    def orbit_lattices(self) -> OrbitLattices:
        n = self.ambient_rank
        cones = {
            cell.rays: lattice_of_span(n, cell.rays) for cell in self.cells
        }
        cells = tuple(lattice_of_span(n + 1, cell.lifted_generators) for cell in self.cells)
        return OrbitLattices(cones, cells)

    def cone_counts(self) -> list[int]:
        """Number of cones of ``c(Π)`` per dimension ``0..n+1``."""
        n = self.ambient_rank
        rec_dims = [Cone(n, rays).dim for rays in {cell.rays for cell in self.cells}]
        counts = [0] * (n + 2)
        for d in rec_dims:
            counts[d] += 1
        for cell in self.cells:
            counts[cell.dim + 1] += 1
        return counts


def _pair_check(cells: Sequence[Polyhedron], maximal: Sequence[int]) -> None:
    for i, j in combinations(maximal, 2):
        a, b = cells[i], cells[j]
        common = intersect(a, b)
        if common is None:
            continue
        if not (is_face_of(common, a) and is_face_of(common, b)):
            raise ComplexError(
                f"cells {a.label()} and {b.label()} do not meet in a common face",
                cells=(a.label(), b.label()),
            )


def _cell_is_regular(cell: Polyhedron) -> bool:
    generators = cell.lifted_generators
    if len(generators) != cell.dim + 1:
        return False
    factors = invariant_factors(ZMat.from_rows(generators, ncols=cell.ambient_rank + 1))
    return all(f == 1 for f in factors)


def _audit(
    ambient_rank: int,
    cells: Sequence[Polyhedron],
    maximal: Sequence[int],
    samples: int,
    seed: int,
) -> bool:
    rng = random.Random(seed)
    coordinates = [abs(x) for cell in cells for v in cell.vertices for x in v]
    directions = [abs(x) for cell in cells for r in cell.rays for x in r]
    bound = int(max(coordinates, default=0) + max(directions, default=0)) + 1
    for _ in range(samples):
        denominator = rng.randint(1, 16)
        point = tuple(
            Fraction(rng.randint(-bound * denominator, bound * denominator), denominator)
            for _ in range(ambient_rank)
        )
        if not any(cells[i].contains(point) for i in maximal):
            logger.debug("completeness audit: %s is not covered", point)
            return False
    return True


def _certify_complete(
    ambient_rank: int,
    cells: Sequence[Polyhedron],
    cofacets: Sequence[Sequence[int]],
    maximal: Sequence[int],
    seed: int,
    audit_factor: int,
) -> bool:
    n = ambient_rank
    if any(cells[i].dim != n for i in maximal):
        logger.debug("not complete: the complex is not pure of dimension %d", n)
        return False
    ridges = [i for i, cell in enumerate(cells) if cell.dim == n - 1]
    for i in ridges:
        if len(cofacets[i]) != 2:
            logger.debug("not complete: %s lies in %d maximal cells", cells[i].label(),
                         len(cofacets[i]))
            return False
    adjacency = nx.Graph()
    adjacency.add_nodes_from(maximal)
    adjacency.add_edges_from(tuple(cofacets[i]) for i in ridges)
    if not nx.is_connected(adjacency):
        logger.debug("not complete: maximal cells are not connected through ridges")
        return False
    samples = audit_factor * len(cells)
    logger.debug("completeness audit with %d samples (seed %d)", samples, seed)
    return _audit(n, cells, maximal, samples, seed)


def build_complex(
    ambient_rank: int,
    maximal_cells: Iterable[Polyhedron],
    *,
    seed: int = DEFAULT_AUDIT_SEED,
    audit_factor: int = DEFAULT_AUDIT_FACTOR,
) -> PolyhedralComplex:
    """Close a list of cells under faces and validate the intersection axiom."""
    if audit_factor < MIN_AUDIT_FACTOR:
        raise ComplexError(
            f"the completeness audit needs at least {MIN_AUDIT_FACTOR} samples per cell, "
            f"got {audit_factor}"
        )
    given = list(maximal_cells)
    if not given:
        raise ComplexError("a complex needs at least one cell")
    for cell in given:
        if cell.ambient_rank != ambient_rank:
            raise ComplexError(
                f"{cell.label()} lives in rank {cell.ambient_rank}, expected {ambient_rank}",
                cells=(cell.label(),),
            )

    closure: dict[CellKey, Polyhedron] = {}
    for cell in given:
        for face in cell.all_faces:
            closure.setdefault(face.key, face)
    cells = tuple(sorted(closure.values(), key=lambda c: c.sort_key))
    index = {cell.key: i for i, cell in enumerate(cells)}

    facets = tuple(
        tuple(sorted(index[f.key] for f in cell.faces(cell.dim - 1))) for cell in cells
    )
    upward: list[list[int]] = [[] for _ in cells]
    for i, below in enumerate(facets):
        for j in below:
            upward[j].append(i)
    cofacets = tuple(tuple(sorted(up)) for up in upward)

    poset = nx.DiGraph()
    poset.add_nodes_from(range(len(cells)))
    poset.add_edges_from((i, j) for i, below in enumerate(facets) for j in below)

    maximal = [i for i in range(len(cells)) if not cofacets[i]]
    _pair_check(cells, maximal)
    logger.debug("built complex of rank %d with %d cells (%d maximal)", ambient_rank,
                 len(cells), len(maximal))

    complete = _certify_complete(ambient_rank, cells, cofacets, maximal, seed, audit_factor)
    regular = all(_cell_is_regular(cell) for cell in cells)
    return PolyhedralComplex(
        ambient_rank, cells, facets, cofacets, poset, complete, regular, seed, audit_factor
    )


def is_complete(c: PolyhedralComplex, seed: int | None = None) -> bool:
    """The completeness flag, re-audited when a different seed is given."""
    if seed is None or seed == c.audit_seed:
        return c.complete
    return _certify_complete(
        c.ambient_rank, c.cells, c.cofacets, c.maximal_indices, seed, c.audit_factor
    )


def is_regular(c: PolyhedralComplex) -> bool:
    return c.regular


def recession_fan(c: PolyhedralComplex) -> PolyhedralComplex:
    return c.recession_fan


def cone_complex(c: PolyhedralComplex) -> PolyhedralComplex:
    return c.cone_complex


def skeleton(c: PolyhedralComplex, k: int) -> list[Polyhedron]:
    return c.skeleton(k)


def slice_at_height(cone_cell: Polyhedron, height: int) -> Polyhedron | None:
    """Cut a cone of ``c(Π)`` at height one (a cell) or height zero (a recession cone)."""
    if not cone_cell.is_cone:
        raise ComplexError(f"{cone_cell.label()} is not a cone")
    n = cone_cell.ambient_rank - 1
    generators = cone_cell.rays
    if any(g[-1] < 0 for g in generators):
        raise ComplexError(f"{cone_cell.label()} leaves the upper half space")
    if height == 1:
        vertices = [tuple(Fraction(x, g[-1]) for x in g[:-1]) for g in generators if g[-1] > 0]
        if not vertices:
            return None
        return Polyhedron.from_generators(
            n, vertices, [g[:-1] for g in generators if g[-1] == 0]
        )
    if height == 0:
        return Cone.from_generators(n, [g[:-1] for g in generators if g[-1] == 0]).to_polyhedron()
    raise ComplexError(f"cannot slice at height {height}")


def _as_cone(ambient_rank: int, cone: Cone | Polyhedron) -> Cone:
    if isinstance(cone, Cone):
        return cone
    if not cone.is_cone:
        raise ComplexError(f"{cone.label()} is not a cone")
    return Cone(ambient_rank, cone.rays)


def _require_fan_cone(c: PolyhedralComplex, sigma: Cone) -> None:
    if sigma.generators not in {cell.rays for cell in c.cells}:
        raise ComplexError(f"cone {sigma.label()} is not in the recession fan")


def star_complex(c: PolyhedralComplex, sigma: Cone | Polyhedron) -> PolyhedralComplex:
    """``Π(σ)``: the cells whose recession contains ``σ``, projected to ``N(σ)``."""
    n = c.ambient_rank
    cone = _as_cone(n, sigma)
    _require_fan_cone(c, cone)
    lattice = c.orbit_lattices.for_cone(cone.generators)
    images = [
        cell.linear_image(lattice.projection)
        for cell in c.cells
        if Cone(n, cell.rays).has_face(cone)
    ]
    return build_complex(
        lattice.quotient_rank, images, seed=c.audit_seed, audit_factor=c.audit_factor
    )


def star_fan(c: PolyhedralComplex, cell: Polyhedron) -> PolyhedralComplex:
    """The fan ``{π_Λ(c(Λ')) : Λ ≺ Λ'}`` in ``Ñ(Λ)``."""
    n = c.ambient_rank
    i = c.index_of(cell)
    lattice = c.orbit_lattices.for_cell(i)
    origin = tuple(Fraction(0) for _ in range(n + 1))
    images = [
        Polyhedron.from_generators(n + 1, [origin], c.cells[j].lifted_generators).linear_image(
            lattice.projection
        )
        for j in sorted(c.cofaces_of(i))
    ]
    return build_complex(
        lattice.quotient_rank, images, seed=c.audit_seed, audit_factor=c.audit_factor
    )


def _cone_lattice(c: PolyhedralComplex, cone: Cone) -> QuotientLattice:
    lattice = c.orbit_lattices.cones.get(cone.generators)
    return lattice if lattice is not None else lattice_of_span(c.ambient_rank, cone.generators)


def _cell_lattice(c: PolyhedralComplex, cell: Polyhedron) -> QuotientLattice:
    i = c.index.get(cell.key)
    if i is None:
        return lattice_of_span(c.ambient_rank + 1, cell.lifted_generators)
    return c.orbit_lattices.for_cell(i)


def _image_direction(lattice: QuotientLattice, generators: Iterable[IntVector]) -> IntVector:
    for g in generators:
        image = lattice.project_int(g)
        if any(image):
            return primitive(image)
    raise ComplexError("no generator leaves the span of the smaller cone")


def normal_vector(
    c: PolyhedralComplex, tau: Cone | Polyhedron, sigma: Cone | Polyhedron
) -> IntVector:
    """``v_{σ/τ}``: primitive generator of the image of ``σ`` in ``N(τ)``."""
    n = c.ambient_rank
    small, big = _as_cone(n, tau), _as_cone(n, sigma)
    if big.dim != small.dim + 1:
        raise ComplexError(f"dimension mismatch: {small.dim} and {big.dim}")
    if not big.has_face(small):
        raise ComplexError(f"{small.label()} is not a face of {big.label()}")
    lattice = _cone_lattice(c, small)
    return _image_direction(lattice, big.generators)


def vertex_image(
    c: PolyhedralComplex, gamma: Polyhedron, tau: Cone | Polyhedron | None = None
) -> RatVector:
    """``v_Γ``: the point ``π_τ(Γ)`` in ``N(τ)`` when ``rec(Γ) = τ`` and dimensions agree."""
    n = c.ambient_rank
    cone = Cone(n, gamma.rays) if tau is None else _as_cone(n, tau)
    if cone.generators != gamma.rays:
        raise ComplexError(f"the recession of {gamma.label()} is not {cone.label()}")
    if gamma.dim != cone.dim:
        raise ComplexError(f"{gamma.label()} does not project to a point along {cone.label()}")
    return _cone_lattice(c, cone).project(gamma.vertices[0])


def edge_normal(c: PolyhedralComplex, lam: Polyhedron, lam_prime: Polyhedron) -> IntVector:
    """``v_{Λ'/Λ}``: primitive generator of the image of ``c(Λ')`` in ``Ñ(Λ)``."""
    if lam_prime.dim != lam.dim + 1:
        raise ComplexError(f"dimension mismatch: {lam.dim} and {lam_prime.dim}")
    if not is_face_of(lam, lam_prime):
        raise ComplexError(f"{lam.label()} is not a face of {lam_prime.label()}")
    lattice = _cell_lattice(c, lam)
    return _image_direction(lattice, lam_prime.lifted_generators)


def orbit_lattices(c: PolyhedralComplex) -> OrbitLattices:
    return c.orbit_lattices


def is_reduced(c: PolyhedralComplex) -> bool:
    return c.is_reduced


def component_intersections(c: PolyhedralComplex) -> dict[tuple[int, int], int]:
    """For vertex positions ``(i, j)`` in ``skeleton(0)``, the largest shared orbit dimension."""
    vertices = [cell.vertices[0] for cell in c.skeleton(0)]
    result: dict[tuple[int, int], int] = {}
    for i, j in combinations(range(len(vertices)), 2):
        dims = [
            cell.dim
            for cell in c.cells
            if vertices[i] in cell.vertices and vertices[j] in cell.vertices
        ]
        if dims:
            result[(i, j)] = c.ambient_rank - min(dims)
    return result


def transform(c: PolyhedralComplex, u: ZMat) -> PolyhedralComplex:
    """Apply a unimodular change of coordinates to every cell."""
    unimodular_inverse(u)
    if u.nrows != c.ambient_rank:
        raise ComplexError(f"transformation of shape {u.shape} on rank {c.ambient_rank}")
    return build_complex(
        c.ambient_rank,
        [cell.linear_image(u) for cell in c.maximal_cells],
        seed=c.audit_seed,
        audit_factor=c.audit_factor,
    )
