"""Chow groups of the toric scheme of a complete regular complex.

For a dimension ``k`` (absolute over the base), the Chow group is generated by

* horizontal cycles ``V(σ)`` for cones ``σ`` of the recession fan of dimension ``n - k + 1``,
* vertical cycles ``V(Λ)`` for cells ``Λ`` of dimension ``n - k``,

and the relations are the image of the map

* ``(m, ℓ) ∈ M(τ) ⊕ Q`` for ``τ`` of dimension ``n - k``:
  ``Σ_σ <m, v_{σ/τ}> V(σ) + Σ_{rec(Λ)=τ} (<m, v_Λ> + ℓ) V(Λ)``,
* ``m ∈ M̃(Λ)`` for cells ``Λ`` of dimension ``n - k - 1``:
  ``Σ_{Λ ≺ Λ'} <m, v_{Λ'/Λ}> V(Λ')``.

Columns are ordered horizontal first, then vertical, each in canonical cell
order. Row blocks follow the same order (cones, then cells), and inside a block
the rows are the dual basis of the quotient coordinates from
:func:`toricchow.exactalg.quotient_lattice`, followed by ``ℓ``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from sympy import Poly, Symbol, expand

from toricchow.complex import PolyhedralComplex, edge_normal, normal_vector, vertex_image
from toricchow.errors import NonRegularError, NotCompleteError
from toricchow.exactalg import QMat, ZMat, format_rat, rank_q, rref
from toricchow.polyhedron import Cone, Polyhedron

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CycleBasis:
    """Generators of the Chow group in dimension ``k``."""

    k: int
    horizontal: tuple[Cone, ...]
    vertical: tuple[int, ...]
    labels: tuple[str, ...]

    @property
    def size(self) -> int:
        return len(self.horizontal) + len(self.vertical)


@dataclass(frozen=True)
class ChowPresentation:
    basis: CycleBasis
    relations: QMat
    rank: int
    dim: int
    free_generators: tuple[int, ...]
    expressions: dict[int, dict[int, Fraction]] = field(compare=False)

    def expression_text(self, generator: int) -> str:
        """``V[3] = 2*H[(1,0)] - V[4]`` style rendering of a pivot generator."""
        labels = self.basis.labels
        terms = self.expressions[generator]
        parts = [f"{format_rat(c)}*{labels[f]}" for f, c in sorted(terms.items()) if c != 0]
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class RankPolynomial:
    """Coefficients ``c_0..c_{n+1}``; ``c_k`` predicts the Chow dimension at ``n + 1 - k``."""

    coefficients: tuple[int, ...]

    def __str__(self) -> str:
        terms = []
        for power, c in enumerate(self.coefficients):
            if c == 0:
                continue
            if power == 0:
                body = str(abs(c))
            else:
                monomial = "z" if power == 1 else f"z^{power}"
                body = monomial if abs(c) == 1 else f"{abs(c)}{monomial}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        if not terms:
            return "0"
        first_sign, first_body = terms[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        return text

    def evaluate(self, z: int | Fraction) -> Fraction:
        return sum((Fraction(c) * Fraction(z) ** i for i, c in enumerate(self.coefficients)),
                   start=Fraction(0))


@dataclass(frozen=True)
class RankFormulaCheck:
    ok: bool
    polynomial: RankPolynomial
    chow_dims: tuple[int, ...]


@dataclass(frozen=True)
class SpecializationMatrix:
    """Rows are cells of dimension ``n - k``, columns cones of dimension ``n - k``."""

    k: int
    rows: tuple[str, ...]
    columns: tuple[str, ...]
    matrix: ZMat


@dataclass(frozen=True)
class LocalizationBounds:
    k: int
    generic: int
    total: int
    special: int

    @property
    def holds(self) -> bool:
        return self.generic <= self.total <= self.generic + self.special


def _require(c: PolyhedralComplex, force: bool) -> None:
    if not c.complete:
        raise NotCompleteError("Chow groups are only computed for complete complexes")
    if not c.regular and not force:
        raise NonRegularError(
            "the complex is not regular; use --force to compute anyway"
        )


def _fan_cones(c: PolyhedralComplex, d: int) -> list[Cone]:
    return list(c.fan_cones.get(d, ()))


def horizontal_label(cone: Cone) -> str:
    return f"H[{cone.label()}]"


def vertical_label(index: int) -> str:
    return f"V[{index}]"


def cycle_basis(c: PolyhedralComplex, k: int, *, force: bool = False) -> CycleBasis:
    _require(c, force)
    n = c.ambient_rank
    horizontal = tuple(_fan_cones(c, n - k + 1))
    vertical = tuple(c.skeleton_indices(n - k))
    labels = tuple(horizontal_label(s) for s in horizontal) + tuple(
        vertical_label(i) for i in vertical
    )
    return CycleBasis(k, horizontal, vertical, labels)


def _cone_block(
    c: PolyhedralComplex, basis: CycleBasis, tau: Cone, with_ell: bool
) -> list[list[Fraction]]:
    lattice = c.orbit_lattices.for_cone(tau.generators)
    tau_rays = set(tau.generators)
    rank = lattice.quotient_rank
    rows = [[Fraction(0)] * basis.size for _ in range(rank + (1 if with_ell else 0))]
    for col, sigma in enumerate(basis.horizontal):
        if sigma.dim == tau.dim + 1 and tau_rays <= set(sigma.generators):
            v = normal_vector(c, tau, sigma)
            for i in range(rank):
                rows[i][col] = Fraction(v[i])
    offset = len(basis.horizontal)
    for col, cell_index in enumerate(basis.vertical, start=offset):
        cell = c.cells[cell_index]
        if cell.rays != tau.generators:
            continue
        point = vertex_image(c, cell, tau)
        for i in range(rank):
            rows[i][col] = point[i]
        if with_ell:
            rows[rank][col] = Fraction(1)
    logger.debug("cone block for %s: %d rows", tau.label(), len(rows))
    return rows


def _cell_block(c: PolyhedralComplex, basis: CycleBasis, cell_index: int) -> list[list[Fraction]]:
    lattice = c.orbit_lattices.for_cell(cell_index)
    cell = c.cells[cell_index]
    rows = [[Fraction(0)] * basis.size for _ in range(lattice.quotient_rank)]
    columns = {index: col for col, index in enumerate(basis.vertical, start=len(basis.horizontal))}
    for coface in c.cofacets[cell_index]:
        if coface not in columns:
            continue
        v = edge_normal(c, cell, c.cells[coface])
        for i in range(lattice.quotient_rank):
            rows[i][columns[coface]] = Fraction(v[i])
    return rows


def relation_matrix(c: PolyhedralComplex, k: int, *, force: bool = False) -> QMat:
    """The relation matrix of the Chow group in dimension ``k`` (rows are relations)."""
    basis = cycle_basis(c, k, force=force)
    n = c.ambient_rank
    rows: list[list[Fraction]] = []
    for tau in _fan_cones(c, n - k):
        rows += _cone_block(c, basis, tau, with_ell=True)
    for index in c.skeleton_indices(n - k - 1):
        rows += _cell_block(c, basis, index)
    matrix = QMat.from_rows(rows, ncols=basis.size)
    logger.debug("relation matrix at k=%d has shape %s", k, matrix.shape)
    return matrix


def chow_dim(c: PolyhedralComplex, k: int, *, force: bool = False) -> int:
    matrix = relation_matrix(c, k, force=force)
    return matrix.ncols - rank_q(matrix)


def total_dims(c: PolyhedralComplex, *, force: bool = False) -> tuple[int, ...]:
    return tuple(chow_dim(c, k, force=force) for k in range(c.ambient_rank + 2))


def presentation(c: PolyhedralComplex, k: int, *, force: bool = False) -> ChowPresentation:
    """Free generators are the non-pivot columns of the reduced row echelon form."""
    basis = cycle_basis(c, k, force=force)
    matrix = relation_matrix(c, k, force=force)
    reduced, pivots = rref(matrix)
    free = tuple(j for j in range(matrix.ncols) if j not in pivots)
    expressions: dict[int, dict[int, Fraction]] = {}
    for row, p in enumerate(pivots):
        expressions[p] = {f: -reduced[row, f] for f in free if reduced[row, f] != 0}
    for f in free:
        expressions[f] = {f: Fraction(1)}
    return ChowPresentation(
        basis, matrix, len(pivots), matrix.ncols - len(pivots), free, expressions
    )


def generic_fiber_dim(c: PolyhedralComplex, k: int, *, force: bool = False) -> int:
    """Chow dimension of the generic fiber: the horizontal block without ``ℓ``."""
    basis = cycle_basis(c, k, force=force)
    horizontal_only = CycleBasis(k, basis.horizontal, (), basis.labels[: len(basis.horizontal)])
    rows: list[list[Fraction]] = []
    for tau in _fan_cones(c, c.ambient_rank - k):
        rows += _cone_block(c, horizontal_only, tau, with_ell=False)
    matrix = QMat.from_rows(rows, ncols=horizontal_only.size)
    return matrix.ncols - rank_q(matrix)


def special_fiber_dim(c: PolyhedralComplex, k: int, *, force: bool = False) -> int:
    """Chow dimension of the special fiber: the vertical block."""
    basis = cycle_basis(c, k, force=force)
    vertical_only = CycleBasis(k, (), basis.vertical, basis.labels[len(basis.horizontal):])
    rows: list[list[Fraction]] = []
    for index in c.skeleton_indices(c.ambient_rank - k - 1):
        rows += _cell_block(c, vertical_only, index)
    matrix = QMat.from_rows(rows, ncols=vertical_only.size)
    return matrix.ncols - rank_q(matrix)


def localization_bounds(c: PolyhedralComplex, k: int, *, force: bool = False) -> LocalizationBounds:
    return LocalizationBounds(
        k,
        generic_fiber_dim(c, k, force=force),
        chow_dim(c, k, force=force),
        special_fiber_dim(c, k, force=force),
    )


def ch0_special_incidence(c: PolyhedralComplex) -> int:
    """Cokernel dimension of the bounded-edge incidence map into the vertices."""
    if not c.complete:
        raise NotCompleteError("the special fiber is only presented for complete complexes")
    vertices = {c.cells[i].vertices[0]: row for row, i in enumerate(c.skeleton_indices(0))}
    columns = []
    for edge in c.skeleton(1):
        if not edge.is_bounded:
            continue
        first, second = edge.vertices
        column = [0] * len(vertices)
        column[vertices[first]] += 1
        column[vertices[second]] -= 1
        columns.append(column)
    if not columns:
        return len(vertices)
    incidence = ZMat.from_rows(columns, ncols=len(vertices)).transpose()
    return len(vertices) - rank_q(incidence)


def rank_polynomial(c: PolyhedralComplex, *, force: bool = False) -> RankPolynomial:
    """Expand ``Σ_{σ ∈ c(Π)} z^{dim σ} (1 - z)^{n + 1 - dim σ}``."""
    _require(c, force)
    z = Symbol("z")
    n = c.ambient_rank
    counts = c.cone_counts()
    expression = expand(sum(counts[d] * z**d * (1 - z) ** (n + 1 - d) for d in range(n + 2)))
    poly = Poly(expression, z)
    coefficients = [0] * (n + 2)
    for (power,), value in poly.terms():
        coefficients[power] = int(value)
    return RankPolynomial(tuple(coefficients))


def verify_rank_formula(c: PolyhedralComplex, *, force: bool = False) -> RankFormulaCheck:
    """Compare ``c_k`` with the Chow dimension at ``n + 1 - k`` for every ``k``."""
    polynomial = rank_polynomial(c, force=force)
    n = c.ambient_rank
    dims = tuple(chow_dim(c, n + 1 - k, force=force) for k in range(n + 2))
    ok = dims == polynomial.coefficients
    if not ok:
        logger.warning("rank formula mismatch: polynomial %s, dimensions %s",
                       polynomial.coefficients, dims)
    return RankFormulaCheck(ok, polynomial, dims)


def specialize(c: PolyhedralComplex, k: int, *, force: bool = False) -> SpecializationMatrix:
    """Entry ``(Λ, σ)`` is ``mult(Λ)`` when ``rec(Λ) = σ`` and zero otherwise."""
    _require(c, force)
    n = c.ambient_rank
    cones = _fan_cones(c, n - k)
    cells = c.skeleton_indices(n - k)
    entries = [
        [c.cells[i].multiplicity() if c.cells[i].rays == sigma.generators else 0 for sigma in cones]
        for i in cells
    ]
    return SpecializationMatrix(
        k,
        tuple(vertical_label(i) for i in cells),
        tuple(horizontal_label(s) for s in cones),
        ZMat.from_rows(entries, ncols=len(cones)),
    )


def cell_label(c: PolyhedralComplex, index: int) -> str:
    cell: Polyhedron = c.cells[index]
    return f"{vertical_label(index)} {cell.label()}"
