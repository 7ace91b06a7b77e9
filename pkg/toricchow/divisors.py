"""Invariant divisors and piecewise affine functions.

A rational piecewise affine function ``φ`` is stored as one affine form
``x ↦ <m_Λ, x> + ℓ_Λ`` per maximal cell. Its divisor is

    D_φ = Σ_v -φ(v) V(v) + Σ_τ -ψ(v_τ) V(τ)

where ``ψ`` is the recession function and ``v_τ`` the primitive ray generator.
The principal divisor of ``ϖ^ℓ χ^m`` is
``Σ_τ <m, v_τ> V(τ) + Σ_v (<m, v> + ℓ) V(v)``; the unit factor of the monomial does
not change the divisor and is not modeled.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from toricchow.complex import PolyhedralComplex
from toricchow.errors import DivisorError, ExactAlgebraError
from toricchow.exactalg import IntVector, QMat, RatVector, as_rat, dot, rat_vector, solve_unique

logger = logging.getLogger(__name__)

AffinePiece = tuple[RatVector, Fraction]


def _rays(c: PolyhedralComplex) -> list[IntVector]:
    """Rays of the recession fan in canonical order."""
    return [cell.rays[0] for cell in c.recession_fan.skeleton(1)]


def _vertices(c: PolyhedralComplex) -> list[RatVector]:
    return [cell.vertices[0] for cell in c.skeleton(0)]


@dataclass(frozen=True)
class MonomialFunction:
    """The rational function ``u ϖ^ℓ χ^m``; only ``m`` and ``ℓ`` matter for divisors."""

    m: IntVector
    ell: int


@dataclass(frozen=True, eq=False)
class PiecewiseAffine:
    """Per maximal cell ``(m_Λ, ℓ_Λ)``, continuous across shared faces."""

    complex: PolyhedralComplex
    pieces: tuple[AffinePiece, ...]

    def __post_init__(self) -> None:
        c = self.complex
        if len(self.pieces) != len(c.maximal_indices):
            raise DivisorError(
                f"{len(self.pieces)} affine pieces for {len(c.maximal_indices)} maximal cells"
            )
        for m, _ in self.pieces:
            if len(m) != c.ambient_rank:
                raise DivisorError(f"slope {m} does not live in rank {c.ambient_rank}")
        self._check_continuity()

    @classmethod
    def from_pieces(
        cls, c: PolyhedralComplex, pieces: Sequence[tuple[Sequence[Any], Any]]
    ) -> PiecewiseAffine:
        return cls(c, tuple((rat_vector(m), as_rat(ell)) for m, ell in pieces))

    @classmethod
    def affine(cls, c: PolyhedralComplex, m: Sequence[Any], ell: Any) -> PiecewiseAffine:
        return cls.from_pieces(c, [(m, ell)] * len(c.maximal_indices))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PiecewiseAffine):
            return NotImplemented
        return self.complex == other.complex and self.pieces == other.pieces

    def __hash__(self) -> int:
        return hash((self.complex, self.pieces))

    def piece_for(self, cell_index: int) -> AffinePiece:
        return self.pieces[self.complex.maximal_indices.index(cell_index)]

    def _check_continuity(self) -> None:
        c = self.complex
        maximal = set(c.maximal_indices)
        for i, cell in enumerate(c.cells):
            if i in maximal:
                continue
            around = sorted(j for j in c.cofaces_of(i) if j in maximal)
            pieces = [self.piece_for(j) for j in around]
            for v in cell.vertices:
                values = {dot(m, v) + ell for m, ell in pieces}
                if len(values) > 1:
                    raise DivisorError(f"function is discontinuous at the vertex {v}")
            for r in cell.rays:
                slopes = {dot(m, r) for m, _ in pieces}
                if len(slopes) > 1:
                    raise DivisorError(f"function is discontinuous along the ray {r}")

    def value_at_vertex(self, v: Sequence[Any]) -> Fraction:
        point = rat_vector(v)
        for j in self.complex.maximal_indices:
            if point in self.complex.cells[j].vertices:
                m, ell = self.piece_for(j)
                return Fraction(dot(m, point) + ell)
        raise DivisorError(f"{point} is not a vertex of the complex")

    def evaluate(self, x: Sequence[Any]) -> Fraction:
        point = rat_vector(x)
        for j in self.complex.maximal_indices:
            if self.complex.cells[j].contains(point):
                m, ell = self.piece_for(j)
                return Fraction(dot(m, point) + ell)
        raise DivisorError(f"{point} is not in the support of the complex")

    def is_affine(self) -> bool:
        return len(set(self.pieces)) <= 1

    def __sub__(self, other: PiecewiseAffine) -> PiecewiseAffine:
        if other.complex != self.complex:
            raise DivisorError("functions live on different complexes")
        return PiecewiseAffine(
            self.complex,
            tuple(
                (tuple(a - b for a, b in zip(m1, m2)), l1 - l2)
                for (m1, l1), (m2, l2) in zip(self.pieces, other.pieces)
            ),
        )


@dataclass(frozen=True)
class RecessionFunction:
    """``ψ = rec(φ)``: slope per maximal cone and value per ray of the recession fan."""

    slopes: dict[tuple[IntVector, ...], RatVector] = field(compare=False)
    ray_values: dict[IntVector, Fraction]

    def at_ray(self, ray: Sequence[int]) -> Fraction:
        return self.ray_values[tuple(ray)]


def recession_function(phi: PiecewiseAffine) -> RecessionFunction:
    c = phi.complex
    ray_values: dict[IntVector, Fraction] = {}
    slopes: dict[tuple[IntVector, ...], RatVector] = {}
    for j in c.maximal_indices:
        cell = c.cells[j]
        m, _ = phi.piece_for(j)
        for r in cell.rays:
            value = Fraction(dot(m, r))
            if ray_values.setdefault(r, value) != value:
                raise DivisorError("not a function on the recession fan")
        if cell.rays in slopes:
            other = slopes[cell.rays]
            if any(dot(m, r) != dot(other, r) for r in cell.rays):
                raise DivisorError("not a function on the recession fan")
        else:
            slopes[cell.rays] = m
    return RecessionFunction(slopes, ray_values)


@dataclass(frozen=True)
class TWeilDivisor:
    """Coefficients on the rays of the recession fan and on the vertices."""

    horizontal: tuple[tuple[IntVector, Fraction], ...]
    vertical: tuple[tuple[RatVector, Fraction], ...]

    @classmethod
    def from_maps(
        cls,
        c: PolyhedralComplex,
        horizontal: Mapping[Sequence[int], Any] | None = None,
        vertical: Mapping[Sequence[Any], Any] | None = None,
    ) -> TWeilDivisor:
        rays = _rays(c)
        vertices = _vertices(c)
        h = {tuple(int(x) for x in k): as_rat(v) for k, v in (horizontal or {}).items()}
        v_map = {rat_vector(k): as_rat(v) for k, v in (vertical or {}).items()}
        unknown = (set(h) - set(rays)) | (set(v_map) - set(vertices))
        if unknown:
            raise DivisorError(f"coefficients on unknown rays or vertices: {sorted(unknown)}")
        return cls(
            tuple((r, h.get(r, Fraction(0))) for r in rays),
            tuple((v, v_map.get(v, Fraction(0))) for v in vertices),
        )

    @classmethod
    def from_vector(cls, c: PolyhedralComplex, values: Sequence[Any]) -> TWeilDivisor:
        rays = _rays(c)
        vertices = _vertices(c)
        if len(values) != len(rays) + len(vertices):
            raise DivisorError(
                f"expected {len(rays) + len(vertices)} coefficients, got {len(values)}"
            )
        coefficients = rat_vector(values)
        return cls(
            tuple(zip(rays, coefficients[: len(rays)])),
            tuple(zip(vertices, coefficients[len(rays):])),
        )

    def vector(self) -> RatVector:
        """Coefficients in the generator order of the Chow group in dimension ``n``."""
        return tuple(x for _, x in self.horizontal) + tuple(x for _, x in self.vertical)

    def at_ray(self, ray: Sequence[int]) -> Fraction:
        target = tuple(int(x) for x in ray)
        for r, x in self.horizontal:
            if r == target:
                return x
        raise DivisorError(f"{target} is not a ray of the recession fan")

    def at_vertex(self, vertex: Sequence[Any]) -> Fraction:
        target = rat_vector(vertex)
        for v, x in self.vertical:
            if v == target:
                return x
        raise DivisorError(f"{target} is not a vertex of the complex")

    def _combine(self, other: TWeilDivisor, sign: int) -> TWeilDivisor:
        if [r for r, _ in self.horizontal] != [r for r, _ in other.horizontal] or [
            v for v, _ in self.vertical
        ] != [v for v, _ in other.vertical]:
            raise DivisorError("divisors live on different complexes")
        return TWeilDivisor(
            tuple((r, a + sign * b) for (r, a), (_, b) in zip(self.horizontal, other.horizontal)),
            tuple((v, a + sign * b) for (v, a), (_, b) in zip(self.vertical, other.vertical)),
        )

    def __add__(self, other: TWeilDivisor) -> TWeilDivisor:
        return self._combine(other, 1)

    def __sub__(self, other: TWeilDivisor) -> TWeilDivisor:
        return self._combine(other, -1)

    def __neg__(self) -> TWeilDivisor:
        return self.scale(-1)

    def scale(self, factor: Any) -> TWeilDivisor:
        f = as_rat(factor)
        return TWeilDivisor(
            tuple((r, f * a) for r, a in self.horizontal),
            tuple((v, f * a) for v, a in self.vertical),
        )

    @property
    def is_zero(self) -> bool:
        return all(x == 0 for x in self.vector())


def divisor_of(phi: PiecewiseAffine) -> TWeilDivisor:
    c = phi.complex
    psi = recession_function(phi)
    return TWeilDivisor(
        tuple((r, -psi.at_ray(r)) for r in _rays(c)),
        tuple((v, -phi.value_at_vertex(v)) for v in _vertices(c)),
    )


def principal_divisor(c: PolyhedralComplex, f: MonomialFunction) -> TWeilDivisor:
    if len(f.m) != c.ambient_rank:
        raise DivisorError(f"character {f.m} does not live in rank {c.ambient_rank}")
    return TWeilDivisor(
        tuple((r, Fraction(dot(f.m, r))) for r in _rays(c)),
        tuple((v, Fraction(dot(f.m, v) + f.ell)) for v in _vertices(c)),
    )


def vanishing_orders(c: PolyhedralComplex, f: MonomialFunction) -> dict[IntVector, int]:
    """``<(m, ℓ), ω>`` for every primitive ray ``ω`` of the cone complex."""
    covector = (*f.m, f.ell)
    rays = {g for cell in c.cells for g in cell.lifted_generators}
    return {omega: int(dot(covector, omega)) for omega in sorted(rays)}


def function_of(c: PolyhedralComplex, divisor: TWeilDivisor) -> PiecewiseAffine:
    """The piecewise affine function whose divisor is ``divisor``."""
    pieces = []
    for j in c.maximal_indices:
        cell = c.cells[j]
        rows = [(*v, Fraction(1)) for v in cell.vertices] + [(*r, 0) for r in cell.rays]
        rhs = [-divisor.at_vertex(v) for v in cell.vertices] + [
            -divisor.at_ray(r) for r in cell.rays
        ]
        try:
            solution = solve_unique(QMat.from_rows(rows, ncols=c.ambient_rank + 1), rhs)
        except ExactAlgebraError as exc:
            raise DivisorError(f"cannot recover the function on {cell.label()}: {exc}") from exc
        pieces.append((solution[:-1], solution[-1]))
    logger.debug("recovered a function with %d pieces", len(pieces))
    return PiecewiseAffine(c, tuple(pieces))


def rationally_equivalent(c: PolyhedralComplex, d1: TWeilDivisor, d2: TWeilDivisor) -> bool:
    """Two divisors are equivalent iff their difference comes from an affine function."""
    return function_of(c, d1 - d2).is_affine()
