"""Exact integer and rational linear algebra.

All arithmetic is arbitrary precision: scalars are ``fractions.Fraction`` and
Python ``int``. Rank, reduced row echelon forms and inverses are delegated to
sympy's ``DomainMatrix`` over ``QQ``; Smith normal forms use sympy's
``smith_normal_decomp`` over ``ZZ``. The Hermite normal form is computed here so
that its convention stays fixed:

* row style: ``u @ m == h`` with ``u`` unimodular,
* pivots are strictly positive and move strictly to the right,
* entries above a pivot are reduced into ``[0, pivot)``,
* zero rows are collected at the bottom.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, TypeVar

from sympy.polys.domains import QQ, ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import smith_normal_decomp

from toricchow.errors import ExactAlgebraError

logger = logging.getLogger(__name__)

Rat = Fraction
IntVector = tuple[int, ...]
RatVector = tuple[Fraction, ...]

_M = TypeVar("_M", bound="_ExactMatrix")


def as_rat(value: Any) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ExactAlgebraError(f"not a rational number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ExactAlgebraError(f"not a rational number: {value!r}") from exc
    raise ExactAlgebraError(f"not a rational number: {value!r}")


def rat_vector(values: Iterable[Any]) -> RatVector:
    return tuple(as_rat(v) for v in values)


def format_rat(value: Fraction) -> str:
    """``3`` for integers, ``"p/q"`` otherwise."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def dot(a: Sequence[Any], b: Sequence[Any]) -> Any:
    if len(a) != len(b):
        raise ExactAlgebraError(f"length mismatch in pairing: {len(a)} != {len(b)}")
    return sum((x * y for x, y in zip(a, b)), start=0)


@dataclass(frozen=True)
class _ExactMatrix:
    nrows: int
    ncols: int
    entries: tuple[Any, ...]

    def __post_init__(self) -> None:
        if self.nrows < 0 or self.ncols < 0:
            raise ExactAlgebraError(f"negative shape {self.nrows}x{self.ncols}")
        if len(self.entries) != self.nrows * self.ncols:
            raise ExactAlgebraError(
                f"{len(self.entries)} entries do not fit shape {self.nrows}x{self.ncols}"
            )

    @classmethod
    def _coerce(cls, value: Any) -> Any:
        raise NotImplementedError

    @classmethod
    def from_rows(cls: type[_M], rows: Iterable[Sequence[Any]], ncols: int | None = None) -> _M:
        row_list = [tuple(cls._coerce(x) for x in row) for row in rows]
        if ncols is None:
            if not row_list:
                raise ExactAlgebraError("column count is required for a matrix without rows")
            ncols = len(row_list[0])
        for row in row_list:
            if len(row) != ncols:
                raise ExactAlgebraError(f"ragged rows: expected {ncols} columns, got {len(row)}")
        flat = tuple(x for row in row_list for x in row)
        return cls(len(row_list), ncols, flat)

    @classmethod
    def zeros(cls: type[_M], nrows: int, ncols: int) -> _M:
        return cls(nrows, ncols, tuple(cls._coerce(0) for _ in range(nrows * ncols)))

    @classmethod
    def identity(cls: type[_M], n: int) -> _M:
        return cls.from_rows(
            [[1 if i == j else 0 for j in range(n)] for i in range(n)], ncols=n
        )

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, index: tuple[int, int]) -> Any:
        i, j = index
        return self.entries[i * self.ncols + j]

    def row(self, i: int) -> tuple[Any, ...]:
        return self.entries[i * self.ncols : (i + 1) * self.ncols]

    def rows(self) -> list[tuple[Any, ...]]:
        return [self.row(i) for i in range(self.nrows)]

    def column(self, j: int) -> tuple[Any, ...]:
        return tuple(self.entries[i * self.ncols + j] for i in range(self.nrows))

    def transpose(self: _M) -> _M:
        return type(self).from_rows(
            [self.column(j) for j in range(self.ncols)], ncols=self.nrows
        )

    def apply(self, vector: Sequence[Any]) -> tuple[Any, ...]:
        """Matrix times column vector."""
        if len(vector) != self.ncols:
            raise ExactAlgebraError(f"cannot apply {self.shape} matrix to a {len(vector)}-vector")
        return tuple(dot(self.row(i), vector) for i in range(self.nrows))

    def stack(self: _M, other: _ExactMatrix) -> _M:
        if other.ncols != self.ncols:
            raise ExactAlgebraError(f"cannot stack {self.shape} on {other.shape}")
        return type(self).from_rows(self.rows() + other.rows(), ncols=self.ncols)

    def select_rows(self: _M, indices: Iterable[int]) -> _M:
        return type(self).from_rows([self.row(i) for i in indices], ncols=self.ncols)


@dataclass(frozen=True)
class ZMat(_ExactMatrix):
    """Integer matrix, row-major."""

    @classmethod
    def _coerce(cls, value: Any) -> int:
        if isinstance(value, Fraction):
            if value.denominator != 1:
                raise ExactAlgebraError(f"non-integral entry {value} in integer matrix")
            return value.numerator
        return int(value)

    def matmul(self, other: ZMat) -> ZMat:
        if self.ncols != other.nrows:
            raise ExactAlgebraError(f"cannot multiply {self.shape} by {other.shape}")
        cols = [other.column(j) for j in range(other.ncols)]
        return ZMat.from_rows(
            [[dot(self.row(i), c) for c in cols] for i in range(self.nrows)], ncols=other.ncols
        )

    def to_qmat(self) -> QMat:
        return QMat(self.nrows, self.ncols, tuple(Fraction(x) for x in self.entries))


@dataclass(frozen=True)
class QMat(_ExactMatrix):
    """Rational matrix, row-major."""

    @classmethod
    def _coerce(cls, value: Any) -> Fraction:
        return as_rat(value)

    def matmul(self, other: QMat) -> QMat:
        if self.ncols != other.nrows:
            raise ExactAlgebraError(f"cannot multiply {self.shape} by {other.shape}")
        cols = [other.column(j) for j in range(other.ncols)]
        return QMat.from_rows(
            [[dot(self.row(i), c) for c in cols] for i in range(self.nrows)], ncols=other.ncols
        )

    def to_qmat(self) -> QMat:
        return self


def _to_qq(m: _ExactMatrix) -> DomainMatrix:
    rows = []
    for row in m.rows():
        qrow = []
        for x in row:
            f = as_rat(x)
            qrow.append(QQ(f.numerator, f.denominator))
        rows.append(qrow)
    return DomainMatrix(rows, m.shape, QQ)


def _to_zz(m: ZMat) -> DomainMatrix:
    return DomainMatrix([[ZZ(int(x)) for x in row] for row in m.rows()], m.shape, ZZ)


def _from_qq(dm: DomainMatrix, shape: tuple[int, int]) -> QMat:
    rows = [[Fraction(int(e.numerator), int(e.denominator)) for e in row] for row in dm.to_list()]
    return QMat.from_rows(rows, ncols=shape[1])


def _from_zz(dm: DomainMatrix, shape: tuple[int, int]) -> ZMat:
    return ZMat.from_rows([[int(e) for e in row] for row in dm.to_list()], ncols=shape[1])


# Memoized per matrix; matrices are immutable.
@lru_cache(maxsize=16384)
def rank_q(m: _ExactMatrix) -> int:
    """Rank over the rationals."""
    if m.nrows == 0 or m.ncols == 0:
        return 0
    return int(_to_qq(m).rank())


@lru_cache(maxsize=16384)
def rref(m: _ExactMatrix) -> tuple[QMat, tuple[int, ...]]:
    """Reduced row echelon form and its pivot columns (leftmost pivots first)."""
    if m.nrows == 0 or m.ncols == 0:
        return QMat.zeros(m.nrows, m.ncols), ()
    reduced, pivots = _to_qq(m).rref()
    return _from_qq(reduced, m.shape), tuple(int(p) for p in pivots)


def kernel_basis(m: _ExactMatrix) -> list[RatVector]:
    """Basis of ``{v : m @ v == 0}``, one vector per non-pivot column."""
    if m.ncols == 0:
        return []
    reduced, pivots = rref(m)
    free = [j for j in range(m.ncols) if j not in pivots]
    basis = []
    for f in free:
        vector = [Fraction(0)] * m.ncols
        vector[f] = Fraction(1)
        for row_index, p in enumerate(pivots):
            vector[p] = -reduced[row_index, f]
        basis.append(tuple(vector))
    return basis


def in_row_space(m: _ExactMatrix, v: Sequence[Any]) -> bool:
    """True iff ``v`` is a rational combination of the rows of ``m``."""
    if len(v) != m.ncols:
        raise ExactAlgebraError(f"vector of length {len(v)} against {m.ncols} columns")
    if all(as_rat(x) == 0 for x in v):
        return True
    augmented = m.to_qmat().stack(QMat.from_rows([v], ncols=m.ncols))
    return rank_q(augmented) == rank_q(m)


def solve_unique(m: _ExactMatrix, b: Sequence[Any]) -> RatVector:
    """The unique solution of ``m @ x == b``."""
    if len(b) != m.nrows:
        raise ExactAlgebraError(f"right-hand side of length {len(b)} against {m.nrows} rows")
    if m.ncols == 0:
        if any(as_rat(x) != 0 for x in b):
            raise ExactAlgebraError("inconsistent linear system")
        return ()
    augmented = QMat.from_rows(
        [list(row) + [b[i]] for i, row in enumerate(m.to_qmat().rows())], ncols=m.ncols + 1
    )
    reduced, pivots = rref(augmented)
    if m.ncols in pivots:
        raise ExactAlgebraError("inconsistent linear system")
    if len(pivots) < m.ncols:
        raise ExactAlgebraError(
            f"underdetermined linear system: rank {len(pivots)} for {m.ncols} unknowns"
        )
    solution = [Fraction(0)] * m.ncols
    for row_index, p in enumerate(pivots):
        solution[p] = reduced[row_index, m.ncols]
    return tuple(solution)


def unimodular_inverse(u: ZMat) -> ZMat:
    """Exact inverse of a unimodular integer matrix."""
    if u.nrows != u.ncols:
        raise ExactAlgebraError(f"matrix of shape {u.shape} is not square")
    if u.nrows == 0:
        return u
    if rank_q(u) < u.nrows:
        raise ExactAlgebraError("matrix is singular")
    inverse = _from_qq(_to_qq(u).inv(), u.shape)
    if any(x.denominator != 1 for x in inverse.entries):
        raise ExactAlgebraError("matrix is not unimodular")
    return ZMat.from_rows(inverse.rows(), ncols=u.ncols)


def hnf(m: ZMat) -> tuple[ZMat, ZMat]:
    """Row Hermite normal form: returns ``(h, u)`` with ``u @ m == h``."""
    a = [list(row) for row in m.rows()]
    u = [[1 if i == j else 0 for j in range(m.nrows)] for i in range(m.nrows)]

    def subtract(target: int, source: int, factor: int) -> None:
        if factor:
            a[target] = [x - factor * y for x, y in zip(a[target], a[source])]
            u[target] = [x - factor * y for x, y in zip(u[target], u[source])]

    pivot_row = 0
    for col in range(m.ncols):
        if pivot_row >= m.nrows:
            break
        # Euclid on the column: the smallest nonzero entry becomes the pivot
        while True:
            nonzero = [i for i in range(pivot_row, m.nrows) if a[i][col] != 0]
            if not nonzero:
                break
            best = min(nonzero, key=lambda i: (abs(a[i][col]), i))
            a[pivot_row], a[best] = a[best], a[pivot_row]
            u[pivot_row], u[best] = u[best], u[pivot_row]
            if all(a[i][col] == 0 for i in range(pivot_row + 1, m.nrows)):
                break
            for i in range(pivot_row + 1, m.nrows):
                subtract(i, pivot_row, a[i][col] // a[pivot_row][col])
        if a[pivot_row][col] == 0:
            continue
        if a[pivot_row][col] < 0:
            a[pivot_row] = [-x for x in a[pivot_row]]
            u[pivot_row] = [-x for x in u[pivot_row]]
        pivot = a[pivot_row][col]
        for i in range(pivot_row):
            subtract(i, pivot_row, a[i][col] // pivot)
        pivot_row += 1

    return ZMat.from_rows(a, ncols=m.ncols), ZMat.from_rows(u, ncols=m.nrows)


def snf(m: ZMat) -> tuple[ZMat, ZMat, ZMat]:
    """Smith normal form: returns ``(s, u, v)`` with ``u @ m @ v == s``, diagonal ``d_i >= 0``."""
    if all(x == 0 for x in m.entries):
        return ZMat.zeros(m.nrows, m.ncols), ZMat.identity(m.nrows), ZMat.identity(m.ncols)
    smf, left, right = smith_normal_decomp(_to_zz(m))
    s = [list(row) for row in _from_zz(smf, m.shape).rows()]
    u = [list(row) for row in _from_zz(left, (m.nrows, m.nrows)).rows()]
    for i in range(min(m.nrows, m.ncols)):
        if s[i][i] < 0:
            s[i] = [-x for x in s[i]]
            u[i] = [-x for x in u[i]]
    return (
        ZMat.from_rows(s, ncols=m.ncols),
        ZMat.from_rows(u, ncols=m.nrows),
        _from_zz(right, (m.ncols, m.ncols)),
    )


def invariant_factors(m: ZMat) -> tuple[int, ...]:
    """Nonzero diagonal entries of the Smith normal form."""
    s, _, _ = snf(m)
    return tuple(s[i, i] for i in range(min(s.nrows, s.ncols)) if s[i, i] != 0)


def primitive(v: Sequence[int]) -> IntVector:
    """Divide an integer vector by the gcd of its entries."""
    g = math.gcd(*(int(x) for x in v)) if v else 0
    if g == 0:
        raise ExactAlgebraError("no primitive representative for the zero vector")
    return tuple(int(x) // g for x in v)


def clear_denominators(v: Sequence[Any]) -> IntVector:
    """Scale a rational vector by the lcm of its denominators."""
    values = rat_vector(v)
    scale = math.lcm(*(x.denominator for x in values)) if values else 1
    return tuple(int(x * scale) for x in values)


def primitive_direction(v: Sequence[Any]) -> IntVector:
    """Primitive integer vector on the ray spanned by a nonzero rational vector."""
    return primitive(clear_denominators(v))


def denominator_lcm(v: Iterable[Fraction]) -> int:
    return math.lcm(1, *(x.denominator for x in v))


def saturation(rows: ZMat) -> ZMat:
    """Basis of ``span_Q(rows) ∩ Z^n``, in Hermite normal form."""
    r = rank_q(rows)
    if r == 0:
        return ZMat.zeros(0, rows.ncols)
    _, _, v = snf(rows)
    v_inverse = unimodular_inverse(v)
    h, _ = hnf(v_inverse.select_rows(range(r)))
    return h.select_rows(range(r))


@dataclass(frozen=True)
class QuotientLattice:
    """``Z^n / L`` for a saturated sublattice ``L``.

    ``projection`` sends ambient vectors to quotient coordinates. Its rows also
    form a basis of the annihilator of ``L`` in the dual lattice, so the dual
    basis of the quotient coordinates pulls back to ``dual_basis``.
    """

    ambient_rank: int
    sub_basis: ZMat
    quotient_rank: int
    projection: ZMat

    @property
    def dual_basis(self) -> ZMat:
        return self.projection

    def project(self, vector: Sequence[Any]) -> RatVector:
        return tuple(Fraction(x) for x in self.projection.apply(rat_vector(vector)))

    def project_int(self, vector: Sequence[int]) -> IntVector:
        return tuple(int(x) for x in self.projection.apply(tuple(int(x) for x in vector)))

    def contains(self, vector: Sequence[Any]) -> bool:
        """True iff the vector lies in the rational span of the sublattice."""
        return all(x == 0 for x in self.project(vector))


def quotient_lattice(ambient_rank: int, sub: ZMat) -> QuotientLattice:
    """Quotient of ``Z^ambient_rank`` by the saturation of the rows of ``sub``."""
    if sub.nrows and sub.ncols != ambient_rank:
        raise ExactAlgebraError(
            f"sublattice rows have {sub.ncols} entries, expected {ambient_rank}"
        )
    if sub.nrows == 0:
        return QuotientLattice(
            ambient_rank, ZMat.zeros(0, ambient_rank), ambient_rank, ZMat.identity(ambient_rank)
        )
    if rank_q(sub) < sub.nrows:
        raise ExactAlgebraError("sublattice rows are linearly dependent")
    basis = saturation(sub)
    r = basis.nrows
    _, _, v = snf(basis)
    complement = ZMat.from_rows([v.column(j) for j in range(r, ambient_rank)], ncols=ambient_rank)
    if complement.nrows:
        complement, _ = hnf(complement)
    logger.debug("quotient of Z^%d by rank %d sublattice", ambient_rank, r)
    return QuotientLattice(ambient_rank, basis, ambient_rank - r, complement)


def lattice_of_span(ambient_rank: int, vectors: Iterable[Sequence[Any]]) -> QuotientLattice:
    """Quotient of ``Z^n`` by the saturated lattice spanned by arbitrary rational vectors."""
    directions = [clear_denominators(v) for v in vectors if any(as_rat(x) != 0 for x in v)]
    if not directions:
        return quotient_lattice(ambient_rank, ZMat.zeros(0, ambient_rank))
    return quotient_lattice(ambient_rank, saturation(ZMat.from_rows(directions, ambient_rank)))
