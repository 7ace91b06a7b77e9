"""Tests for the exact linear algebra kernel."""

import math
import random
from fractions import Fraction
from itertools import combinations

import pytest
from sympy import Matrix

from toricchow.errors import ExactAlgebraError
from toricchow.exactalg import (
    QMat,
    ZMat,
    as_rat,
    clear_denominators,
    format_rat,
    hnf,
    in_row_space,
    invariant_factors,
    kernel_basis,
    lattice_of_span,
    primitive,
    primitive_direction,
    quotient_lattice,
    rank_q,
    rref,
    saturation,
    snf,
    solve_unique,
    unimodular_inverse,
)


def random_matrix(rng: random.Random, max_size: int = 6) -> ZMat:
    rows = rng.randint(1, max_size)
    cols = rng.randint(1, max_size)
    return ZMat.from_rows(
        [[rng.randint(-9, 9) for _ in range(cols)] for _ in range(rows)], ncols=cols
    )


def determinant(rows) -> int:
    return int(Matrix([list(r) for r in rows]).det())


def is_unimodular(m: ZMat) -> bool:
    return m.nrows == m.ncols and abs(determinant(m.rows())) == 1


class TestScalars:
    """Tests for scalar coercion and formatting."""

    def test_as_rat_accepts_ints_fractions_and_strings(self):
        """Integers, fractions and p/q strings become Fractions."""
        assert as_rat(3) == Fraction(3)
        assert as_rat(Fraction(1, 2)) == Fraction(1, 2)
        assert as_rat("-3/4") == Fraction(-3, 4)

    @pytest.mark.parametrize("value", [True, "1/0", "abc", 0.5])
    def test_as_rat_rejects_other_values(self, value):
        """Booleans, floats and malformed strings are not rational inputs."""
        with pytest.raises(ExactAlgebraError):
            as_rat(value)

    def test_format_rat(self):
        """Integers print bare, other rationals as p/q."""
        assert format_rat(Fraction(4)) == "4"
        assert format_rat(Fraction(-1, 2)) == "-1/2"


class TestRationalAlgebra:
    """Tests for rank, echelon forms and linear systems over Q."""

    def test_rank_of_dependent_rows(self):
        m = ZMat.from_rows([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
        assert rank_q(m) == 2

    def test_rank_of_empty_matrix(self):
        assert rank_q(ZMat.zeros(0, 3)) == 0

    def test_kernel_of_row_vector(self):
        """The kernel of (1, 1) is spanned by (-1, 1)."""
        assert kernel_basis(ZMat.from_rows([[1, 1]])) == [(Fraction(-1), Fraction(1))]

    def test_rref_pivots(self):
        reduced, pivots = rref(ZMat.from_rows([[0, 2, 4], [0, 1, 3]]))
        assert pivots == (1, 2)
        assert reduced.row(0) == (0, 1, 0)
        assert reduced.row(1) == (0, 0, 1)

    def test_in_row_space(self):
        m = QMat.from_rows([[1, 0, 1], [0, 1, 1]])
        assert in_row_space(m, (2, 3, 5))
        assert not in_row_space(m, (0, 0, 1))
        assert in_row_space(m, (0, 0, 0))

    def test_in_row_space_length_mismatch(self):
        with pytest.raises(ExactAlgebraError):
            in_row_space(QMat.from_rows([[1, 0]]), (1, 0, 0))

    def test_solve_unique(self):
        m = QMat.from_rows([[1, 1], [1, -1]])
        assert solve_unique(m, (3, 1)) == (Fraction(2), Fraction(1))

    def test_solve_unique_underdetermined(self):
        with pytest.raises(ExactAlgebraError, match="underdetermined"):
            solve_unique(QMat.from_rows([[1, 1]]), (1,))

    def test_solve_unique_inconsistent(self):
        with pytest.raises(ExactAlgebraError, match="inconsistent"):
            solve_unique(QMat.from_rows([[1], [1]]), (1, 2))

    def test_ragged_rows_rejected(self):
        with pytest.raises(ExactAlgebraError, match="ragged"):
            ZMat.from_rows([[1, 2], [3]])

    def test_integer_matrix_rejects_fractions(self):
        with pytest.raises(ExactAlgebraError, match="non-integral"):
            ZMat.from_rows([[Fraction(1, 2)]])


class TestNormalForms:
    """Tests for Hermite and Smith normal forms."""

    def test_hnf_worked_example(self):
        """[[2,4],[1,3]] reduces to [[1,1],[0,2]]."""
        h, u = hnf(ZMat.from_rows([[2, 4], [1, 3]]))
        assert h.rows() == [(1, 1), (0, 2)]
        assert u.matmul(ZMat.from_rows([[2, 4], [1, 3]])) == h

    def test_hnf_of_identity(self):
        identity = ZMat.identity(3)
        h, u = hnf(identity)
        assert h == identity
        assert u == identity

    def test_snf_example(self):
        """[[1,0],[1,2]] has invariant factors 1 and 2."""
        assert invariant_factors(ZMat.from_rows([[1, 0], [1, 2]])) == (1, 2)

    def test_snf_of_zero_matrix(self):
        s, u, v = snf(ZMat.zeros(2, 3))
        assert s == ZMat.zeros(2, 3)
        assert u == ZMat.identity(2)
        assert v == ZMat.identity(3)
        assert invariant_factors(ZMat.zeros(1, 1)) == ()

    def test_unimodular_inverse(self):
        u = ZMat.from_rows([[2, 1], [1, 1]])
        assert u.matmul(unimodular_inverse(u)) == ZMat.identity(2)

    def test_unimodular_inverse_rejects_determinant_two(self):
        with pytest.raises(ExactAlgebraError, match="not unimodular"):
            unimodular_inverse(ZMat.from_rows([[2, 0], [0, 1]]))

    def test_unimodular_inverse_rejects_singular(self):
        with pytest.raises(ExactAlgebraError, match="singular"):
            unimodular_inverse(ZMat.from_rows([[1, 2], [2, 4]]))


class TestRandomizedLaws:
    """Algebraic laws checked on seeded random integer matrices up to 6x6."""

    def test_rank_and_kernel(self, rng):
        """Rank is transpose invariant and rank + nullity is the column count."""
        for _ in range(200):
            m = random_matrix(rng)
            r = rank_q(m)
            assert r == rank_q(m.transpose())
            kernel = kernel_basis(m)
            assert r + len(kernel) == m.ncols
            for v in kernel:
                assert all(x == 0 for x in m.to_qmat().apply(v))

    def test_hnf_laws(self, rng):
        """u @ m == h, u is unimodular, pivots are positive and entries above them reduced."""
        for _ in range(200):
            m = random_matrix(rng)
            h, u = hnf(m)
            assert u.matmul(m) == h
            assert is_unimodular(u)
            last_pivot = -1
            for i, row in enumerate(h.rows()):
                nonzero = [j for j, x in enumerate(row) if x != 0]
                if not nonzero:
                    assert all(not any(later) for later in h.rows()[i:])
                    break
                col = nonzero[0]
                assert col > last_pivot
                last_pivot = col
                pivot = row[col]
                assert pivot > 0
                for above in range(i):
                    assert 0 <= h[above, col] < pivot

    def test_snf_laws(self, rng):
        """u @ m @ v == s with a nonnegative diagonal where each entry divides the next."""
        for _ in range(200):
            m = random_matrix(rng)
            s, u, v = snf(m)
            assert u.matmul(m).matmul(v) == s
            assert is_unimodular(u)
            assert is_unimodular(v)
            for i in range(s.nrows):
                for j in range(s.ncols):
                    if i != j:
                        assert s[i, j] == 0
            diagonal = [s[i, i] for i in range(min(s.nrows, s.ncols))]
            assert all(d >= 0 for d in diagonal)
            nonzero = [d for d in diagonal if d]
            assert len(nonzero) == rank_q(m)
            assert diagonal[: len(nonzero)] == nonzero
            for a, b in zip(nonzero, nonzero[1:]):
                assert b % a == 0

    def test_invariant_factors_against_minors(self, rng):
        """The product of the invariant factors is the gcd of the maximal nonzero minors."""
        for _ in range(60):
            m = random_matrix(rng, max_size=4)
            r = rank_q(m)
            if r == 0:
                continue
            minors = [
                determinant([[m[i, j] for j in cols] for i in rows])
                for rows in combinations(range(m.nrows), r)
                for cols in combinations(range(m.ncols), r)
            ]
            assert math.prod(invariant_factors(m)) == math.gcd(*minors)

    def test_rank_under_unimodular_change(self, rng, random_unimodular):
        for _ in range(100):
            m = random_matrix(rng)
            left = random_unimodular(m.nrows)
            right = random_unimodular(m.ncols)
            assert rank_q(left.matmul(m).matmul(right)) == rank_q(m)

    def test_saturation_is_idempotent(self, rng):
        for _ in range(100):
            m = random_matrix(rng, max_size=4)
            saturated = saturation(m)
            assert saturation(saturated) == saturated
            assert saturated.nrows == rank_q(m)
            for row in m.rows():
                assert in_row_space(saturated, row)

    def test_quotient_projection_kills_sublattice(self, rng):
        for _ in range(100):
            n = rng.randint(1, 5)
            vectors = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(rng.randint(0, n))]
            lattice = lattice_of_span(n, vectors)
            for v in vectors:
                assert all(x == 0 for x in lattice.project(v))
            assert lattice.quotient_rank == n - lattice.sub_basis.nrows
            if lattice.quotient_rank:
                assert invariant_factors(lattice.projection) == (1,) * lattice.quotient_rank


class TestIntegerVectors:
    """Tests for primitive vectors and denominators."""

    def test_primitive(self):
        assert primitive((2, 4)) == (1, 2)
        assert primitive((-3, 6, -9)) == (-1, 2, -3)

    def test_primitive_of_zero_vector(self):
        with pytest.raises(ExactAlgebraError, match="no primitive representative"):
            primitive((0, 0))

    def test_clear_denominators(self):
        assert clear_denominators((Fraction(1, 2), Fraction(1, 3))) == (3, 2)

    def test_primitive_direction(self):
        assert primitive_direction((Fraction(2, 3), Fraction(4, 3))) == (1, 2)


class TestLattices:
    """Tests for saturations and quotient lattices."""

    def test_saturation_of_scaled_vector(self):
        assert saturation(ZMat.from_rows([[2, 0]])).rows() == [(1, 0)]

    def test_saturation_of_finite_index_sublattice(self):
        assert saturation(ZMat.from_rows([[1, 1], [1, -1]])) == ZMat.identity(2)

    def test_saturation_of_nothing(self):
        assert saturation(ZMat.zeros(0, 2)).nrows == 0

    def test_quotient_by_axis(self):
        lattice = quotient_lattice(2, ZMat.from_rows([[1, 0]]))
        assert lattice.quotient_rank == 1
        assert lattice.projection.rows() == [(0, 1)]
        assert lattice.project_int((3, 5)) == (5,)
        assert lattice.dual_basis == lattice.projection
        assert lattice.contains((7, 0))
        assert not lattice.contains((0, 1))

    def test_quotient_by_diagonal(self):
        lattice = quotient_lattice(3, ZMat.from_rows([[1, 1, 1]]))
        assert lattice.quotient_rank == 2
        assert lattice.project_int((1, 1, 1)) == (0, 0)
        assert invariant_factors(lattice.projection) == (1, 1)

    def test_quotient_by_nothing(self):
        lattice = quotient_lattice(2, ZMat.zeros(0, 2))
        assert lattice.quotient_rank == 2
        assert lattice.projection == ZMat.identity(2)

    def test_quotient_rejects_dependent_rows(self):
        with pytest.raises(ExactAlgebraError, match="dependent"):
            quotient_lattice(2, ZMat.from_rows([[1, 0], [2, 0]]))

    def test_quotient_rejects_wrong_rank(self):
        with pytest.raises(ExactAlgebraError):
            quotient_lattice(3, ZMat.from_rows([[1, 0]]))

    def test_lattice_of_rational_span(self):
        lattice = lattice_of_span(2, [(Fraction(1, 2), Fraction(1, 2))])
        assert lattice.quotient_rank == 1
        assert lattice.project_int((1, 1)) == (0,)
