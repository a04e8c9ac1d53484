from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from modules.core.errors import DimensionMismatchError, NotSkewSymmetricError
from modules.core.linalg import Matrix, SkewMatrix, det, independent_columns, independent_rows, minor, nullspace, pfaffian, rank, solve
from modules.core.triangulation import permutation_sign
from tests.strategies import rationals


def square_matrices(n: int) -> st.SearchStrategy[Matrix]:
    return st.lists(st.lists(rationals(9), min_size=n, max_size=n), min_size=n, max_size=n).map(Matrix)


@st.composite
def skew_matrices(draw, n: int) -> SkewMatrix:
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            value = draw(rationals(9))
            rows[i][j], rows[j][i] = value, -value
    return SkewMatrix(rows)


def leibniz_det(m: Matrix) -> Fraction:
    n = m.n_rows
    total = Fraction(0)
    for perm in permutations(range(n)):
        term = Fraction(permutation_sign(perm))
        for i, j in enumerate(perm):
            term *= m[i, j]
        total += term
    return total


def matching_pfaffian(a, indices) -> Fraction:
    """Sum over perfect matchings, expanding along the first index."""
    if not indices:
        return Fraction(1)
    first, rest = indices[0], indices[1:]
    total = Fraction(0)
    for k, partner in enumerate(rest):
        remaining = rest[:k] + rest[k + 1:]
        total += (-1) ** k * a[first][partner] * matching_pfaffian(a, remaining)
    return total


class TestDeterminant:
    @given(m=square_matrices(3))
    def test_matches_leibniz(self, m):
        assert det(m) == leibniz_det(m)

    @given(a=square_matrices(3), b=square_matrices(3))
    def test_multiplicative(self, a, b):
        assert det(a @ b) == det(a) * det(b)

    def test_empty(self):
        assert det(Matrix([], n_cols=0)) == 1

    def test_non_square(self):
        with pytest.raises(DimensionMismatchError):
            det(Matrix([[1, 2]]))

    def test_minor_by_label(self):
        m = Matrix([[1, 2, 3], [4, 5, 6], [7, 8, 10]], ['r1', 'r2', 'r3'], ['c1', 'c2', 'c3'])
        assert minor(m, ['r1', 'r3'], ['c1', 'c3'], by_label=True) == 1 * 10 - 3 * 7
        assert minor(m, [0, 1], [0, 1]) == -3


class TestPfaffian:
    def test_two_by_two(self):
        assert pfaffian(SkewMatrix([[0, 5], [-5, 0]])) == 5

    @given(m=skew_matrices(6))
    def test_matches_matching_sum(self, m):
        assert pfaffian(m) == matching_pfaffian(m.rows(), list(range(6)))

    @given(m=skew_matrices(4))
    def test_square_is_determinant(self, m):
        assert pfaffian(m) ** 2 == det(m)

    @given(m=skew_matrices(5))
    def test_odd_size(self, m):
        assert pfaffian(m) == 0

    def test_needs_pivot_swap(self):
        m = SkewMatrix.from_upper(['p', 'q', 'r', 's'], {('p', 'r'): 2, ('q', 's'): 3})
        assert pfaffian(m) == -6

    def test_rejects_non_skew(self):
        with pytest.raises(NotSkewSymmetricError):
            SkewMatrix([[0, 1], [1, 0]])
        with pytest.raises(NotSkewSymmetricError):
            pfaffian(Matrix([[1, 0], [0, 0]]))

    def test_from_upper_accumulates(self):
        m = SkewMatrix.from_upper(['x', 'y'], {('x', 'y'): 2, ('y', 'x'): 1})
        assert m.entry('x', 'y') == 1
        assert m.entry('y', 'x') == -1


class TestElimination:
    def test_rank_and_independent_sets(self):
        m = Matrix([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
        assert rank(m) == 2
        assert independent_rows(m) == [0, 2]
        assert independent_columns(m) == [0, 1]

    @given(m=st.lists(st.lists(rationals(9), min_size=4, max_size=4), min_size=2, max_size=3).map(Matrix))
    def test_nullspace(self, m):
        basis = nullspace(m)
        assert len(basis) == m.n_cols - rank(m)
        for vector in basis:
            assert all(sum(a * x for a, x in zip(row, vector)) == 0 for row in m.rows())

    @given(m=square_matrices(3), x=st.lists(rationals(9), min_size=3, max_size=3))
    def test_solve_consistent(self, m, x):
        rhs = [sum(a * v for a, v in zip(row, x)) for row in m.rows()]
        solution = solve(m, rhs)
        assert solution is not None
        assert [sum(a * v for a, v in zip(row, solution)) for row in m.rows()] == rhs

    def test_solve_inconsistent(self):
        assert solve(Matrix([[1, 1], [2, 2]]), [1, 3]) is None

    def test_scaled_and_select(self):
        m = Matrix([[1, 2], [3, 4]], ['a', 'b'], ['x', 'y'])
        scaled = m.scaled(row_factors=[2, 1], col_factors=[1, Fraction(1, 2)])
        assert scaled.rows() == [[2, 2], [3, 2]]
        assert m.select(['b'], ['y', 'x']).rows() == [[4, 3]]
