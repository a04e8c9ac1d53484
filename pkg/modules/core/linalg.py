"""
Dense exact linear algebra over the rationals.

Matrices carry row and column labels naming the basis coordinate each line
represents (a 2-face coordinate, a tetrahedron coordinate, ...), so minors can
be selected by label. Determinants use fraction-free Bareiss elimination on
integer-scaled rows; Pfaffians use skew-symmetric elimination.
"""

import logging
from fractions import Fraction
from math import lcm
from typing import Any, Hashable, List, Optional, Sequence, Tuple

from modules.core.errors import DimensionMismatchError, NotSkewSymmetricError
from modules.core.scalars import Scalar, ScalarLike, to_scalar

logger = logging.getLogger('pachnercalc.linalg')


class Matrix:
    """
    Dense matrix of Fractions with basis labels.

    Matrices are treated as immutable; the builders in chain3d/chain4d fill a
    list of rows and wrap it once.
    """

    __slots__ = ('_rows', 'n_rows', 'n_cols', 'row_labels', 'col_labels', '_row_index', '_col_index')

    def __init__(self, rows: Sequence[Sequence[ScalarLike]],
                 row_labels: Optional[Sequence[Hashable]] = None,
                 col_labels: Optional[Sequence[Hashable]] = None,
                 n_cols: Optional[int] = None):
        self._rows: List[List[Fraction]] = [[to_scalar(v) for v in row] for row in rows]
        self.n_rows = len(self._rows)
        if n_cols is None:
            n_cols = len(self._rows[0]) if self._rows else len(col_labels or ())
        self.n_cols = n_cols
        for row in self._rows:
            if len(row) != n_cols:
                raise DimensionMismatchError("Ragged matrix rows")
        self.row_labels: Tuple[Hashable, ...] = tuple(row_labels) if row_labels is not None else tuple(range(self.n_rows))
        self.col_labels: Tuple[Hashable, ...] = tuple(col_labels) if col_labels is not None else tuple(range(self.n_cols))
        if len(self.row_labels) != self.n_rows or len(self.col_labels) != self.n_cols:
            raise DimensionMismatchError(
                f"Label counts ({len(self.row_labels)}, {len(self.col_labels)}) "
                f"do not match shape {self.shape}")
        self._row_index = {label: i for i, label in enumerate(self.row_labels)}
        self._col_index = {label: j for j, label in enumerate(self.col_labels)}

    @classmethod
    def zeros(cls, row_labels: Sequence[Hashable], col_labels: Sequence[Hashable]) -> 'Matrix':
        return cls([[0] * len(col_labels) for _ in row_labels], row_labels, col_labels, n_cols=len(col_labels))

    @classmethod
    def identity(cls, n: int) -> 'Matrix':
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], n_cols=n)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.n_rows, self.n_cols

    def __getitem__(self, position: Tuple[int, int]) -> Fraction:
        i, j = position
        return self._rows[i][j]

    def rows(self) -> List[List[Fraction]]:
        """Copy of the entries."""
        return [list(row) for row in self._rows]

    def row_index(self, label: Hashable) -> int:
        return self._row_index[label]

    def col_index(self, label: Hashable) -> int:
        return self._col_index[label]

    def entry(self, row_label: Hashable, col_label: Hashable) -> Fraction:
        return self._rows[self._row_index[row_label]][self._col_index[col_label]]

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Matrix):
            return self._rows == other._rows and self.shape == other.shape
        return NotImplemented

    __hash__ = None

    def __repr__(self) -> str:
        return f"Matrix({self.n_rows}x{self.n_cols})"

    def __matmul__(self, other: 'Matrix') -> 'Matrix':
        if self.n_cols != other.n_rows:
            raise DimensionMismatchError(f"Cannot multiply {self.shape} by {other.shape}")
        columns = list(zip(*other._rows)) if other.n_rows else [()] * other.n_cols
        product = []
        for row in self._rows:
            nonzero = [(k, v) for k, v in enumerate(row) if v]
            product.append([sum((v * column[k] for k, v in nonzero), Fraction(0)) for column in columns])
        return Matrix(product, self.row_labels, other.col_labels, n_cols=other.n_cols)

    def transpose(self) -> 'Matrix':
        return Matrix([list(column) for column in zip(*self._rows)] if self.n_rows else [[] for _ in range(self.n_cols)],
                      self.col_labels, self.row_labels, n_cols=self.n_rows)

    def is_zero(self) -> bool:
        return all(not v for row in self._rows for v in row)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> 'Matrix':
        return Matrix([[self._rows[i][j] for j in cols] for i in rows],
                      [self.row_labels[i] for i in rows], [self.col_labels[j] for j in cols], n_cols=len(cols))

    def select(self, row_labels: Sequence[Hashable], col_labels: Sequence[Hashable]) -> 'Matrix':
        """Submatrix by labels, in the order given."""
        return self.submatrix([self._row_index[r] for r in row_labels], [self._col_index[c] for c in col_labels])

    def scaled(self, row_factors: Optional[Sequence[ScalarLike]] = None,
               col_factors: Optional[Sequence[ScalarLike]] = None) -> 'Matrix':
        """Multiply row i by row_factors[i] and column j by col_factors[j]."""
        rf = [to_scalar(f) for f in row_factors] if row_factors is not None else [Fraction(1)] * self.n_rows
        cf = [to_scalar(f) for f in col_factors] if col_factors is not None else [Fraction(1)] * self.n_cols
        return Matrix([[v * rf[i] * cf[j] for j, v in enumerate(row)] for i, row in enumerate(self._rows)],
                      self.row_labels, self.col_labels, n_cols=self.n_cols)

    def to_strings(self) -> List[List[str]]:
        return [[str(v) for v in row] for row in self._rows]


class SkewMatrix(Matrix):
    """Antisymmetric matrix with zero diagonal."""

    __slots__ = ()

    def __init__(self, rows: Sequence[Sequence[ScalarLike]], labels: Optional[Sequence[Hashable]] = None):
        super().__init__(rows, labels, labels, n_cols=len(rows))
        for i in range(self.n_rows):
            for j in range(i, self.n_cols):
                if self._rows[i][j] != -self._rows[j][i]:
                    raise NotSkewSymmetricError(f"Entries ({i},{j}) and ({j},{i}) are not opposite")

    @classmethod
    def from_upper(cls, labels: Sequence[Hashable], entries: dict) -> 'SkewMatrix':
        """
        Build from {(label_i, label_j): value} with i before j in `labels`.

        Entries for the same pair accumulate.
        """
        index = {label: k for k, label in enumerate(labels)}
        n = len(labels)
        rows = [[Fraction(0)] * n for _ in range(n)]
        for (left, right), value in entries.items():
            i, j = index[left], index[right]
            if i == j:
                raise NotSkewSymmetricError(f"Diagonal entry for {left!r}")
            value = to_scalar(value)
            if i > j:
                i, j, value = j, i, -value
            rows[i][j] += value
            rows[j][i] -= value
        return cls(rows, labels)


def _integer_rows(m: Matrix) -> Tuple[List[List[int]], int]:
    """Scale every row to integers; return the rows and the product of the scale factors."""
    rows = []
    scale = 1
    for row in m.rows():
        factor = lcm(*(v.denominator for v in row)) if row else 1
        rows.append([int(v * factor) for v in row])
        scale *= factor
    return rows, scale


def _bareiss_determinant(a: List[List[int]]) -> int:
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    previous = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, n):
            row_i = a[i]
            factor = row_i[k]
            row_k = a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - factor * row_k[j]) // previous
        previous = pivot
    return sign * a[n - 1][n - 1]


def det(m: Matrix) -> Scalar:
    """
    Determinant by fraction-free Bareiss elimination.

    Args:
        m: Square matrix

    Returns:
        Fraction: Exact determinant (1 for a 0x0 matrix)
    """
    if m.n_rows != m.n_cols:
        raise DimensionMismatchError(f"Determinant of a non-square {m.shape} matrix")
    rows, scale = _integer_rows(m)
    return Fraction(_bareiss_determinant(rows), scale)


def minor(m: Matrix, rows: Sequence[Any], cols: Sequence[Any], by_label: bool = False) -> Scalar:
    """Determinant of the submatrix on the given rows and columns (indices, or labels)."""
    if len(rows) != len(cols):
        raise DimensionMismatchError(f"Minor needs equally many rows and columns ({len(rows)} vs {len(cols)})")
    sub = m.select(rows, cols) if by_label else m.submatrix(rows, cols)
    return det(sub)


def row_reduce(m: Matrix) -> Tuple[List[List[Fraction]], List[int]]:
    """Reduced row echelon form and pivot columns."""
    a = m.rows()
    pivots: List[int] = []
    r = 0
    for c in range(m.n_cols):
        pivot = next((i for i in range(r, m.n_rows) if a[i][c]), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inverse = 1 / a[r][c]
        a[r] = [v * inverse for v in a[r]]
        for i in range(m.n_rows):
            if i != r and a[i][c]:
                factor = a[i][c]
                a[i] = [v - factor * w for v, w in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m.n_rows:
            break
    return a, pivots


def rank(m: Matrix) -> int:
    """Rank over the rationals."""
    return len(row_reduce(m)[1])


def independent_columns(m: Matrix) -> List[int]:
    """First maximal set of linearly independent columns, in column order."""
    return row_reduce(m)[1]


def independent_rows(m: Matrix) -> List[int]:
    """First maximal set of linearly independent rows, in row order."""
    return row_reduce(m.transpose())[1]


def nullspace(m: Matrix) -> List[List[Fraction]]:
    """Basis of {x : m x = 0}, one vector per free column."""
    reduced, pivots = row_reduce(m)
    free = [c for c in range(m.n_cols) if c not in pivots]
    basis = []
    for f in free:
        vector = [Fraction(0)] * m.n_cols
        vector[f] = Fraction(1)
        for r, p in enumerate(pivots):
            vector[p] = -reduced[r][f]
        basis.append(vector)
    return basis


def pfaffian(m: Matrix) -> Scalar:
    """
    Pfaffian of an antisymmetric matrix by skew-symmetric elimination.

    Pf([[0, a], [-a, 0]]) = a with variables ordered as the rows. Odd size
    gives 0.

    Raises:
        NotSkewSymmetricError: If m is not antisymmetric
    """
    if m.n_rows != m.n_cols:
        raise DimensionMismatchError(f"Pfaffian of a non-square {m.shape} matrix")
    a = m.rows()
    n = len(a)
    for i in range(n):
        if a[i][i]:
            raise NotSkewSymmetricError(f"Nonzero diagonal entry at {i}")
        for j in range(i + 1, n):
            if a[i][j] != -a[j][i]:
                raise NotSkewSymmetricError(f"Entries ({i},{j}) and ({j},{i}) are not opposite")
    if n % 2:
        return Fraction(0)

    result = Fraction(1)
    for k in range(0, n - 1, 2):
        pivot_column = next((j for j in range(k + 1, n) if a[k][j]), None)
        if pivot_column is None:
            return Fraction(0)
        if pivot_column != k + 1:
            # simultaneous swap of rows and columns k+1 <-> pivot_column
            a[k + 1], a[pivot_column] = a[pivot_column], a[k + 1]
            for row in a:
                row[k + 1], row[pivot_column] = row[pivot_column], row[k + 1]
            result = -result
        pivot = a[k][k + 1]
        result *= pivot
        u = a[k]
        v = a[k + 1]
        for i in range(k + 2, n):
            if not (u[i] or v[i]):
                continue
            row = a[i]
            for j in range(k + 2, n):
                if u[j] or v[j]:
                    row[j] += (v[i] * u[j] - u[i] * v[j]) / pivot
    logger.debug(f"Pfaffian of a {n}x{n} skew matrix computed")
    return result


def solve(m: Matrix, rhs: Sequence[ScalarLike]) -> Optional[List[Fraction]]:
    """
    One solution of m x = rhs, free variables set to zero.

    Returns:
        list or None: The solution, or None if the system is inconsistent
    """
    if len(rhs) != m.n_rows:
        raise DimensionMismatchError(f"Right-hand side has {len(rhs)} entries, matrix has {m.n_rows} rows")
    augmented = Matrix([list(row) + [to_scalar(b)] for row, b in zip(m.rows(), rhs)], n_cols=m.n_cols + 1)
    reduced, pivots = row_reduce(augmented)
    if m.n_cols in pivots:
        return None
    solution = [Fraction(0)] * m.n_cols
    for r, p in enumerate(pivots):
        solution[p] = reduced[r][m.n_cols]
    return solution
