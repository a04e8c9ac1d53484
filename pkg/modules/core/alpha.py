"""
Deformation parameters (alpha systems) and their balance equations.

In 3D an alpha is attached to every tetrahedron, in 4D to every 4-simplex.
The balance over a codimension-two face F (an edge in 3D, a 2-face in 4D)
is the sum of zeta_ij * alpha over the oriented link (i, j) of F. A system
is consistent for a move when the left- and right-hand sums agree for every
F occurring on either side, and consistent on a manifold when the sum
vanishes for every inner F.
"""

import logging
import random
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from modules.core.errors import InconsistentAlphaError
from modules.core.linalg import Matrix, nullspace, solve
from modules.core.scalars import Scalar, ScalarLike, ZetaAssignment, random_scalar, to_scalar
from modules.core.triangulation import Cell, CellId, Face, Triangulation, oriented_link, simplex_name

logger = logging.getLogger('pachnercalc.alpha')

AlphaKey = Union[CellId, Sequence[int]]


def _normalize_key(key: Any) -> CellId:
    if isinstance(key, (tuple, list, set, frozenset)):
        return simplex_name(sorted(int(v) for v in key))
    return key


class AlphaSystem:
    """
    Scalar alphas keyed by cell id.

    A vertex tuple in any order is accepted as a key and stands for the id
    simplex_name(sorted tuple), which is how the move clusters name their
    cells. Cells without an entry take `default` when one is set.
    """

    dimension: Optional[int] = None

    def __init__(self, values: Optional[Mapping[AlphaKey, ScalarLike]] = None,
                 default: Optional[ScalarLike] = None):
        self._values: Dict[CellId, Scalar] = {}
        for key, value in (values or {}).items():
            if self.dimension is not None and isinstance(key, (tuple, list, set, frozenset)) \
                    and len(key) != self.dimension + 1:
                raise ValueError(f"{type(self).__name__} keys have {self.dimension + 1} vertices, got {key}")
            self._values[_normalize_key(key)] = to_scalar(value)
        self.default = None if default is None else to_scalar(default)

    @classmethod
    def constant(cls, value: ScalarLike) -> 'AlphaSystem':
        """The same alpha on every cell."""
        return cls(default=value)

    @classmethod
    def zero(cls) -> 'AlphaSystem':
        return cls.constant(0)

    def __getitem__(self, key: AlphaKey) -> Scalar:
        normalized = _normalize_key(key)
        if normalized in self._values:
            return self._values[normalized]
        if self.default is not None:
            return self.default
        raise InconsistentAlphaError(f"No alpha value for {key!r}")

    def value(self, cell: Cell) -> Scalar:
        """Alpha of a cell: by id, then by vertex name, then the default."""
        for key in (cell.id, cell.name):
            if key in self._values:
                return self._values[key]
        if self.default is not None:
            return self.default
        raise InconsistentAlphaError(f"No alpha value for cell {cell.id!r}")

    def __contains__(self, key: object) -> bool:
        return _normalize_key(key) in self._values

    def __iter__(self) -> Iterator[CellId]:
        return iter(self._values)

    def __len__(self) -> int:
        return len(self._values)

    def items(self):
        return self._values.items()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, AlphaSystem):
            return self._values == other._values and self.default == other.default
        return NotImplemented

    __hash__ = None

    def __repr__(self) -> str:
        shown = ', '.join(f"{k}: {v}" for k, v in self._values.items())
        suffix = f", default={self.default}" if self.default is not None else ''
        return f"{type(self).__name__}({{{shown}}}{suffix})"

    def updated(self, values: Mapping[AlphaKey, ScalarLike]) -> 'AlphaSystem':
        merged: Dict[AlphaKey, ScalarLike] = dict(self._values)
        for key, value in values.items():
            merged[_normalize_key(key)] = value
        return type(self)(merged, self.default)

    def perturbed(self, key: AlphaKey, delta: ScalarLike = 1) -> 'AlphaSystem':
        """Copy with one alpha shifted by delta (negative controls)."""
        return self.updated({key: self[key] + to_scalar(delta)})

    def combined(self, other: 'AlphaSystem', weight: ScalarLike) -> 'AlphaSystem':
        """self + weight * other on the union of explicit keys (defaults combine likewise)."""
        weight = to_scalar(weight)
        keys = list(self._values) + [k for k in other._values if k not in self._values]
        values = {k: self[k] + weight * other[k] for k in keys}
        default = None
        if self.default is not None and other.default is not None:
            default = self.default + weight * other.default
        return type(self)(values, default)

    def to_dict(self) -> Dict[str, str]:
        data = {str(k): str(v) for k, v in self._values.items()}
        if self.default is not None:
            data['*'] = str(self.default)
        return data


class AlphaSystem3(AlphaSystem):
    """Alphas on tetrahedra."""

    dimension = 3


class AlphaSystem4(AlphaSystem):
    """Alphas on 4-simplices, symmetric in the five vertices."""

    dimension = 4


def alpha_class(dimension: int) -> type:
    return AlphaSystem3 if dimension == 3 else AlphaSystem4


def link_terms(t: Triangulation, face: Union[Face, Sequence[int]], z: ZetaAssignment) -> List[Tuple[CellId, Scalar]]:
    """(cell id, zeta_ij) for every oriented link edge (i, j) of a codimension-two face."""
    return [(cell_id, z.diff(i, j)) for cell_id, (i, j) in oriented_link(t, face)]


def link_sum(t: Triangulation, face: Union[Face, Sequence[int]], z: ZetaAssignment, alpha: AlphaSystem) -> Scalar:
    """Sum of zeta_ij * alpha over the oriented link of a codimension-two face."""
    return sum((zeta * alpha.value(t.cell(cell_id)) for cell_id, zeta in link_terms(t, face, z)), Fraction(0))


def codim2_label_sets(*sides: Triangulation) -> List[Tuple[int, ...]]:
    """Vertex tuples of all codimension-two faces occurring on any side, sorted."""
    labels = set()
    for t in sides:
        labels.update(face.vertices for face in t.faces(t.dimension - 2))
    return sorted(labels)


def move_residuals(lhs: Triangulation, rhs: Triangulation, z: ZetaAssignment,
                   alpha: AlphaSystem) -> Dict[Tuple[int, ...], Scalar]:
    """Nonzero (left sum - right sum) per codimension-two label set of a move."""
    residuals = {}
    for labels in codim2_label_sets(lhs, rhs):
        value = link_sum(lhs, labels, z, alpha) - link_sum(rhs, labels, z, alpha)
        if value:
            residuals[labels] = value
    return residuals


def manifold_residuals(t: Triangulation, z: ZetaAssignment, alpha: AlphaSystem) -> Dict[str, Scalar]:
    """Nonzero link sums over the inner codimension-two faces of a complex."""
    residuals = {}
    for face in t.inner_faces(t.dimension - 2):
        value = link_sum(t, face, z, alpha)
        if value:
            residuals[face.name] = value
    return residuals


def check_alpha_move(lhs: Triangulation, rhs: Triangulation, z: ZetaAssignment, alpha: AlphaSystem) -> None:
    """
    Raises:
        InconsistentAlphaError: If a balance equation of the move fails
    """
    residuals = move_residuals(lhs, rhs, z, alpha)
    if residuals:
        names = ', '.join(simplex_name(k) for k in list(residuals)[:5])
        raise InconsistentAlphaError(f"Alpha system is not consistent for the move (faces {names})", residuals)


def check_alpha_manifold(t: Triangulation, z: ZetaAssignment, alpha: AlphaSystem) -> None:
    """
    Raises:
        InconsistentAlphaError: If the link sum of an inner codimension-two face is nonzero
    """
    residuals = manifold_residuals(t, z, alpha)
    if residuals:
        raise InconsistentAlphaError(
            f"Alpha system is not consistent on the complex (faces {', '.join(list(residuals)[:5])})", residuals)


def _unknowns(*sides: Triangulation) -> List[CellId]:
    unknowns: List[CellId] = []
    for t in sides:
        unknowns.extend(c for c in t.cell_ids() if c not in unknowns)
    return unknowns


def move_balance_matrix(lhs: Triangulation, rhs: Triangulation, z: ZetaAssignment) -> Matrix:
    """
    Coefficient matrix of the move balance equations.

    Rows are codimension-two label sets, columns the cells of both sides
    (left cells first); left link terms enter with +zeta_ij, right ones
    with -zeta_ij.
    """
    unknowns = _unknowns(lhs, rhs)
    rows_labels = codim2_label_sets(lhs, rhs)
    column = {c: k for k, c in enumerate(unknowns)}
    rows = []
    for labels in rows_labels:
        row = [Fraction(0)] * len(unknowns)
        for sign, side in ((1, lhs), (-1, rhs)):
            for cell_id, zeta in link_terms(side, labels, z):
                row[column[cell_id]] += sign * zeta
        rows.append(row)
    return Matrix(rows, rows_labels, unknowns, n_cols=len(unknowns))


def manifold_balance_matrix(t: Triangulation, z: ZetaAssignment) -> Matrix:
    """Rows: inner codimension-two faces; columns: cells."""
    unknowns = t.cell_ids()
    column = {c: k for k, c in enumerate(unknowns)}
    faces = t.inner_faces(t.dimension - 2)
    rows = []
    for face in faces:
        row = [Fraction(0)] * len(unknowns)
        for cell_id, zeta in link_terms(t, face, z):
            row[column[cell_id]] += zeta
        rows.append(row)
    return Matrix(rows, [f.name for f in faces], unknowns, n_cols=len(unknowns))


def _basis_systems(m: Matrix, dimension: int) -> List[AlphaSystem]:
    cls = alpha_class(dimension)
    return [cls(dict(zip(m.col_labels, vector))) for vector in nullspace(m)]


def alpha_basis(lhs: Triangulation, rhs: Triangulation, z: ZetaAssignment) -> List[AlphaSystem]:
    """Exact basis of the alpha systems consistent for a move."""
    return _basis_systems(move_balance_matrix(lhs, rhs, z), lhs.dimension)


def manifold_alpha_basis(t: Triangulation, z: ZetaAssignment) -> List[AlphaSystem]:
    """Exact basis of the alpha systems consistent on a complex."""
    return _basis_systems(manifold_balance_matrix(t, z), t.dimension)


def _random_combination(basis: List[AlphaSystem], unknowns: List[CellId], dimension: int,
                        rng: random.Random, numerator_bound: int, denominator_bound: int) -> AlphaSystem:
    result = alpha_class(dimension)({k: 0 for k in unknowns})
    for system in basis:
        result = result.combined(system, random_scalar(rng, numerator_bound, denominator_bound))
    return result


def random_consistent_alpha(lhs: Triangulation, rhs: Triangulation, z: ZetaAssignment,
                            rng: Union[random.Random, int], numerator_bound: int = 50,
                            denominator_bound: int = 7) -> AlphaSystem:
    """
    Random rational combination of the consistent-system basis of a move.

    Args:
        lhs, rhs: The two sides of the move, oriented alike
        z: Zeta assignment
        rng: Random generator or seed
    """
    rng = rng if isinstance(rng, random.Random) else random.Random(rng)
    basis = alpha_basis(lhs, rhs, z)
    logger.debug(f"Consistent alpha space of dimension {len(basis)} for {len(lhs)}->{len(rhs)} cells")
    return _random_combination(basis, _unknowns(lhs, rhs), lhs.dimension, rng, numerator_bound, denominator_bound)


def random_manifold_alpha(t: Triangulation, z: ZetaAssignment, rng: Union[random.Random, int],
                          numerator_bound: int = 50, denominator_bound: int = 7) -> AlphaSystem:
    rng = rng if isinstance(rng, random.Random) else random.Random(rng)
    return _random_combination(manifold_alpha_basis(t, z), t.cell_ids(), t.dimension, rng,
                               numerator_bound, denominator_bound)


def transport_alpha(lhs: Triangulation, rhs: Triangulation, z: ZetaAssignment, alpha: AlphaSystem) -> AlphaSystem:
    """
    Alphas on the right-hand cells that balance the given left-hand alphas.

    When the right-hand side is underdetermined the free alphas are set to
    zero; the result always satisfies every balance equation of the move.

    Raises:
        InconsistentAlphaError: If no right-hand alphas balance the left-hand ones
    """
    m = move_balance_matrix(lhs, rhs, z)
    left = [c for c in lhs.cell_ids()]
    right = [c for c in rhs.cell_ids() if c not in left]
    known = [alpha.value(lhs.cell(c)) for c in left]
    right_matrix = m.select(m.row_labels, right)
    left_matrix = m.select(m.row_labels, left)
    # left part + right part = 0  =>  right part = -left part
    target = [-sum((v * a for v, a in zip(row, known)), Fraction(0)) for row in left_matrix.rows()]
    solution = solve(right_matrix, target)
    if solution is None:
        raise InconsistentAlphaError("Left-hand alphas admit no balancing right-hand alphas")
    logger.debug(f"Transported alphas from {left} to {right}")
    values = {c: alpha.value(lhs.cell(c)) for c in left}
    values.update(dict(zip(right, solution)))
    return alpha_class(lhs.dimension)(values)
