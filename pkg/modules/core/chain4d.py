"""
The short 4D chain complex f3, f4 (no inner vertices), its gauge
transformation, the 4-simplex weights and the 3-3 and 2-4 identities.

Coordinates: one per inner 2-face (at its smallest vertex), two per 3-face
(at its two smallest vertices, Grassmann variables a and b), three per
4-simplex. In the gauged complex the three rows of f4 for a 4-simplex u are
the coefficients of the three linear forms of its weight, and the columns of
f3 are the coefficients of the 2-face operators d_ijk.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from modules.core.alpha import AlphaSystem, AlphaSystem4, check_alpha_move
from modules.core.coordinates import boundary_block
from modules.core.errors import InnerVertexError, TriangulationError
from modules.core.grassmann import (
    FirstOrderOperator,
    GeneratorRegistry,
    GrassmannElement,
    integrate_product,
    invert_operator_on_one,
    normalize_inverse,
    same_up_to_sign,
)
from modules.core.linalg import Matrix
from modules.core.moves import move_cluster
from modules.core.scalars import Scalar, ZetaAssignment
from modules.core.triangulation import Cell, CellId, Face, Triangulation, simplex_name
from modules.core.weights3d import MoveVerification, compare

logger = logging.getLogger('pachnercalc.chain4d')

E_LABEL = 'e'


@dataclass(frozen=True)
class Coordinate:
    """
    A basis coordinate of the 4D complex.

    kind is 'x' (inner 2-face), 'a' / 'b' (first / second coordinate of a
    3-face) or 'z' (one of the three coordinates of a 4-simplex, index 1..3).
    """

    kind: str
    name: str
    vertices: Tuple[int, ...]
    index: int = 0

    def __str__(self) -> str:
        if self.kind == 'z':
            return f"z{self.name}.{self.index}"
        return f"{self.kind}{self.name}"


@dataclass(frozen=True)
class ChainBasis4:
    faces: Tuple[Coordinate, ...]
    tetra: Tuple[Coordinate, ...]
    simplices: Tuple[Coordinate, ...]

    @classmethod
    def of(cls, t: Triangulation, inner_only: bool = False) -> 'ChainBasis4':
        faces = tuple(Coordinate('x', f.name, f.vertices) for f in _sorted(t.inner_faces(2)))
        three_faces = _sorted(t.inner_faces(3) if inner_only else t.faces(3))
        tetra = tuple(Coordinate(kind, f.name, f.vertices) for f in three_faces for kind in 'ab')
        simplices = tuple(Coordinate('z', str(c.id), c.vertices, k)
                          for c in t.cells() for k in (1, 2, 3))
        return cls(faces, tetra, simplices)


def _sorted(faces: Sequence[Face]) -> List[Face]:
    return sorted(faces, key=lambda f: (f.vertices, f.name))


def require_no_inner_vertices(t: Triangulation) -> None:
    if t.dimension != 4:
        raise TriangulationError(f"Expected a 4D triangulation, got {t.dimension}D")
    if t.inner_vertices():
        raise InnerVertexError(f"The short 4D complex needs no inner vertices, found {t.inner_vertices()}")


def _three_face_block(z: ZetaAssignment, vertices: Tuple[int, ...]) -> Dict[int, Dict[int, Scalar]]:
    """free vertex of a 3-face -> {slot of its 2-face: coefficient} (the 2x4 block)."""
    return {v: {slot: value for (slot, _), value in row.items()}
            for v, row in boundary_block(z, vertices).items()}


def build_f3_4d(t: Triangulation, z: ZetaAssignment, inner_only: bool = False) -> Matrix:
    """
    f3: rows are 3-face coordinates, columns inner 2-faces.

    Raises:
        InnerVertexError: If t has inner vertices
    """
    require_no_inner_vertices(t)
    basis = ChainBasis4.of(t, inner_only)
    m = Matrix.zeros(basis.tetra, basis.faces)
    rows = m.rows()
    columns = {c.name: j for j, c in enumerate(basis.faces)}
    row_index = {str(c): i for i, c in enumerate(basis.tetra)}
    for face in _sorted(t.inner_faces(3) if inner_only else t.faces(3)):
        cell_id, subset = face.key
        for v, entries in _three_face_block(z, face.vertices).items():
            kind = 'a' if v == face.vertices[0] else 'b'
            i = row_index[f"{kind}{face.name}"]
            for slot, value in entries.items():
                two_face = t.face_of(cell_id, subset[:slot] + subset[slot + 1:])
                if two_face.name in columns:
                    rows[i][columns[two_face.name]] += value
    return Matrix(rows, basis.tetra, basis.faces, n_cols=len(basis.faces))


def build_f4_4d(t: Triangulation, z: ZetaAssignment, inner_only: bool = False) -> Matrix:
    """
    f4: rows are the three coordinates of every 4-simplex, columns 3-face
    coordinates. With inner_only the columns are restricted to inner 3-faces.

    Raises:
        InnerVertexError: If t has inner vertices
    """
    require_no_inner_vertices(t)
    basis = ChainBasis4.of(t, inner_only)
    m = Matrix.zeros(basis.simplices, basis.tetra)
    rows = m.rows()
    column_index = {str(c): j for j, c in enumerate(basis.tetra)}
    for cell in t.cells():
        block = boundary_block(z, cell.vertices)
        for k, v in enumerate(cell.vertices[:3]):
            i = m.row_index(Coordinate('z', str(cell.id), cell.vertices, k + 1))
            for (slot, free), value in block[v].items():
                face = t.facet_face(cell.id, slot)
                kind = 'a' if free == face.vertices[0] else 'b'
                j = column_index.get(f"{kind}{face.name}")
                if j is not None:
                    rows[i][j] += value
    return Matrix(rows, basis.simplices, basis.tetra, n_cols=len(basis.tetra))


def gauge_transform(f3: Matrix, f4: Matrix, z: ZetaAssignment) -> Tuple[Matrix, Matrix]:
    """
    f~4: every column of 3-face ijkl times zeta_kl.
    f~3: every row of 3-face ijkl divided by zeta_kl, every column of 2-face ijk times zeta_jk.
    """
    tetra_factor = [z.diff(c.vertices[2], c.vertices[3]) for c in f4.col_labels]
    f4_tilde = f4.scaled(col_factors=tetra_factor)
    row_factor = [1 / z.diff(c.vertices[2], c.vertices[3]) for c in f3.row_labels]
    col_factor = [z.diff(c.vertices[1], c.vertices[2]) for c in f3.col_labels]
    f3_tilde = f3.scaled(row_factors=row_factor, col_factors=col_factor)
    return f3_tilde, f4_tilde


@dataclass
class ComplexCheck4:
    f4_f3_zero: bool
    gauged_zero: bool
    shapes: Dict[str, Tuple[int, int]] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.f4_f3_zero and self.gauged_zero


def check_complex_4d(t: Triangulation, z: ZetaAssignment, inner_only: bool = False) -> ComplexCheck4:
    f3, f4 = build_f3_4d(t, z, inner_only), build_f4_4d(t, z, inner_only)
    f3_tilde, f4_tilde = gauge_transform(f3, f4, z)
    result = ComplexCheck4((f4 @ f3).is_zero(), (f4_tilde @ f3_tilde).is_zero(),
                           {'f3': f3.shape, 'f4': f4.shape})
    logger.debug(f"4D complex check: shapes {result.shapes}, f4f3=0 {result.f4_f3_zero}, "
                 f"gauged {result.gauged_zero}")
    return result


def registry_4d(*sides: Triangulation) -> GeneratorRegistry:
    """a, b per 3-face (sorted by vertices, shared faces once), then e."""
    names: Dict[str, Tuple[int, ...]] = {}
    for t in sides:
        for face in t.faces(3):
            names.setdefault(face.name, face.vertices)
    labels = []
    for name in sorted(names, key=lambda n: (names[n], n)):
        labels.extend([f"a{name}", f"b{name}"])
    labels.append(E_LABEL)
    return GeneratorRegistry(labels)


def _facet_names(simplex: Sequence[int], t: Optional[Triangulation], cell_id: Optional[CellId]) -> List[str]:
    if t is not None and cell_id is not None:
        return [t.facet_face(cell_id, slot).name for slot in range(5)]
    return [simplex_name(tuple(simplex[:slot]) + tuple(simplex[slot + 1:])) for slot in range(5)]


def weight_linear_forms(z: ZetaAssignment, simplex: Sequence[int], registry: GeneratorRegistry,
                        face_names: Optional[Sequence[str]] = None) -> List[GrassmannElement]:
    """The three linear forms of the weight: rows of f~4 for the simplex."""
    simplex = tuple(simplex)
    if len(simplex) != 5 or list(simplex) != sorted(set(simplex)):
        raise TriangulationError(f"A 4-simplex needs five ascending vertices, got {simplex}")
    names = list(face_names) if face_names is not None else _facet_names(simplex, None, None)
    block = boundary_block(z, simplex)
    forms = []
    for v in simplex[:3]:
        coefficients: Dict[str, Scalar] = {}
        for (slot, free), value in block[v].items():
            facet = simplex[:slot] + simplex[slot + 1:]
            kind = 'a' if free == facet[0] else 'b'
            label = f"{kind}{names[slot]}"
            coefficients[label] = coefficients.get(label, Fraction(0)) + value * z.diff(facet[2], facet[3])
        forms.append(registry.linear_form(coefficients))
    return forms


def weight_W_4d(z: ZetaAssignment, simplex: Sequence[int], registry: Optional[GeneratorRegistry] = None,
                face_names: Optional[Sequence[str]] = None) -> GrassmannElement:
    """
    Undeformed weight of the 4-simplex (ijklm): the product of the three
    linear forms divided by zeta_lm. For (12345):

        (z34 a1234 - z35 a1235 + z45 a1245 - z45 a1345)
        (z34 b1234 - z35 b1235 + z45 b1245 + z45 a2345)
        (-z14 a1234 - z24 b1234 + z15 a1235 + z25 b1235 - z45 b1345 + z45 b2345) / z45
    """
    simplex = tuple(simplex)
    if registry is None:
        registry = registry_4d(Triangulation.from_cells(4, [Cell(simplex_name(simplex), simplex)]))
    first, second, third = weight_linear_forms(z, simplex, registry, face_names)
    return first * second * third / z.diff(simplex[3], simplex[4])


def deformed_weight_4d(z: ZetaAssignment, simplex: Sequence[int], alpha: Union[AlphaSystem, Scalar],
                       registry: GeneratorRegistry, face_names: Optional[Sequence[str]] = None,
                       cell_id: Optional[CellId] = None) -> GrassmannElement:
    """W~ = W + alpha_{ijklm} e, e the odd generator shared by every simplex."""
    if isinstance(alpha, AlphaSystem):
        key = cell_id if cell_id is not None and cell_id in alpha else tuple(simplex)
        value = alpha[key]
    else:
        value = alpha
    return weight_W_4d(z, simplex, registry, face_names) + registry.generator(E_LABEL, value)


def face_operator_4d(t: Triangulation, z: ZetaAssignment, s: Union[Face, Sequence[int]],
                     registry: Optional[GeneratorRegistry] = None) -> FirstOrderOperator:
    """
    d_ijk: sum over the 3-faces through the 2-face s of the f~3 entries,
    e.g. for s = 134 in the 3-face 1234 the term d/da_1234.
    """
    registry = registry or registry_4d(t)
    if not isinstance(s, Face):
        matches = t.faces_with_vertices(s)
        if len(matches) != 1:
            raise TriangulationError(f"2-face {tuple(s)} is not unique in the complex")
        s = matches[0]
    coefficients: Dict[str, Scalar] = {}
    zeta_jk = z.diff(s.vertices[1], s.vertices[2])
    for face in _sorted(t.faces(3)):
        cell_id, subset = face.key
        for slot in range(4):
            if t.face_of(cell_id, subset[:slot] + subset[slot + 1:]).name != s.name:
                continue
            zeta_kl = z.diff(face.vertices[2], face.vertices[3])
            for v, entries in _three_face_block(z, face.vertices).items():
                if slot in entries:
                    label = f"{'a' if v == face.vertices[0] else 'b'}{face.name}"
                    coefficients[label] = coefficients.get(label, Fraction(0)) + entries[slot] * zeta_jk / zeta_kl
    if not coefficients:
        raise TriangulationError(f"2-face {s.name} lies in no 3-face")
    return FirstOrderOperator(registry, coefficients)


def _weights(t: Triangulation, z: ZetaAssignment, alpha: AlphaSystem, registry: GeneratorRegistry) -> List[GrassmannElement]:
    return [deformed_weight_4d(z, c.vertices, alpha, registry, _facet_names(c.vertices, t, c.id), c.id)
            for c in t.cells()]


def _inner_measure(t: Triangulation, z: ZetaAssignment) -> Tuple[List[str], Scalar]:
    """da db per inner 3-face (sorted) and the product of their zeta_kl."""
    measure: List[str] = []
    divisor = Fraction(1)
    for face in _sorted(t.inner_faces(3)):
        measure.extend([f"a{face.name}", f"b{face.name}"])
        divisor *= z.diff(face.vertices[2], face.vertices[3])
    return measure, divisor


def face_weight(t: Triangulation, z: ZetaAssignment, registry: GeneratorRegistry,
                candidate: Optional[Sequence[str]] = None) -> GrassmannElement:
    """w = (prod over inner 2-faces d_ijk)^-1 1, optionally normalized from a given monomial."""
    operators = [face_operator_4d(t, z, s, registry) for s in _sorted(t.inner_faces(2))]
    if candidate is not None:
        return normalize_inverse(operators, registry.monomial(list(candidate)))
    return invert_operator_on_one(operators, registry)


def _side_integral(t: Triangulation, z: ZetaAssignment, alpha: AlphaSystem, registry: GeneratorRegistry,
                   candidate: Optional[Sequence[str]] = None) -> GrassmannElement:
    measure, divisor = _inner_measure(t, z)
    factors = _weights(t, z, alpha, registry) + [face_weight(t, z, registry, candidate)]
    return integrate_product(factors, measure) / divisor


def identity_sides_33(z: ZetaAssignment, alpha: AlphaSystem,
                      registry: Optional[GeneratorRegistry] = None) -> Tuple[GrassmannElement, GrassmannElement]:
    cluster = move_cluster('3-3')
    registry = registry or registry_4d(cluster.lhs, cluster.rhs)
    return _side_integral(cluster.lhs, z, alpha, registry), _side_integral(cluster.rhs, z, alpha, registry)


def identity_sides_24(z: ZetaAssignment, alpha: AlphaSystem, registry: Optional[GeneratorRegistry] = None,
                      candidate: Optional[Sequence[str]] = None) -> Tuple[GrassmannElement, GrassmannElement]:
    cluster = move_cluster('2-4')
    registry = registry or registry_4d(cluster.lhs, cluster.rhs)
    lhs = _side_integral(cluster.lhs, z, alpha, registry)
    rhs = _side_integral(cluster.rhs, z, alpha, registry, candidate) * (-z.diff(5, 6))
    return lhs, rhs


def verify_move_33(z: ZetaAssignment, alpha: Optional[AlphaSystem] = None,
                   check_alpha: bool = True) -> MoveVerification:
    """
    The 3-3 identity:

        int W~12345 W~12346 W~12356 w123 prod (da db / zeta_kl) over 1234, 1235, 1236
            = int W~12456 W~13456 W~23456 w456 prod (da db / zeta_56) over 1456, 2456, 3456

    Raises:
        InconsistentAlphaError: If check_alpha is set and alpha violates the balance equations
    """
    alpha = alpha or AlphaSystem4.zero()
    cluster = move_cluster('3-3')
    if check_alpha:
        check_alpha_move(cluster.lhs, cluster.rhs, z, alpha)
    lhs, rhs = identity_sides_33(z, alpha)
    return compare('3-3', lhs, rhs, zeta=z.to_text(), alpha=alpha.to_dict())


def verify_move_24(z: ZetaAssignment, alpha: Optional[AlphaSystem] = None, check_alpha: bool = True,
                   candidate: Optional[Sequence[str]] = None) -> MoveVerification:
    """
    The 2-4 identity:

        int W~12345 W~12346 da1234 db1234 / zeta_34
            = -zeta_56 int W~12356 W~12456 W~13456 W~23456 w prod (da db / zeta_56) over the six inner 3-faces

    w solves d156 d256 d356 d456 w = 1; `candidate` (e.g. a1256 b1256 a3456 b3456)
    replaces the default monomial.
    """
    alpha = alpha or AlphaSystem4.zero()
    cluster = move_cluster('2-4')
    if check_alpha:
        check_alpha_move(cluster.lhs, cluster.rhs, z, alpha)
    lhs, rhs = identity_sides_24(z, alpha, candidate=candidate)
    return compare('2-4', lhs, rhs, zeta=z.to_text(), alpha=alpha.to_dict())


def conjectured_invariant_4d(t: Triangulation, z: ZetaAssignment, alpha: Optional[AlphaSystem] = None,
                             registry: Optional[GeneratorRegistry] = None) -> GrassmannElement:
    """
    prod_{inner edges} zeta_ij * int prod_u W~_u * w * prod_{inner 3-faces} da db / zeta_kl

    defined up to overall sign; w = 1 when there are no inner 2-faces.

    Raises:
        InnerVertexError: If t has inner vertices
    """
    require_no_inner_vertices(t)
    alpha = alpha or AlphaSystem4.zero()
    registry = registry or registry_4d(t)
    factor = Fraction(1)
    for edge in t.inner_faces(1):
        factor *= z.diff(*edge.vertices)
    return _side_integral(t, z, alpha, registry) * factor


def conjectured_invariant_agrees(move: str, z: ZetaAssignment, alpha: Optional[AlphaSystem] = None) -> bool:
    """The conjectured invariant on both sides of a 4D move cluster, compared up to sign."""
    cluster = move_cluster(move)
    registry = registry_4d(cluster.lhs, cluster.rhs)
    return same_up_to_sign(conjectured_invariant_4d(cluster.lhs, z, alpha, registry),
                           conjectured_invariant_4d(cluster.rhs, z, alpha, registry))


@dataclass
class AffinityResult:
    lhs_affine: bool
    rhs_affine: bool

    @property
    def passed(self) -> bool:
        return self.lhs_affine and self.rhs_affine


def alpha_affinity_check(move: str, z: ZetaAssignment, alpha0: AlphaSystem, alpha1: AlphaSystem) -> AffinityResult:
    """
    Evaluate both sides of a 4D identity along the line alpha0 + s (alpha1 - alpha0)
    at s = 0, 1, 1/2, 2 and confirm they depend affinely on s.
    """
    if move not in ('3-3', '2-4'):
        raise TriangulationError(f"Affinity check covers 3-3 and 2-4, got {move!r}")
    cluster = move_cluster(move)
    registry = registry_4d(cluster.lhs, cluster.rhs)
    sides: Dict[str, Callable[[AlphaSystem], Tuple[GrassmannElement, GrassmannElement]]] = {
        '3-3': lambda a: identity_sides_33(z, a, registry),
        '2-4': lambda a: identity_sides_24(z, a, registry),
    }
    step = alpha1.combined(alpha0, -1)
    points = {s: sides[move](alpha0.combined(step, s)) for s in (Fraction(0), Fraction(1), Fraction(1, 2), Fraction(2))}
    affine = []
    for k in range(2):
        f0, f1 = points[Fraction(0)][k], points[Fraction(1)][k]
        half, double = points[Fraction(1, 2)][k], points[Fraction(2)][k]
        affine.append(half * 2 == f0 + f1 and double == f1 * 2 - f0)
    return AffinityResult(*affine)


def published_alpha_systems(z: ZetaAssignment) -> Dict[str, AlphaSystem4]:
    """The all-ones system and the zeta-valued system for the 3-3 cluster."""
    return {
        'ones': AlphaSystem4.constant(1),
        'zeta': AlphaSystem4({
            (1, 2, 3, 4, 5): z[6], (1, 2, 3, 4, 6): z[5], (1, 2, 3, 5, 6): z[4],
            (1, 2, 4, 5, 6): z[3], (1, 3, 4, 5, 6): z[2], (2, 3, 4, 5, 6): z[1],
        }),
    }


def published_24_weight() -> Tuple[str, ...]:
    return ('a1256', 'b1256', 'a3456', 'b3456')
