"""
The 3D chain complex f2, f3, f4 of a triangulated manifold with boundary,
its torsions tau_C, the invariants I_C^(0) and the generating functions T, F.

Bases (leading-vertex convention):
    vertices  inner vertices, ascending
    faces     one coordinate per 2-face, inner faces first, labelled like the
              Grassmann generators ('a123')
    tetra     two coordinates per tetrahedron at its two smallest vertices,
              labelled 'b<id>.1', 'b<id>.2'
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from modules.core.coordinates import face_label, face_vertex_coefficients, tetra_labels, vertex_cell_coefficients
from modules.core.errors import SubsetError
from modules.core.grassmann import GeneratorRegistry, GrassmannElement, integrate_product, invert_operator_on_one
from modules.core.linalg import Matrix, det, independent_columns, independent_rows
from modules.core.scalars import Scalar, ZetaAssignment
from modules.core.triangulation import Face, Triangulation
from modules.core.weights3d import (
    chain_registry,
    epsilon_of,
    tetra_block,
    vertex_face_operator,
    vertex_tetra_operator,
    weight_W,
)

logger = logging.getLogger('pachnercalc.chain3d')

FaceRef = Union[str, Face, Sequence[int]]


@dataclass(frozen=True)
class ChainBasis3:
    """Coordinate labels of the three vector spaces of the complex."""

    vertices: Tuple[int, ...]
    faces: Tuple[str, ...]
    tetra: Tuple[str, ...]
    inner_faces: Tuple[str, ...]
    boundary_faces: Tuple[str, ...]

    @classmethod
    def of(cls, t: Triangulation) -> 'ChainBasis3':
        inner = tuple(face_label(f.name) for f in t.inner_faces(2))
        boundary = tuple(face_label(f.name) for f in t.boundary_faces(2))
        tetra = tuple(label for cell_id in t.cell_ids() for label in tetra_labels(cell_id))
        basis = cls(tuple(t.inner_vertices()), inner + boundary, tetra, inner, boundary)
        if len(basis.faces) != len(t.faces(2)) or len(basis.tetra) != 2 * len(t):
            raise SubsetError("Chain basis does not match the face and cell counts")
        return basis

    @property
    def subset_size(self) -> int:
        """#C = 2 N3 - N2'"""
        return len(self.tetra) - len(self.inner_faces)


def _resolve_face(t: Triangulation, item: FaceRef) -> str:
    """Grassmann label of a 2-face given as label, name, Face or vertex tuple."""
    if isinstance(item, Face):
        return face_label(item.name)
    by_name = t.faces_by_name(2)
    if isinstance(item, str):
        name = item[1:] if item.startswith('a') else item
        if name not in by_name:
            raise SubsetError(f"No 2-face named {item!r}")
        return face_label(name)
    matches = t.faces_with_vertices(item)
    if len(matches) != 1:
        raise SubsetError(f"Vertex tuple {tuple(item)} names {len(matches)} faces; use the face name")
    return face_label(matches[0].name)


def validate_subset(t: Triangulation, subset: Iterable[FaceRef], basis: Optional[ChainBasis3] = None) -> Tuple[str, ...]:
    """
    Check an ordered subset C of boundary faces.

    Returns:
        tuple: Face labels of C, in the given order

    Raises:
        SubsetError: Wrong cardinality, repeated entries or non-boundary faces
    """
    basis = basis or ChainBasis3.of(t)
    labels = tuple(_resolve_face(t, item) for item in subset)
    if len(labels) != basis.subset_size:
        raise SubsetError(f"C must hold 2*N3 - N2' = {basis.subset_size} faces, got {len(labels)}")
    if len(set(labels)) != len(labels):
        raise SubsetError(f"C repeats a face: {labels}")
    inner = [label for label in labels if label not in basis.boundary_faces]
    if inner:
        raise SubsetError(f"C may only contain boundary faces, got {inner}")
    return labels


def build_f2(t: Triangulation, z: ZetaAssignment) -> Matrix:
    """f2: rows are 2-faces (inner first), columns inner vertices."""
    basis = ChainBasis3.of(t)
    faces = t.inner_faces(2) + t.boundary_faces(2)
    column = {v: j for j, v in enumerate(basis.vertices)}
    rows = []
    for face in faces:
        row = [Fraction(0)] * len(basis.vertices)
        for v, coefficient in face_vertex_coefficients(z, face.vertices).items():
            if v in column:
                row[column[v]] += coefficient
        rows.append(row)
    return Matrix(rows, basis.faces, basis.vertices, n_cols=len(basis.vertices))


def build_f3(t: Triangulation, z: ZetaAssignment) -> Matrix:
    """f3: rows are tetrahedron coordinates, columns 2-faces; one 2x4 block per tetrahedron."""
    basis = ChainBasis3.of(t)
    m = Matrix.zeros(basis.tetra, basis.faces)
    rows = m.rows()
    for cell_id in t.cell_ids():
        for b_label, entries in tetra_block(t, z, cell_id).items():
            i = m.row_index(b_label)
            for a_label, value in entries.items():
                rows[i][m.col_index(a_label)] += value
    return Matrix(rows, basis.tetra, basis.faces, n_cols=len(basis.faces))


def build_f4(t: Triangulation, z: ZetaAssignment) -> Matrix:
    """f4: rows are inner vertices, columns tetrahedron coordinates (v_i = sum eps_r y_{r,i})."""
    basis = ChainBasis3.of(t)
    m = Matrix.zeros(basis.vertices, basis.tetra)
    rows = m.rows()
    inner = set(basis.vertices)
    for cell in t.cells():
        table = vertex_cell_coefficients(z, cell.vertices, epsilon_of(cell))
        columns = dict(zip(cell.vertices[:2], tetra_labels(cell.id)))
        for v in cell.vertices:
            if v not in inner:
                continue
            for free, value in table[v].items():
                rows[m.row_index(v)][m.col_index(columns[free])] += value
    return Matrix(rows, basis.vertices, basis.tetra, n_cols=len(basis.tetra))


@dataclass
class ComplexCheck:
    """Products of consecutive chain maps."""

    f3_f2_zero: bool
    f4_f3_zero: bool
    shapes: Dict[str, Tuple[int, int]] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.f3_f2_zero and self.f4_f3_zero


def check_complex(t: Triangulation, z: ZetaAssignment) -> ComplexCheck:
    f2, f3, f4 = build_f2(t, z), build_f3(t, z), build_f4(t, z)
    result = ComplexCheck((f3 @ f2).is_zero(), (f4 @ f3).is_zero(),
                          {'f2': f2.shape, 'f3': f3.shape, 'f4': f4.shape})
    logger.debug(f"Complex check: shapes {result.shapes}, f3f2=0 {result.f3_f2_zero}, f4f3=0 {result.f4_f3_zero}")
    return result


@dataclass(frozen=True)
class TorsionResult:
    """tau_C, or defined=False when the restricted complex has no tau-chain."""

    subset: Tuple[str, ...]
    value: Scalar
    defined: bool = True


class _TorsionChain:
    """Minors of f2 and f4 shared by every C."""

    def __init__(self, t: Triangulation, z: ZetaAssignment):
        self.basis = ChainBasis3.of(t)
        self.f2 = build_f2(t, z)
        self.f3 = build_f3(t, z)
        self.f4 = build_f4(t, z)
        self.f2_rows = [self.f2.row_labels[i] for i in independent_rows(self.f2)]
        self.f4_cols = [self.f4.col_labels[j] for j in independent_columns(self.f4)]
        n = len(self.basis.vertices)
        self.full_rank = len(self.f2_rows) == n and len(self.f4_cols) == n
        self.denominator = Fraction(0)
        if self.full_rank:
            self.denominator = det(self.f2.select(self.f2_rows, self.basis.vertices)) * \
                det(self.f4.select(self.basis.vertices, self.f4_cols))
        logger.debug(f"Torsion chain: f2 rows {self.f2_rows}, f4 columns {self.f4_cols}")

    def tau(self, subset: Tuple[str, ...]) -> TorsionResult:
        if not self.full_rank or not self.denominator:
            return TorsionResult(subset, Fraction(0), defined=False)
        allowed = set(self.basis.inner_faces) | set(subset)
        if any(label not in allowed for label in self.f2_rows):
            return TorsionResult(subset, Fraction(0), defined=False)
        rows = [label for label in self.basis.tetra if label not in self.f4_cols]
        columns = [label for label in self.basis.inner_faces + subset if label not in self.f2_rows]
        if len(rows) != len(columns):
            return TorsionResult(subset, Fraction(0), defined=False)
        value = det(self.f3.select(rows, columns))
        if not value:
            return TorsionResult(subset, Fraction(0), defined=False)
        return TorsionResult(subset, value / self.denominator)


def torsion_tau(t: Triangulation, z: ZetaAssignment, subset: Iterable[FaceRef]) -> TorsionResult:
    """
    Reidemeister torsion tau_C = (minor f3)_C / (minor f2 * minor f4).

    The minors of f2 and f4 are the first maximal independent rows of f2 and
    columns of f4; they are the same for every C.

    Args:
        t: Oriented triangulation
        z: Zeta assignment
        subset: Ordered boundary faces C, #C = 2 N3 - N2'

    Returns:
        TorsionResult: defined=False when the restricted complex has no tau-chain
    """
    chain = _TorsionChain(t, z)
    return chain.tau(validate_subset(t, subset, chain.basis))


def prefactor(t: Triangulation, z: ZetaAssignment) -> Scalar:
    """prod_{inner faces} zeta_{s2 s3} / (prod_{inner edges} zeta_{l1 l2} * prod_r zeta_{r3 r4})"""
    numerator = Fraction(1)
    for face in t.inner_faces(2):
        numerator *= z.diff(face.vertices[1], face.vertices[2])
    denominator = Fraction(1)
    for edge in t.inner_faces(1):
        denominator *= z.diff(*edge.vertices)
    for cell in t.cells():
        denominator *= z.diff(cell.vertices[2], cell.vertices[3])
    return numerator / denominator


def invariant_I0(t: Triangulation, z: ZetaAssignment, subset: Iterable[FaceRef]) -> Scalar:
    """I_C^(0) = prefactor * tau_C (zero when tau_C is undefined)."""
    result = torsion_tau(t, z, subset)
    return prefactor(t, z) * result.value if result.defined else Fraction(0)


def canonical_subsets(t: Triangulation) -> List[Tuple[str, ...]]:
    """Every C in ascending boundary-face order."""
    basis = ChainBasis3.of(t)
    if basis.subset_size < 0:
        return []
    return list(combinations(basis.boundary_faces, basis.subset_size))


def torsion_vector(t: Triangulation, z: ZetaAssignment) -> Dict[Tuple[str, ...], TorsionResult]:
    """tau_C for every canonical C."""
    chain = _TorsionChain(t, z)
    subsets = canonical_subsets(t)
    logger.debug(f"Computing {len(subsets)} torsions")
    return {subset: chain.tau(subset) for subset in subsets}


def invariant_vector(t: Triangulation, z: ZetaAssignment) -> Dict[Tuple[str, ...], Scalar]:
    """I_C^(0) for every canonical C."""
    factor = prefactor(t, z)
    return {subset: factor * result.value if result.defined else Fraction(0)
            for subset, result in torsion_vector(t, z).items()}


def integration_measure(t: Triangulation) -> List[str]:
    """db.1 db.2 per tetrahedron in cell order, then da per inner face."""
    basis = ChainBasis3.of(t)
    return list(basis.tetra) + list(basis.inner_faces)


def generating_function_T(t: Triangulation, z: ZetaAssignment,
                          registry: Optional[GeneratorRegistry] = None) -> GrassmannElement:
    """
    Generating function of the torsions:

        T = int prod_r W_r * (prod_i d_i^a)^-1 1 * (prod_i d_i^b)^-1 1  db da_inner

    The coefficient of prod_{s in C} a_s (in the order of C) is tau_C up to
    one sign common to all C.

    Raises:
        OperatorInversionError: If the vertex operators have no monomial inverse
    """
    registry = registry or chain_registry(t)
    vertices = t.inner_vertices()
    u = invert_operator_on_one([vertex_face_operator(t, z, i, registry) for i in vertices], registry)
    w = invert_operator_on_one([vertex_tetra_operator(t, z, i, registry) for i in vertices], registry)
    factors = [weight_W(t, z, r, registry) for r in t.cell_ids()] + [u, w]
    measure = integration_measure(t)
    logger.debug(f"T: {len(factors)} factors, {len(measure)} integrations, {len(vertices)} inner vertices")
    return integrate_product(factors, measure)


def generating_function_F(t: Triangulation, z: ZetaAssignment,
                          registry: Optional[GeneratorRegistry] = None) -> GrassmannElement:
    """F = prefactor * T, the generating function of the I_C^(0)."""
    return generating_function_T(t, z, registry) * prefactor(t, z)


def subset_coefficient(x: GrassmannElement, subset: Sequence[str]) -> Scalar:
    """Coefficient of prod_{s in C} a_s, in the order of C."""
    return x.ordered_coefficient(list(subset))
