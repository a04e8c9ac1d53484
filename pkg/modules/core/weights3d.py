"""
Tetrahedron Grassmann weights, vertex operators and the 3D move identities.

Every 2-face s carries a generator a_s and every tetrahedron r the pair
b_r.1, b_r.2 (attached to its two smallest vertices). Phi_r is the bilinear
form b^T B a with B the 2x4 block of f3 for r, W_r = exp(Phi_r), and the
deformed weight adds eps_r * zeta_{r3 r4} * alpha_r * b.2 b.1 to the exponent.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from modules.core.alpha import (
    AlphaSystem,
    AlphaSystem3,
    check_alpha_move,
    move_residuals,
    transport_alpha,
)
from modules.core.coordinates import (
    boundary_block,
    face_label,
    face_vertex_coefficients,
    tetra_labels,
    vertex_cell_coefficients,
)
from modules.core.errors import OrientationError, TriangulationError
from modules.core.grassmann import (
    FirstOrderOperator,
    GeneratorRegistry,
    GrassmannElement,
    exp,
    integrate_measure,
    integrate_product,
    invert_operator_on_one,
    normalize_inverse,
)
from modules.core.moves import move_cluster
from modules.core.scalars import Scalar, ZetaAssignment
from modules.core.triangulation import Cell, CellId, Triangulation

logger = logging.getLogger('pachnercalc.weights3d')


def chain_registry(*sides: Triangulation, extra: Sequence[str] = ()) -> GeneratorRegistry:
    """
    Generators of one or more complexes: inner-face a's, boundary-face a's,
    then the b pairs in cell order. Labels shared by several sides appear once.
    """
    labels: List[str] = []
    seen = set()

    def add(label: str) -> None:
        if label not in seen:
            seen.add(label)
            labels.append(label)

    for t in sides:
        for face in t.inner_faces(2):
            add(face_label(face.name))
    for t in sides:
        for face in t.boundary_faces(2):
            add(face_label(face.name))
    for t in sides:
        for cell_id in t.cell_ids():
            for label in tetra_labels(cell_id):
                add(label)
    for label in extra:
        add(label)
    return GeneratorRegistry(labels)


def epsilon_of(cell: Cell) -> int:
    if cell.epsilon is None:
        raise OrientationError(f"Cell {cell.id!r} has no orientation", cell=cell.id)
    return cell.epsilon


def tetra_block(t: Triangulation, z: ZetaAssignment, r: CellId) -> Dict[str, Dict[str, Scalar]]:
    """The 2x4 block of f3 for tetrahedron r: b label -> {face a label: coefficient}."""
    cell = t.cell(r)
    b1, b2 = tetra_labels(r)
    rows = {cell.vertices[0]: b1, cell.vertices[1]: b2}
    block: Dict[str, Dict[str, Scalar]] = {b1: {}, b2: {}}
    for vertex, entries in boundary_block(z, cell.vertices).items():
        for (slot, _), coefficient in entries.items():
            column = face_label(t.facet_face(r, slot).name)
            block[rows[vertex]][column] = block[rows[vertex]].get(column, Fraction(0)) + coefficient
    return block


def phi(t: Triangulation, z: ZetaAssignment, r: CellId,
        registry: Optional[GeneratorRegistry] = None) -> GrassmannElement:
    """
    Phi_r = (b.1, b.2) B (a faces), an even element of degree two.

    Args:
        t: Triangulation
        z: Zeta assignment
        r: Tetrahedron id
        registry: Generator registry (default: chain_registry(t))
    """
    registry = registry or chain_registry(t)
    result = registry.zero()
    for b_label, row in tetra_block(t, z, r).items():
        result = result + registry.generator(b_label) * registry.linear_form(row)
    return result


def weight_W(t: Triangulation, z: ZetaAssignment, r: CellId,
             registry: Optional[GeneratorRegistry] = None) -> GrassmannElement:
    """W_r = exp(Phi_r)."""
    return exp(phi(t, z, r, registry))


def deformation_term(t: Triangulation, z: ZetaAssignment, r: CellId, alpha: Scalar,
                     registry: GeneratorRegistry) -> GrassmannElement:
    """eps_r * zeta_{r3 r4} * alpha * b.2 b.1"""
    cell = t.cell(r)
    b1, b2 = tetra_labels(r)
    coefficient = epsilon_of(cell) * z.diff(cell.vertices[2], cell.vertices[3]) * alpha
    return registry.monomial([b2, b1], coefficient)


def deformed_weight(t: Triangulation, z: ZetaAssignment, r: CellId, alpha: AlphaSystem,
                    registry: Optional[GeneratorRegistry] = None) -> GrassmannElement:
    """W~_r = exp(Phi_r + eps_r zeta_{r3 r4} alpha_r b.2 b.1)."""
    registry = registry or chain_registry(t)
    value = alpha.value(t.cell(r))
    return exp(phi(t, z, r, registry) + deformation_term(t, z, r, value, registry))


def integrated_weight(t: Triangulation, z: ZetaAssignment, r: CellId, alpha: Optional[AlphaSystem] = None,
                      registry: Optional[GeneratorRegistry] = None) -> GrassmannElement:
    """
    The weight integrated over db.1 db.2 (b.1 innermost).

    Without alpha this is the undeformed weight; with alpha it equals the
    undeformed one plus eps_r zeta_{r3 r4} alpha_r.
    """
    registry = registry or chain_registry(t)
    if alpha is None:
        w = weight_W(t, z, r, registry)
    else:
        w = deformed_weight(t, z, r, alpha, registry)
    return integrate_measure(w, list(tetra_labels(r)))


def leading_edge_coefficient(z: ZetaAssignment, vertices: Sequence[int]) -> Scalar:
    """zeta_{r1 r2} zeta_{r1 r3} zeta_{r1 r4}: the edges at the smallest vertex."""
    r1, r2, r3, r4 = vertices
    return z.diff(r1, r2) * z.diff(r1, r3) * z.diff(r1, r4)


def edge_product_coefficient(z: ZetaAssignment, vertices: Sequence[int]) -> Scalar:
    """zeta_{r3 r4} times the product of zeta_{ri rj} over all i < j."""
    c = z.diff(vertices[2], vertices[3])
    for i in range(4):
        for j in range(i + 1, 4):
            c *= z.diff(vertices[i], vertices[j])
    return c


Deg4Coefficient = Callable[[ZetaAssignment, Sequence[int]], Scalar]


def deformed_weight_deg4(t: Triangulation, z: ZetaAssignment, r: CellId,
                         registry: Optional[GeneratorRegistry] = None,
                         coefficient: Deg4Coefficient = leading_edge_coefficient) -> GrassmannElement:
    """
    Integrated weight with the degree-4 term
    eps_r k_r a_{r1r2r3} a_{r1r2r4} a_{r1r3r4} a_{r2r3r4}.

    With the default k_r = zeta_{r1r2} zeta_{r1r3} zeta_{r1r4} the weights satisfy
    the 2-3 relation. The full edge product (edge_product_coefficient) does not:
    the degree-5 parts of the two sides differ.
    """
    registry = registry or chain_registry(t)
    cell = t.cell(r)
    # faces r1r2r3, r1r2r4, r1r3r4, r2r3r4 are the facets in slots 3, 2, 1, 0
    faces = [face_label(t.facet_face(r, slot).name) for slot in (3, 2, 1, 0)]
    term = registry.monomial(faces, epsilon_of(cell) * coefficient(z, cell.vertices))
    return integrated_weight(t, z, r, None, registry) + term


def vertex_face_operator(t: Triangulation, z: ZetaAssignment, i: int,
                         registry: Optional[GeneratorRegistry] = None) -> FirstOrderOperator:
    """d_i^a: sum over 2-faces s through i of the f2 entry (s, i) times d/da_s."""
    registry = registry or chain_registry(t)
    coefficients: Dict[str, Scalar] = {}
    for face in t.faces(2):
        if i in face.vertices:
            label = face_label(face.name)
            coefficients[label] = coefficients.get(label, Fraction(0)) + face_vertex_coefficients(z, face.vertices)[i]
    if not coefficients:
        raise TriangulationError(f"Vertex {i} lies in no 2-face")
    return FirstOrderOperator(registry, coefficients)


def vertex_tetra_operator(t: Triangulation, z: ZetaAssignment, i: int,
                          registry: Optional[GeneratorRegistry] = None) -> FirstOrderOperator:
    """d_i^b: sum over tetrahedra r through i of eps_r y_{r,i} in the b.1, b.2 basis."""
    registry = registry or chain_registry(t)
    coefficients: Dict[str, Scalar] = {}
    for cell in t.cells():
        if i not in cell.vertices:
            continue
        row = vertex_cell_coefficients(z, cell.vertices, epsilon_of(cell))[i]
        for free, label in zip(cell.vertices[:2], tetra_labels(cell.id)):
            if free in row:
                coefficients[label] = coefficients.get(label, Fraction(0)) + row[free]
    if not coefficients:
        raise TriangulationError(f"Vertex {i} lies in no tetrahedron")
    return FirstOrderOperator(registry, coefficients)


@dataclass
class VertexWeights:
    """u_i and w_i per inner vertex, and the tetrahedron each pair corresponds to."""

    u: Dict[int, GrassmannElement] = field(default_factory=dict)
    w: Dict[int, GrassmannElement] = field(default_factory=dict)
    cells: Dict[int, CellId] = field(default_factory=dict)

    def factors(self) -> List[GrassmannElement]:
        """All u's (ascending vertex) followed by all w's."""
        return [self.u[i] for i in sorted(self.u)] + [self.w[i] for i in sorted(self.w)]


def vertex_weights_for_cell(t: Triangulation, z: ZetaAssignment, i: int, r: CellId,
                            registry: GeneratorRegistry) -> Tuple[GrassmannElement, GrassmannElement]:
    """
    Degree-one u_i and w_i corresponding to tetrahedron r: the first face of
    r through i and the first b of r with a nonzero operator coefficient.
    """
    cell = t.cell(r)
    if i not in cell.vertices:
        raise TriangulationError(f"Vertex {i} is not a vertex of cell {r!r}", cell=r)
    d_a = vertex_face_operator(t, z, i, registry)
    d_b = vertex_tetra_operator(t, z, i, registry)
    u = None
    for slot in range(4):
        if cell.vertices[slot] == i:
            continue
        label = face_label(t.facet_face(r, slot).name)
        if d_a.coefficient(label):
            u = registry.generator(label) / d_a.coefficient(label)
            break
    w = None
    for label in tetra_labels(r):
        if d_b.coefficient(label):
            w = registry.generator(label) / d_b.coefficient(label)
            break
    if u is None or w is None:
        raise TriangulationError(f"No vertex weights for vertex {i} in cell {r!r}", cell=r)
    return u, w


def vertex_weights(t: Triangulation, z: ZetaAssignment, assignment: Mapping[int, CellId],
                   registry: Optional[GeneratorRegistry] = None) -> VertexWeights:
    """Vertex weights chosen according to an assignment inner vertex -> tetrahedron."""
    registry = registry or chain_registry(t)
    weights = VertexWeights()
    for i, r in sorted(assignment.items()):
        weights.u[i], weights.w[i] = vertex_weights_for_cell(t, z, i, r, registry)
        weights.cells[i] = r
    return weights


def solve_alpha_move(z: ZetaAssignment, alpha: AlphaSystem, move: str = '2-3') -> AlphaSystem3:
    """
    Right-hand alphas of a 3D move expressed through the left-hand ones.

    For 2-3:
        zeta_45 alpha_1245 = zeta_35 alpha_1235 - zeta_34 alpha_1234
        zeta_45 alpha_1345 = zeta_25 alpha_1235 - zeta_24 alpha_1234
        zeta_45 alpha_2345 = zeta_15 alpha_1235 - zeta_14 alpha_1234
    Other moves solve the balance equations of their standard cluster.
    """
    if move == '2-3':
        a1234, a1235 = alpha[(1, 2, 3, 4)], alpha[(1, 2, 3, 5)]
        z45 = z.diff(4, 5)
        return AlphaSystem3({
            (1, 2, 3, 4): a1234,
            (1, 2, 3, 5): a1235,
            (1, 2, 4, 5): (z.diff(3, 5) * a1235 - z.diff(3, 4) * a1234) / z45,
            (1, 3, 4, 5): (z.diff(2, 5) * a1235 - z.diff(2, 4) * a1234) / z45,
            (2, 3, 4, 5): (z.diff(1, 5) * a1235 - z.diff(1, 4) * a1234) / z45,
        })
    cluster = move_cluster(move)
    if cluster.lhs.dimension != 3:
        raise TriangulationError(f"{move} is not a 3D move")
    return transport_alpha(cluster.lhs, cluster.rhs, z, alpha)


def solve_alpha_move_32(z: ZetaAssignment, alpha: AlphaSystem) -> AlphaSystem3:
    """
    Alphas of (1234), (1235) from those of (1245), (1345), (2345).

    Raises:
        InconsistentAlphaError: If zeta_12 a_1245 - zeta_13 a_1345 + zeta_23 a_2345 != 0
    """
    cluster = move_cluster('3-2')
    return transport_alpha(cluster.lhs, cluster.rhs, z, alpha)


@dataclass
class MoveVerification:
    """Outcome of one identity check."""

    move: str
    passed: bool
    lhs: GrassmannElement
    rhs: GrassmannElement
    difference: GrassmannElement
    details: Dict[str, object] = field(default_factory=dict)

    def to_dict(self) -> dict:
        data = {'move': self.move, 'passed': self.passed, 'details': {k: str(v) for k, v in self.details.items()}}
        if not self.passed:
            data['difference'] = self.difference.to_dict()
        return data


def compare(move: str, lhs: GrassmannElement, rhs: GrassmannElement, **details) -> MoveVerification:
    difference = lhs - rhs
    passed = difference.is_zero()
    if not passed:
        logger.debug(f"{move}: identity fails, {len(difference)} differing terms")
    return MoveVerification(move, passed, lhs, rhs, difference, dict(details))


def verify_move_23(z: ZetaAssignment, alpha: Optional[AlphaSystem] = None,
                   check_alpha: bool = True) -> MoveVerification:
    """
    The 2-3 identity for deformed weights:

        zeta_23 / (zeta_34 zeta_35) * int W~1234 W~1235 da123
            = -1 / zeta_45 * int W~1245 W~1345 W~2345 da145 da245 da345

    Args:
        z: Zeta values for the vertices 1..5
        alpha: Alphas on both sides (default: all zero)
        check_alpha: Reject systems that violate the balance equations

    Raises:
        InconsistentAlphaError: If check_alpha is set and alpha is not consistent
    """
    alpha = alpha or AlphaSystem3.zero()
    cluster = move_cluster('2-3')
    lhs_t, rhs_t = cluster.lhs, cluster.rhs
    if check_alpha:
        check_alpha_move(lhs_t, rhs_t, z, alpha)
    registry = chain_registry(lhs_t, rhs_t)

    def weights(t: Triangulation) -> List[GrassmannElement]:
        return [integrated_weight(t, z, r, alpha, registry) for r in t.cell_ids()]

    lhs = integrate_product(weights(lhs_t), ['a123']) * (z.diff(2, 3) / (z.diff(3, 4) * z.diff(3, 5)))
    rhs = integrate_product(weights(rhs_t), ['a145', 'a245', 'a345']) * (-1 / z.diff(4, 5))
    return compare('2-3', lhs, rhs, zeta=z.to_text(), alpha=alpha.to_dict())


def verify_move_14(z: ZetaAssignment, alpha: Optional[AlphaSystem] = None, check_alpha: bool = True,
                   u_generator: Optional[str] = None, w_generator: Optional[str] = None) -> MoveVerification:
    """
    The 1-4 identity:

        W~1234 / zeta_34 = -1 / (zeta_15 zeta_45) * int W~1235 W~1245 W~1345 W~2345 u5 w5
                           db(8 tetrahedron variables) da125 da135 da145 da235 da245 da345

    with u5 = (d_5^a)^-1 1 and w5 = (d_5^b)^-1 1. By default both are found by
    operator inversion; u_generator / w_generator pick another monomial.
    """
    alpha = alpha or AlphaSystem3.zero()
    cluster = move_cluster('1-4')
    lhs_t, rhs_t = cluster.lhs, cluster.rhs
    if check_alpha:
        check_alpha_move(lhs_t, rhs_t, z, alpha)
    registry = chain_registry(lhs_t, rhs_t)

    d_a = vertex_face_operator(rhs_t, z, 5, registry)
    d_b = vertex_tetra_operator(rhs_t, z, 5, registry)
    u5 = normalize_inverse(d_a, registry.generator(u_generator)) if u_generator else invert_operator_on_one(d_a)
    w5 = normalize_inverse(d_b, registry.generator(w_generator)) if w_generator else invert_operator_on_one(d_b)

    lhs = integrated_weight(lhs_t, z, '1234', alpha, registry) / z.diff(3, 4)
    factors = [deformed_weight(rhs_t, z, r, alpha, registry) for r in rhs_t.cell_ids()] + [u5, w5]
    measure = [label for r in rhs_t.cell_ids() for label in tetra_labels(r)]
    measure += ['a125', 'a135', 'a145', 'a235', 'a245', 'a345']
    rhs = integrate_product(factors, measure) * (-1 / (z.diff(1, 5) * z.diff(4, 5)))
    return compare('1-4', lhs, rhs, zeta=z.to_text(), alpha=alpha.to_dict(), u5=u5, w5=w5)


def verify_move_23_deg4(z: ZetaAssignment, epsilons: Optional[Mapping[CellId, int]] = None,
                         coefficient: Deg4Coefficient = leading_edge_coefficient) -> MoveVerification:
    """
    The 2-3 identity with the degree-4 deformed weights.

    The orientation of the standard cluster gives eps = +1 on 1234 and 1345
    and -1 on 1235, 1245, 2345; `epsilons` overrides single signs.
    """
    cluster = move_cluster('2-3')
    lhs_t, rhs_t = cluster.lhs, cluster.rhs
    if epsilons:
        lhs_t = lhs_t.with_epsilons({k: v for k, v in epsilons.items() if k in lhs_t})
        rhs_t = rhs_t.with_epsilons({k: v for k, v in epsilons.items() if k in rhs_t})
    registry = chain_registry(lhs_t, rhs_t)
    lhs_weights = [deformed_weight_deg4(lhs_t, z, r, registry, coefficient) for r in lhs_t.cell_ids()]
    rhs_weights = [deformed_weight_deg4(rhs_t, z, r, registry, coefficient) for r in rhs_t.cell_ids()]
    lhs = integrate_product(lhs_weights, ['a123']) * (z.diff(2, 3) / (z.diff(3, 4) * z.diff(3, 5)))
    rhs = integrate_product(rhs_weights, ['a145', 'a245', 'a345']) * (-1 / z.diff(4, 5))
    return compare('2-3-deg4', lhs, rhs, zeta=z.to_text(),
                   epsilons={c.id: c.epsilon for c in lhs_t.cells() + rhs_t.cells()})


def alpha_residuals_23(z: ZetaAssignment, alpha: AlphaSystem) -> Dict[Tuple[int, ...], Scalar]:
    """Balance residuals of the standard 2-3 cluster (empty when consistent)."""
    cluster = move_cluster('2-3')
    return move_residuals(cluster.lhs, cluster.rhs, z, alpha)
