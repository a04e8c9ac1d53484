"""
Orderly mappings, the deformed invariant G and its Pfaffian evaluation,
and the lens-space tables.

An orderly mapping picks for every inner vertex i a tetrahedron f(S_i) of its
star S_i. It is orderly when it is injective and the relation
S_i <= S_j whenever f(S_i) lies in S_j has no cycles. The vertex weights u_i,
w_i of G are taken from the tetrahedron f(S_i).
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from graphlib import CycleError, TopologicalSorter
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from modules.core.alpha import AlphaSystem3
from modules.core.chain3d import integration_measure, prefactor
from modules.core.errors import ElementaryMoveError, InnerVertexError, OrderlyConstructionError, PachnerCalcError
from modules.core.grassmann import GeneratorRegistry, GrassmannElement, integrate_product
from modules.core.lens import labelling_candidates, lens_complement
from modules.core.linalg import SkewMatrix, pfaffian
from modules.core.scalars import Scalar, ScalarLike, ZetaAssignment, to_scalar
from modules.core.triangulation import CellId, Triangulation
from modules.core.coordinates import tetra_labels
from modules.core.weights3d import (
    chain_registry,
    deformed_weight,
    epsilon_of,
    tetra_block,
    vertex_weights,
)

logger = logging.getLogger('pachnercalc.invariant3d')

# alpha whose M has the blocks eps_r [[0, zeta_{r3 r4}], [-zeta_{r3 r4}, 0]] of C as they are
LENS_ALPHA = -1

# (p, q, n, zeta, |G|), computed at LENS_ALPHA
PUBLISHED_LENS_TABLE: Tuple[Tuple[int, int, int, Tuple[int, ...], int], ...] = (
    (7, 1, 1, (1, 2, 3, 4), 153), (7, 1, 2, (1, 2, 3, 4), 313), (7, 1, 3, (1, 2, 3, 4), 381),
    (7, 1, 1, (1, 2, 4, 3), 92), (7, 1, 2, (1, 2, 4, 3), 324), (7, 1, 3, (1, 2, 4, 3), 452),
    (7, 2, 1, (1, 2, 3, 4), 12), (7, 2, 2, (1, 2, 3, 4), 108), (7, 2, 3, (1, 2, 3, 4), 153),
    (7, 2, 1, (1, 2, 4, 3), 61), (7, 2, 2, (1, 2, 4, 3), 39), (7, 2, 3, (1, 2, 4, 3), 92),
    (7, 3, 1, (1, 2, 3, 4), 39), (7, 3, 2, (1, 2, 3, 4), 92), (7, 3, 3, (1, 2, 3, 4), 61),
    (7, 3, 1, (1, 2, 4, 3), 108), (7, 3, 2, (1, 2, 4, 3), 153), (7, 3, 3, (1, 2, 4, 3), 12),
)


@dataclass(frozen=True)
class OrderlyMapping:
    """Inner vertex -> tetrahedron f(S_i)."""

    assignment: Mapping[int, CellId] = field(default_factory=dict)

    def __getitem__(self, vertex: int) -> CellId:
        return self.assignment[vertex]

    def __len__(self) -> int:
        return len(self.assignment)

    def vertices(self) -> List[int]:
        return sorted(self.assignment)

    def with_image(self, vertex: int, cell: CellId) -> 'OrderlyMapping':
        updated = dict(self.assignment)
        updated[vertex] = cell
        return OrderlyMapping(updated)

    def to_dict(self) -> Dict[str, str]:
        return {str(v): str(self.assignment[v]) for v in self.vertices()}


def stars(t: Triangulation) -> Dict[int, Set[CellId]]:
    """S_i for every inner vertex i."""
    return {i: set(t.cells_containing(i)) for i in t.inner_vertices()}


def _exposed_vertices(t: Triangulation, remaining: Set[CellId]) -> Set[int]:
    exposed = set()
    for cell_id in remaining:
        cell = t.cell(cell_id)
        for slot in range(4):
            partner = t.partner(cell_id, slot)
            if partner is None or partner[0] not in remaining:
                exposed.update(cell.facet(slot))
    return exposed


def construct_orderly(t: Triangulation, avoid: Optional[Iterable[CellId]] = None) -> OrderlyMapping:
    """
    Build an orderly mapping by peeling tetrahedra off the boundary.

    Repeatedly remove the first remaining tetrahedron (canonical order, not
    in `avoid`) with a 2-face on the current boundary. When the removal
    exposes an inner vertex i, f(S_i) is that tetrahedron.

    Raises:
        OrderlyConstructionError: If the peeling stalls before every inner vertex is reached
    """
    avoid = set(avoid or ())
    inner = set(t.inner_vertices())
    if not inner:
        return OrderlyMapping({})
    if t.is_closed():
        raise OrderlyConstructionError("Orderly mappings are built from a non-empty boundary")
    remaining = set(t.cell_ids())
    order = t.cell_ids()
    assignment: Dict[int, CellId] = {}
    exposed = _exposed_vertices(t, remaining)
    while len(assignment) < len(inner):
        candidate = None
        for cell_id in order:
            if cell_id not in remaining or cell_id in avoid:
                continue
            if any(t.partner(cell_id, slot) is None or t.partner(cell_id, slot)[0] not in remaining
                   for slot in range(4)):
                candidate = cell_id
                break
        if candidate is None:
            missing = sorted(inner - set(assignment))
            raise OrderlyConstructionError(f"Peeling stalled; inner vertices {missing} were never reached")
        remaining.discard(candidate)
        now_exposed = _exposed_vertices(t, remaining)
        for v in t.cell(candidate).vertices:
            if v in inner and v not in exposed and v not in assignment:
                assignment[v] = candidate
                logger.debug(f"Peeling {candidate!r} exposes vertex {v}")
        exposed = now_exposed | exposed
    return OrderlyMapping(assignment)


def _precedence(t: Triangulation, m: OrderlyMapping) -> Dict[int, Set[int]]:
    """j -> {i : f(S_i) in S_j, i != j}, i.e. the vertices i with S_i <= S_j."""
    star = stars(t)
    graph: Dict[int, Set[int]] = {j: set() for j in m.vertices()}
    for i in m.vertices():
        for j in m.vertices():
            if i != j and m[i] in star[j]:
                graph[j].add(i)
    return graph


def is_orderly(t: Triangulation, m: OrderlyMapping) -> bool:
    """Images in their stars, injective, and the star relation acyclic."""
    star = stars(t)
    if set(m.vertices()) != set(star):
        return False
    if any(m[i] not in star[i] for i in m.vertices()):
        return False
    if len(set(m.assignment.values())) != len(m):
        return False
    try:
        tuple(TopologicalSorter(_precedence(t, m)).static_order())
    except CycleError:
        return False
    return True


def preceding_vertices(t: Triangulation, m: OrderlyMapping, k: int) -> Set[int]:
    """All j with S_j < S_k in the order generated by m."""
    graph = _precedence(t, m)
    found: Set[int] = set()
    stack = list(graph.get(k, ()))
    while stack:
        j = stack.pop()
        if j in found or j == k:
            continue
        found.add(j)
        stack.extend(graph[j])
    return found


def free_region(t: Triangulation, m: OrderlyMapping, k: int) -> Set[CellId]:
    """R_k: the star of k minus the stars of every preceding vertex."""
    star = stars(t)
    if k not in star:
        raise ElementaryMoveError(f"Vertex {k} is not an inner vertex")
    region = set(star[k])
    for j in preceding_vertices(t, m, k):
        region -= star[j]
    return region


def elementary_move(t: Triangulation, m: OrderlyMapping, k: int, cell: CellId) -> OrderlyMapping:
    """
    Change f(S_k) to another tetrahedron of R_k.

    Raises:
        ElementaryMoveError: If the tetrahedron is outside R_k
    """
    region = free_region(t, m, k)
    if cell not in region:
        raise ElementaryMoveError(f"Tetrahedron {cell!r} is not in R_{k} = {sorted(map(str, region))}")
    return m.with_image(k, cell)


def elementary_path(t: Triangulation, start: OrderlyMapping, target: OrderlyMapping) -> List[Tuple[int, CellId]]:
    """
    Elementary moves turning `start` into `target`.

    Vertices are fixed to their target images from the top of the target
    order down: each chosen vertex has a target image in no other unfixed
    star, which keeps it inside R_k and the intermediate mappings orderly.

    Raises:
        OrderlyConstructionError: If either mapping is not orderly
    """
    for name, m in (('start', start), ('target', target)):
        if not is_orderly(t, m):
            raise OrderlyConstructionError(f"The {name} mapping is not orderly")
    star = stars(t)
    unfixed = set(target.vertices())
    moves: List[Tuple[int, CellId]] = []
    current = start
    while unfixed:
        k = next(v for v in sorted(unfixed)
                 if not any(target[v] in star[j] for j in unfixed if j != v))
        unfixed.discard(k)
        if current[k] != target[k]:
            current = elementary_move(t, current, k, target[k])
            moves.append((k, target[k]))
    return moves


@dataclass
class QuadraticFormData:
    """Skew matrix M of b^T f3 a_inner + alpha-term in the variables (b's, inner a's)."""

    variables: Tuple[str, ...]
    matrix: SkewMatrix
    prefactor: Scalar


def quadratic_form(t: Triangulation, z: ZetaAssignment, alpha: ScalarLike = -2) -> QuadraticFormData:
    """
    Each tetrahedron contributes -alpha * eps_r * zeta_{r3 r4} at (b_r1, b_r2),
    the alpha-term of its deformed weight, so the Pfaffian agrees with
    invariant_G at the same alpha.

    At LENS_ALPHA the b-block of M is the matrix C itself. The Grassmann
    exponent b^T C b counts every pair twice and corresponds to alpha = -2.
    """
    alpha = to_scalar(alpha)
    inner = [f"a{face.name}" for face in t.inner_faces(2)]
    variables = tuple(label for cell_id in t.cell_ids() for label in tetra_labels(cell_id)) + tuple(inner)
    inner_set = set(inner)
    entries: Dict[Tuple[str, str], Scalar] = {}
    for cell in t.cells():
        b1, b2 = tetra_labels(cell.id)
        entries[(b1, b2)] = -alpha * epsilon_of(cell) * z.diff(cell.vertices[2], cell.vertices[3])
        for b_label, row in tetra_block(t, z, cell.id).items():
            for a_label, value in row.items():
                if a_label in inner_set:
                    entries[(b_label, a_label)] = entries.get((b_label, a_label), Fraction(0)) + value
    matrix = SkewMatrix.from_upper(variables, entries)
    return QuadraticFormData(variables, matrix, prefactor(t, z))


def invariant_G(t: Triangulation, z: ZetaAssignment, m: Optional[OrderlyMapping] = None,
                alpha: ScalarLike = -2, registry: Optional[GeneratorRegistry] = None) -> GrassmannElement:
    """
    G = prefactor * int prod_r W~_r * prod_i u_i * prod_i w_i  db da_inner

    with every alpha_r equal to `alpha`; -2 turns the exponent into
    b^T f3 a + b^T C b. The result lives in the boundary a's and is defined
    up to overall sign.

    Args:
        t: Oriented triangulation with non-empty boundary
        z: Zeta assignment
        m: Orderly mapping fixing the vertex weights (default: construct_orderly(t))
        alpha: Constant deformation parameter
    """
    registry = registry or chain_registry(t)
    m = m if m is not None else construct_orderly(t)
    alphas = AlphaSystem3.constant(alpha)
    weights = vertex_weights(t, z, m.assignment, registry)
    factors = [deformed_weight(t, z, r, alphas, registry) for r in t.cell_ids()] + weights.factors()
    measure = integration_measure(t)
    logger.debug(f"G: {len(t)} tetrahedra, {len(measure)} integrations, {len(m)} inner vertices")
    return integrate_product(factors, measure) * prefactor(t, z)


def invariant_G_pfaffian(t: Triangulation, z: ZetaAssignment, alpha: ScalarLike = -2) -> Scalar:
    """
    Degree-0 part of G for a triangulation without inner vertices:
    prefactor * (-1)^(n/2) * Pf(M), zero when n is odd.

    Raises:
        InnerVertexError: If the triangulation has inner vertices
    """
    if t.inner_vertices():
        raise InnerVertexError(f"Pfaffian evaluation needs no inner vertices, found {t.inner_vertices()}")
    data = quadratic_form(t, z, alpha)
    n = len(data.variables)
    if n % 2:
        return Fraction(0)
    value = data.prefactor * (-1) ** (n // 2) * pfaffian(data.matrix)
    logger.debug(f"Pfaffian of size {n}: {value}")
    return value


def lens_table(p: int, q: int, n: int, z: ZetaAssignment, alpha: ScalarLike = LENS_ALPHA,
               labelling: Optional[Mapping[str, int]] = None) -> Scalar:
    """|degree-0 part of G| for L(p, q) minus a chain of two tetrahedra."""
    t = lens_complement(p, q, n, labelling)
    value = abs(invariant_G_pfaffian(t, z, alpha))
    logger.debug(f"L({p},{q}) n={n} zeta={z.to_text()}: {value}")
    return value


def lens_values(p: int, q: int, zetas: Sequence[ZetaAssignment], alpha: ScalarLike = LENS_ALPHA,
                labelling: Optional[Mapping[str, int]] = None) -> List[Scalar]:
    """Values over every n = 1 .. p-1 and every zeta, sorted."""
    return sorted(lens_table(p, q, n, z, alpha, labelling) for z in zetas for n in range(1, p))


@dataclass
class LensCrossCheck:
    first: Tuple[int, int]
    second: Tuple[int, int]
    first_values: List[Scalar]
    second_values: List[Scalar]

    @property
    def agree(self) -> bool:
        return Counter(self.first_values) == Counter(self.second_values)


def lens_relabel_check(p: int, q1: int, q2: int, zetas: Sequence[ZetaAssignment],
                       alpha: ScalarLike = LENS_ALPHA,
                       labelling: Optional[Mapping[str, int]] = None) -> LensCrossCheck:
    """Compare the value multisets of L(p, q1) and L(p, q2) over all n and the given zetas."""
    return LensCrossCheck((p, q1), (p, q2),
                          lens_values(p, q1, zetas, alpha, labelling),
                          lens_values(p, q2, zetas, alpha, labelling))


def table_entries(entries: Optional[Iterable[Sequence]] = None) -> List[Tuple[int, int, int, ZetaAssignment, int]]:
    """Normalize (p, q, n, zeta, value) rows; zeta may be a tuple or 'z1,z2,z3,z4'."""
    rows = []
    for p, q, n, zeta, value in (entries if entries is not None else PUBLISHED_LENS_TABLE):
        z = ZetaAssignment.parse(zeta) if isinstance(zeta, str) else ZetaAssignment.from_sequence(zeta)
        rows.append((int(p), int(q), int(n), z, int(value)))
    return rows


@dataclass
class Calibration:
    labelling: Dict[str, int]
    alpha: Scalar
    matched: int


def calibrate_lens_labelling(entries: Optional[Iterable[Sequence]] = None,
                             alphas: Sequence[ScalarLike] = (LENS_ALPHA, -2)) -> Optional[Calibration]:
    """
    First (labelling, alpha) reproducing every table entry, trying the
    default labelling first.

    Returns:
        Calibration or None when no candidate matches
    """
    rows = table_entries(entries)
    for labelling in labelling_candidates():
        for alpha in alphas:
            matched = 0
            for p, q, n, z, expected in rows:
                try:
                    value = lens_table(p, q, n, z, alpha, labelling)
                except PachnerCalcError as e:
                    logger.debug(f"Labelling {labelling} failed on L({p},{q}) n={n}: {e}")
                    break
                if value != expected:
                    break
                matched += 1
            if matched == len(rows):
                logger.info(f"Lens labelling {labelling} with alpha={alpha} reproduces {matched} entries")
                return Calibration(labelling, to_scalar(alpha), matched)
            logger.debug(f"Labelling {labelling}, alpha={alpha}: {matched} entries before the first mismatch")
    logger.warning("No lens labelling reproduces the table")
    return None
