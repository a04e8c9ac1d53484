"""
Lens spaces L(p, q) as glued tetrahedra, and the excision of a chain of two
tetrahedra that leaves a solid torus complement with torus boundary.

The bipyramid over a p-gon v_0 ... v_{p-1} with poles N, S is cut into p
wedges (N, S, v_k, v_{k+1}); each wedge is split at the midpoint O of the
axis and the midpoint M_k of the equator edge into four tetrahedra. After
the lens identification every tetrahedron has one vertex of each class:
pole (N = S), centre O, equator vertex, equator midpoint. The labelling
maps those four classes onto the vertex numbers 1..4.
"""

import logging
from itertools import combinations, permutations
from math import gcd
from typing import Dict, Iterator, List, Mapping, Optional, Tuple

from modules.core.errors import ChainPatternError, LensParameterError, TriangulationError
from modules.core.triangulation import Cell, CellId, Gluing, Triangulation, orient

logger = logging.getLogger('pachnercalc.lens')

VERTEX_CLASSES = ('pole', 'centre', 'vertex', 'midpoint')

DEFAULT_LABELLING: Dict[str, int] = {'pole': 1, 'centre': 2, 'vertex': 4, 'midpoint': 3}


def validate_labelling(labelling: Mapping[str, int]) -> Dict[str, int]:
    """Check that the four vertex classes are mapped bijectively onto 1..4."""
    if set(labelling) != set(VERTEX_CLASSES):
        raise LensParameterError(f"Lens labelling needs exactly the classes {', '.join(VERTEX_CLASSES)}, "
                                 f"got {sorted(labelling)}")
    labels = {cls: int(value) for cls, value in labelling.items()}
    if sorted(labels.values()) != [1, 2, 3, 4]:
        raise LensParameterError(f"Lens labelling must use each of 1, 2, 3, 4 once, got {labels}")
    return labels


def labelling_candidates() -> Iterator[Dict[str, int]]:
    """
    Labellings under which the excised chain shares the edges 12 and 34.

    The pole-centre edge and the vertex-midpoint edge are the two edges a
    chain of two tetrahedra has in common, so {pole, centre} takes {1, 2}
    or {3, 4}. Eight labellings remain; the default comes first.
    """
    yield dict(DEFAULT_LABELLING)
    for low, high in (((1, 2), (3, 4)), ((3, 4), (1, 2))):
        for pole, centre in permutations(low):
            for vertex, midpoint in permutations(high):
                candidate = {'pole': pole, 'centre': centre, 'vertex': vertex, 'midpoint': midpoint}
                if candidate != DEFAULT_LABELLING:
                    yield candidate


def check_lens_parameters(p: int, q: int, n: Optional[int] = None) -> Tuple[int, int, Optional[int]]:
    """
    Validate (p, q, n) and reduce q and n modulo p.

    Raises:
        LensParameterError: If p < 2, gcd(p, q) != 1 or n = 0 mod p
    """
    if p < 2:
        raise LensParameterError(f"Lens spaces need p >= 2, got p={p}")
    if gcd(p, q) != 1:
        raise LensParameterError(f"p and q must be coprime, got p={p}, q={q}")
    if n is not None and n % p == 0:
        raise LensParameterError(f"n must not be divisible by p (got n={n}, p={p})")
    return p, q % p, None if n is None else n % p


def _cell_id(pole: str, half: str, k: int) -> str:
    return f"{pole}{half}{k}"


def build_lens(p: int, q: int, labelling: Optional[Mapping[str, int]] = None) -> Triangulation:
    """
    Closed oriented triangulation of L(p, q) with 4p tetrahedra on the vertices 1..4.

    Cells are named N/S (upper or lower half of the bipyramid), a/b (first or
    second half of the wedge) and the wedge index k: 'Na0', 'Nb0', ...

    Args:
        p: Order of the lens space (>= 2)
        q: Rotation parameter, coprime to p
        labelling: Vertex class -> label (default DEFAULT_LABELLING)

    Returns:
        Triangulation: Closed, oriented, first cell 'Na0' positive

    Raises:
        LensParameterError: If (p, q) or the labelling are invalid
    """
    p, q, _ = check_lens_parameters(p, q)
    labels = validate_labelling(labelling or DEFAULT_LABELLING)
    slot = {cls: label - 1 for cls, label in labels.items()}
    vertices = (1, 2, 3, 4)

    ids: List[str] = []
    for pole in 'NS':
        for k in range(p):
            ids.extend([_cell_id(pole, 'a', k), _cell_id(pole, 'b', k)])
    cells = [Cell(cell_id, vertices) for cell_id in ids]

    gluings: List[Gluing] = []

    def glue(left: str, right: str, cls: str) -> None:
        gluings.append(((left, slot[cls]), (right, slot[cls])))

    for k in range(p):
        for pole in 'NS':
            a, b = _cell_id(pole, 'a', k), _cell_id(pole, 'b', k)
            # (pole, O, v_k, M_k) and (pole, O, M_k, v_{k+1}) share (pole, O, M_k)
            glue(a, b, 'vertex')
            # (pole, O, M_k, v_{k+1}) and (pole, O, v_{k+1}, M_{k+1}) share (pole, O, v_{k+1})
            glue(b, _cell_id(pole, 'a', (k + 1) % p), 'midpoint')
        # upper and lower wedge halves share (O, v, M)
        glue(_cell_id('N', 'a', k), _cell_id('S', 'a', k), 'pole')
        glue(_cell_id('N', 'b', k), _cell_id('S', 'b', k), 'pole')
        # lens identification: upper surface onto lower surface rotated by q
        glue(_cell_id('N', 'a', k), _cell_id('S', 'a', (k + q) % p), 'centre')
        glue(_cell_id('N', 'b', k), _cell_id('S', 'b', (k + q) % p), 'centre')

    t = orient(Triangulation(3, cells, gluings))
    problems = t.validate()
    if problems or not t.is_closed():
        raise TriangulationError(f"Lens construction L({p},{q}) failed validation: {problems[:3]}")
    logger.debug(f"Built L({p},{q}): {len(t)} tetrahedra, {len(t.faces(1))} edges, "
                 f"Euler characteristic {t.euler_characteristic()}")
    return t


def chain_cells(p: int, n: int) -> Tuple[str, str]:
    """The two tetrahedra related by the rotation through 2 pi n / p."""
    return _cell_id('N', 'a', 0), _cell_id('N', 'a', n % p)


def excise_chain_and_double(t: Triangulation, n: int, p: Optional[int] = None,
                            chain: Optional[Tuple[CellId, CellId]] = None) -> Triangulation:
    """
    Remove a chain of two tetrahedra from a lens triangulation.

    The two removed cells share exactly two disjoint edges (pole-centre and
    vertex-midpoint). Removing them opens the links of those edges into two
    paths each, so each edge class splits in two and the boundary becomes a
    torus of 8 triangles.

    Args:
        t: Triangulation from build_lens
        n: Rotation offset of the second chain cell (n != 0 mod p)
        p: Order of the lens space (default: number of cells / 4)
        chain: Explicit pair of cell ids (overrides n)

    Returns:
        Triangulation: 4p - 2 tetrahedra with orientation kept

    Raises:
        LensParameterError: If n = 0 mod p
        ChainPatternError: If the cells do not form a chain of two tetrahedra
    """
    if p is None:
        p = len(t) // 4
    if chain is None:
        if n % p == 0:
            raise LensParameterError(f"n must not be divisible by p (got n={n}, p={p})")
        chain = chain_cells(p, n)
    first, second = chain
    if first == second or first not in t or second not in t:
        raise ChainPatternError(f"Chain cells {chain} are not two distinct cells of the complex", cell=first)

    shared = _shared_edge_classes(t, first, second)
    if len(shared) != 2 or set(shared[0].vertices) & set(shared[1].vertices):
        names = [face.name for face in shared]
        raise ChainPatternError(f"Cells {first!r} and {second!r} share the edges {names}; "
                                f"a chain of two tetrahedra shares exactly two disjoint edges", cell=first)
    for slot in range(4):
        partner = t.partner(first, slot)
        if partner is not None and partner[0] == second:
            raise ChainPatternError(f"Chain cells {first!r} and {second!r} are glued along a facet",
                                    cell=first, slot=slot)

    removed = {first, second}
    cells = [c for c in t.cells() if c.id not in removed]
    gluings = [g for g in t.gluings() if g[0][0] not in removed and g[1][0] not in removed]
    result = Triangulation(3, cells, gluings)
    logger.debug(f"Excised chain {chain}: {len(result)} tetrahedra, "
                 f"{len(result.boundary_facets())} boundary triangles, "
                 f"doubled edges {[face.name for face in shared]}")
    return result


def _shared_edge_classes(t: Triangulation, first: CellId, second: CellId):
    edges_first = {t.face_of(first, e).name: t.face_of(first, e)
                   for e in combinations(t.cell(first).vertices, 2)}
    edges_second = {t.face_of(second, e).name for e in combinations(t.cell(second).vertices, 2)}
    return [face for name, face in edges_first.items() if name in edges_second]


def lens_complement(p: int, q: int, n: int, labelling: Optional[Mapping[str, int]] = None) -> Triangulation:
    """build_lens followed by excise_chain_and_double."""
    p, q, n = check_lens_parameters(p, q, n)
    return excise_chain_and_double(build_lens(p, q, labelling), n, p=p)
