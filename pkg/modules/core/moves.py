"""
Relative Pachner moves on glued-cell triangulations.

Every supported move is a bistellar flip. The site spans a vertex set U with
d + 2 vertices (d the dimension); the left-hand cells are U minus b for b in
a set B, the right-hand cells are U minus x for x in A = U minus B. The move
1 -> d+1 is the case where B holds only the new vertex. Facets on the
boundary of the site are handed from the old cells to the new ones, so the
boundary of the site and everything outside it stay untouched.
"""

import json
import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from modules.core.errors import MoveSiteError
from modules.core.triangulation import Cell, CellId, Gluing, Triangulation, orient, simplex_name

logger = logging.getLogger('pachnercalc.moves')

# move -> (dimension, number of cells on the left, number on the right)
MOVES: Dict[str, Tuple[int, int, int]] = {
    '2-3': (3, 2, 3),
    '3-2': (3, 3, 2),
    '1-4': (3, 1, 4),
    '4-1': (3, 4, 1),
    '3-3': (4, 3, 3),
    '2-4': (4, 2, 4),
    '4-2': (4, 4, 2),
}

INVERSE_MOVES = {'2-3': '3-2', '3-2': '2-3', '1-4': '4-1', '4-1': '1-4', '3-3': '3-3', '2-4': '4-2', '4-2': '2-4'}


def _parse_move(move: str) -> Tuple[int, int, int]:
    key = move.replace('->', '-').replace('→', '-').strip()
    if key not in MOVES:
        raise MoveSiteError(f"Unknown move {move!r}; expected one of {', '.join(MOVES)}")
    return MOVES[key]


def _fresh_id(vertices: Tuple[int, ...], taken: set, numeric: bool, counter: List[int]) -> CellId:
    if numeric:
        counter[0] += 1
        while counter[0] in taken:
            counter[0] += 1
        return counter[0]
    base = simplex_name(vertices)
    candidate = base
    k = 1
    while candidate in taken:
        k += 1
        candidate = f"{base}~{k}"
    return candidate


@dataclass(frozen=True)
class _Site:
    vertices: Tuple[int, ...]          # U
    removed: Dict[CellId, int]          # site cell -> b (the vertex of U it misses)
    added: Tuple[int, ...]              # A, ascending


def _analyse_site(t: Triangulation, move: str, site: Sequence[CellId], new_vertex: Optional[int]) -> _Site:
    dimension, n_left, n_right = _parse_move(move)
    if t.dimension != dimension:
        raise MoveSiteError(f"Move {move} needs a {dimension}D triangulation, got {t.dimension}D")
    site = list(site)
    if len(site) != n_left or len(set(site)) != n_left:
        raise MoveSiteError(f"Move {move} needs {n_left} distinct cells, got {site}")
    cells = [t.cell(c) for c in site]

    if n_left == 1:
        cell = cells[0]
        if new_vertex is None:
            new_vertex = max(t.vertices()) + 1
        if new_vertex in t.vertices():
            raise MoveSiteError(f"New vertex {new_vertex} is already used", cell=cell.id)
        vertices = tuple(sorted(cell.vertices + (new_vertex,)))
        return _Site(vertices, {cell.id: new_vertex}, tuple(cell.vertices))

    if new_vertex is not None:
        raise MoveSiteError(f"Move {move} does not take a new vertex")
    vertices = tuple(sorted({v for c in cells for v in c.vertices}))
    if len(vertices) != dimension + 2:
        raise MoveSiteError(f"Site cells span {len(vertices)} vertices, a {move} site spans {dimension + 2}",
                            cell=site[0])
    removed: Dict[CellId, int] = {}
    for cell in cells:
        missing = set(vertices) - set(cell.vertices)
        (b,) = missing
        if b in removed.values():
            raise MoveSiteError(f"Cells of the site repeat the vertex set {cell.vertices}", cell=cell.id)
        removed[cell.id] = b
    added = tuple(v for v in vertices if v not in removed.values())

    # the site cells must be glued to each other along every shared facet
    for (c1, b1), (c2, b2) in combinations(removed.items(), 2):
        slot1 = t.cell(c1).slot_omitting(b2)
        slot2 = t.cell(c2).slot_omitting(b1)
        if t.partner(c1, slot1) != (c2, slot2):
            raise MoveSiteError(f"Cells {c1!r} and {c2!r} are not glued along their common facet",
                                cell=c1, slot=slot1)
    # external facets must leave the site
    site_set = set(site)
    for cell_id, b in removed.items():
        cell = t.cell(cell_id)
        for x in added:
            partner = t.partner(cell_id, cell.slot_omitting(x))
            if partner is not None and partner[0] in site_set:
                raise MoveSiteError(f"External facet of {cell_id!r} is glued back into the site",
                                    cell=cell_id, slot=cell.slot_omitting(x))
    if len(added) == 1:
        (x,) = added
        outside = [c.id for c in t.cells() if c.id not in site_set and x in c.vertices]
        if outside:
            raise MoveSiteError(f"Vertex {x} is not an interior vertex of valence {n_left}; "
                                f"it also lies in {outside[:3]}", cell=outside[0])
    return _Site(vertices, removed, added)


def pachner_move(t: Triangulation, move: str, site: Sequence[CellId],
                 new_vertex: Optional[int] = None) -> Triangulation:
    """
    Apply a relative Pachner move.

    Args:
        t: Triangulation
        move: '2-3', '3-2', '1-4', '4-1' in 3D; '3-3', '2-4', '4-2' in 4D
        site: Ids of the cells on the left-hand side
        new_vertex: Number of the added vertex for '1-4' (default: max + 1)

    Returns:
        Triangulation: New complex; cells outside the site keep their ids,
        orientation signs are carried over when the input is oriented

    Raises:
        MoveSiteError: If the site does not match the move's configuration
    """
    info = _analyse_site(t, move, site, new_vertex)
    site_set = set(info.removed)
    kept = [c for c in t.cells() if c.id not in site_set]
    taken = {c.id for c in kept}
    numeric = all(isinstance(c.id, int) for c in t.cells())
    counter = [max((c.id for c in kept), default=0) if numeric else 0]

    u = info.vertices
    # reference cell on the left for orientation transport
    ref_id, ref_b = next(iter(info.removed.items()))
    ref = t.cell(ref_id)

    new_cells: Dict[int, Cell] = {}
    for x in sorted(info.added, key=lambda v: tuple(w for w in u if w != v)):
        vertices = tuple(w for w in u if w != x)
        epsilon = None
        if ref.epsilon is not None:
            slot_old = ref.slot_omitting(x)
            slot_new = vertices.index(ref_b)
            epsilon = ref.epsilon * (-1) ** (slot_old + slot_new)
        cell_id = _fresh_id(vertices, taken, numeric, counter)
        taken.add(cell_id)
        new_cells[x] = Cell(cell_id, vertices, epsilon)

    gluings: List[Gluing] = [g for g in t.gluings() if g[0][0] not in site_set and g[1][0] not in site_set]
    for cell_id, b in info.removed.items():
        cell = t.cell(cell_id)
        for x in info.added:
            partner = t.partner(cell_id, cell.slot_omitting(x))
            if partner is not None:
                target = new_cells[x]
                gluings.append(((target.id, target.vertices.index(b)), partner))
    for x1, x2 in combinations(sorted(info.added), 2):
        c1, c2 = new_cells[x1], new_cells[x2]
        gluings.append(((c1.id, c1.vertices.index(x2)), (c2.id, c2.vertices.index(x1))))

    result = Triangulation(t.dimension, kept + list(new_cells.values()), gluings)
    logger.debug(f"Move {move} on {list(site)}: {len(site_set)} cells replaced by "
                 f"{[c.id for c in new_cells.values()]}")
    return result


def move_sites(t: Triangulation, move: str) -> List[Tuple[CellId, ...]]:
    """All cell tuples (in canonical cell order) at which `move` can be applied."""
    dimension, n_left, _ = _parse_move(move)
    if t.dimension != dimension:
        return []
    order = {c: k for k, c in enumerate(t.cell_ids())}
    if n_left == 1:
        return [(c,) for c in t.cell_ids()]
    candidates = {frozenset([c]) for c in t.cell_ids()}
    for _ in range(n_left - 1):
        grown = set()
        for group in candidates:
            for cell_id in group:
                for slot in range(dimension + 1):
                    partner = t.partner(cell_id, slot)
                    if partner is not None and partner[0] not in group:
                        grown.add(group | {partner[0]})
        candidates = grown
    sites = []
    for group in candidates:
        site = tuple(sorted(group, key=order.get))
        try:
            _analyse_site(t, move, site, None)
        except MoveSiteError:
            continue
        sites.append(site)
    return sorted(sites, key=lambda s: [order[c] for c in s])


@dataclass(frozen=True)
class MoveCluster:
    """Oriented left- and right-hand configurations of a move, sharing their boundary."""

    move: str
    lhs: Triangulation
    rhs: Triangulation

    def side(self, name: str) -> Triangulation:
        if name not in ('lhs', 'rhs'):
            raise MoveSiteError(f"Side must be 'lhs' or 'rhs', got {name!r}")
        return self.lhs if name == 'lhs' else self.rhs


# move -> (dimension, left-hand cells, new vertex, epsilon of the first cell)
_CLUSTER_SITES: Dict[str, Tuple[int, Tuple[Tuple[int, ...], ...], Optional[int], int]] = {
    '2-3': (3, ((1, 2, 3, 4), (1, 2, 3, 5)), None, 1),
    # the 1-4 identity holds for one global orientation only: the one with 1234 negative
    '1-4': (3, ((1, 2, 3, 4),), 5, -1),
    '3-3': (4, ((1, 2, 3, 4, 5), (1, 2, 3, 4, 6), (1, 2, 3, 5, 6)), None, 1),
    '2-4': (4, ((1, 2, 3, 4, 5), (1, 2, 3, 4, 6)), None, 1),
}


def move_cluster(move: str) -> MoveCluster:
    """
    Standard configuration of a move with the vertex numbering used throughout.

    The left-hand cells are glued along their common facets and oriented from
    the sign listed for the first cell (negative only for 1-4); the right-hand
    side is produced by the move, so both sides share one orientation.
    Inverse moves swap the sides.
    """
    key = move.replace('->', '-').strip()
    _parse_move(key)
    if key in _CLUSTER_SITES:
        dimension, cells, new_vertex, sign = _CLUSTER_SITES[key]
        lhs = orient(Triangulation.from_cells(dimension, [Cell(simplex_name(v), v) for v in cells]))
        if sign < 0:
            lhs = lhs.with_epsilons({c.id: -c.epsilon for c in lhs.cells()})
        rhs = pachner_move(lhs, key, lhs.cell_ids(), new_vertex=new_vertex)
        return MoveCluster(key, lhs, rhs)
    forward = move_cluster(INVERSE_MOVES[key])
    return MoveCluster(key, forward.rhs, forward.lhs)


def cluster_to_json(cluster: MoveCluster, side: str) -> str:
    """Serialized triangulation of one side of a move cluster."""
    return cluster.side(side).to_json()


def boundary_signature(t: Triangulation) -> List[Tuple[Tuple[int, ...], int]]:
    """
    Boundary facets as (vertex labels, induced orientation sign), sorted.

    Relative moves leave this list unchanged.
    """
    signature = []
    for cell_id, slot in t.boundary_facets():
        cell = t.cell(cell_id)
        sign = cell.induced_sign(slot) if cell.epsilon is not None else 0
        signature.append((cell.facet(slot), sign))
    return sorted(signature)


def clusters_json(moves: Iterable[str]) -> str:
    """All requested clusters as one JSON document (used for fixtures and reports)."""
    data = {}
    for move in moves:
        cluster = move_cluster(move)
        data[move] = {'lhs': cluster.lhs.to_dict(), 'rhs': cluster.rhs.to_dict()}
    return json.dumps(data, indent=2) + '\n'
