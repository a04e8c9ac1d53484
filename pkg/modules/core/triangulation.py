"""
Glued-cell triangulations in three and four dimensions.

A Triangulation is a list of top cells (tetrahedra or 4-simplices) with
global vertex numbers and explicit facet gluings. Several cells may share the
same vertex tuple, so cells are always referred to by id. Lower-dimensional
faces are equivalence classes of (cell, vertex subset) pairs generated by the
gluings; a face is inner iff none of its representatives lies in an unglued
facet.

Facet slot k of a cell is the facet omitting its k-th vertex (ascending
order). The orientation sign epsilon induces the sign epsilon * (-1)^k on
slot k; a consistent orientation gives opposite induced signs on the two
sides of every gluing.
"""

import json
import logging
from collections import deque
from dataclasses import dataclass, field, replace
from itertools import combinations
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from modules.core.errors import ConfigError, OrientationError, TriangulationError

logger = logging.getLogger('pachnercalc.triangulation')

CellId = Union[int, str]
Slot = Tuple[CellId, int]
Gluing = Tuple[Slot, Slot]
FaceMember = Tuple[CellId, Tuple[int, ...]]


def simplex_name(vertices: Sequence[int]) -> str:
    """'1234' for single-digit vertices, '1-2-10' otherwise."""
    if all(0 <= v <= 9 for v in vertices):
        return ''.join(str(v) for v in vertices)
    return '-'.join(str(v) for v in vertices)


def permutation_sign(sequence: Sequence[int]) -> int:
    """Sign of the permutation sorting `sequence` (distinct entries)."""
    inversions = sum(1 for a, b in combinations(sequence, 2) if a > b)
    return -1 if inversions % 2 else 1


@dataclass(frozen=True)
class Cell:
    """A top cell: id, strictly ascending vertex numbers and an optional orientation sign."""

    id: CellId
    vertices: Tuple[int, ...]
    epsilon: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, 'vertices', tuple(int(v) for v in self.vertices))
        if any(a >= b for a, b in zip(self.vertices, self.vertices[1:])):
            raise TriangulationError(f"Cell {self.id}: vertices {self.vertices} are not strictly ascending",
                                     cell=self.id)
        if self.epsilon not in (None, 1, -1):
            raise TriangulationError(f"Cell {self.id}: orientation must be +1 or -1", cell=self.id)

    @property
    def dimension(self) -> int:
        return len(self.vertices) - 1

    @property
    def name(self) -> str:
        return simplex_name(self.vertices)

    def facet(self, slot: int) -> Tuple[int, ...]:
        return self.vertices[:slot] + self.vertices[slot + 1:]

    def slot_omitting(self, vertex: int) -> int:
        try:
            return self.vertices.index(vertex)
        except ValueError:
            raise TriangulationError(f"Cell {self.id} has no vertex {vertex}", cell=self.id) from None

    def slot_of(self, facet_vertices: Iterable[int]) -> int:
        missing = set(self.vertices) - set(facet_vertices)
        if len(missing) != 1:
            raise TriangulationError(f"{tuple(facet_vertices)} is not a facet of cell {self.id}", cell=self.id)
        return self.slot_omitting(missing.pop())

    def induced_sign(self, slot: int) -> int:
        if self.epsilon is None:
            raise OrientationError(f"Cell {self.id} has no orientation", cell=self.id)
        return self.epsilon * (-1) ** slot


@dataclass(frozen=True)
class Face:
    """
    Equivalence class of cell faces of one dimension.

    Attributes:
        vertices: Vertex numbers (ascending)
        members: Every (cell id, vertex subset) representing the face
        inner: True iff no member lies in an unglued facet
        name: Vertex string, with '#k' appended when several faces share the labels
    """

    vertices: Tuple[int, ...]
    members: Tuple[FaceMember, ...]
    inner: bool
    name: str

    @property
    def dimension(self) -> int:
        return len(self.vertices) - 1

    @property
    def key(self) -> FaceMember:
        return self.members[0]


@dataclass
class Classification:
    """Inner/boundary tables of a triangulation."""

    dimension: int
    inner_vertices: List[int]
    boundary_vertices: List[int]
    faces: Dict[int, List[Face]] = field(default_factory=dict)

    def counts(self) -> Dict[str, int]:
        """N0, N0', and per dimension k the totals Nk and inner counts Nk'."""
        counts = {'N0': len(self.inner_vertices) + len(self.boundary_vertices), "N0'": len(self.inner_vertices)}
        for k, faces in sorted(self.faces.items()):
            counts[f'N{k}'] = len(faces)
            counts[f"N{k}'"] = sum(1 for f in faces if f.inner)
        return counts


class _UnionFind:
    def __init__(self):
        self.parent: Dict[FaceMember, FaceMember] = {}

    def add(self, item: FaceMember) -> None:
        self.parent.setdefault(item, item)

    def find(self, item: FaceMember) -> FaceMember:
        root = item
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[item] != root:
            self.parent[item], item = root, self.parent[item]
        return root

    def union(self, a: FaceMember, b: FaceMember) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


class Triangulation:
    """
    Immutable glued-cell complex.

    Args:
        dimension: 3 or 4
        cells: Top cells in their canonical order
        gluings: Pairs of facet slots ((cell, slot), (cell, slot))
    """

    def __init__(self, dimension: int, cells: Iterable[Cell], gluings: Iterable[Gluing]):
        if dimension not in (3, 4):
            raise TriangulationError(f"Unsupported dimension {dimension}")
        self.dimension = dimension
        self._cells: Dict[CellId, Cell] = {}
        for cell in cells:
            if cell.id in self._cells:
                raise TriangulationError(f"Duplicate cell id {cell.id!r}", cell=cell.id)
            if cell.dimension != dimension:
                raise TriangulationError(f"Cell {cell.id} has {len(cell.vertices)} vertices, "
                                         f"expected {dimension + 1}", cell=cell.id)
            self._cells[cell.id] = cell
        self._gluings: List[Gluing] = []
        self._partner: Dict[Slot, Slot] = {}
        for (a, sa), (b, sb) in gluings:
            self._add_gluing((a, int(sa)), (b, int(sb)))
        self._face_cache: Dict[int, List[Face]] = {}
        self._face_lookup: Dict[int, Dict[FaceMember, Face]] = {}

    def _add_gluing(self, left: Slot, right: Slot) -> None:
        for cell_id, slot in (left, right):
            if cell_id not in self._cells:
                raise TriangulationError(f"Gluing refers to unknown cell {cell_id!r}", cell=cell_id, slot=slot)
            if not 0 <= slot <= self.dimension:
                raise TriangulationError(f"Slot {slot} out of range for cell {cell_id!r}", cell=cell_id, slot=slot)
            if (cell_id, slot) in self._partner:
                raise TriangulationError(f"Facet slot {slot} of cell {cell_id!r} is glued twice",
                                         cell=cell_id, slot=slot)
        if left == right:
            raise TriangulationError(f"Facet slot {left[1]} of cell {left[0]!r} glued to itself",
                                     cell=left[0], slot=left[1])
        facet_left = self._cells[left[0]].facet(left[1])
        facet_right = self._cells[right[0]].facet(right[1])
        if facet_left != facet_right:
            raise TriangulationError(
                f"Gluing labels differ: {left[0]!r} slot {left[1]} is {facet_left}, "
                f"{right[0]!r} slot {right[1]} is {facet_right}", cell=right[0], slot=right[1])
        self._partner[left] = right
        self._partner[right] = left
        self._gluings.append((left, right))

    # -- construction helpers -------------------------------------------

    @classmethod
    def from_cells(cls, dimension: int, cells: Iterable[Cell]) -> 'Triangulation':
        """
        Glue every facet label set shared by exactly two cells.

        Only suitable for complexes in which vertex labels identify facets.
        """
        cells = list(cells)
        holders: Dict[Tuple[int, ...], List[Slot]] = {}
        for cell in cells:
            for slot in range(dimension + 1):
                holders.setdefault(cell.facet(slot), []).append((cell.id, slot))
        gluings = []
        for facet, slots in holders.items():
            if len(slots) > 2:
                raise TriangulationError(f"Facet {facet} is shared by {len(slots)} cells")
            if len(slots) == 2:
                gluings.append((slots[0], slots[1]))
        return cls(dimension, cells, gluings)

    def with_cells(self, cells: Iterable[Cell]) -> 'Triangulation':
        """Same gluings, replaced cell records (e.g. new orientation signs)."""
        return Triangulation(self.dimension, cells, self._gluings)

    def with_epsilons(self, epsilons: Mapping[CellId, Optional[int]]) -> 'Triangulation':
        """Override orientation signs of selected cells without any consistency check."""
        return self.with_cells(replace(c, epsilon=epsilons.get(c.id, c.epsilon)) for c in self.cells())

    def renumbered(self, mapping: Mapping[int, int]) -> 'Triangulation':
        """
        Rename vertices (unlisted vertices keep their numbers).

        Slots are re-indexed to the new ascending order and every epsilon is
        multiplied by the sign of the reordering, so the geometric
        orientation is preserved.
        """
        targets = [mapping.get(v, v) for v in self.vertices()]
        if len(set(targets)) != len(targets):
            raise TriangulationError(f"Renumbering {dict(mapping)} merges vertices")
        cells = []
        slot_maps: Dict[CellId, List[int]] = {}
        for cell in self._cells.values():
            mapped = [mapping.get(v, v) for v in cell.vertices]
            ordered = tuple(sorted(mapped))
            slot_maps[cell.id] = [ordered.index(v) for v in mapped]
            epsilon = None if cell.epsilon is None else cell.epsilon * permutation_sign(mapped)
            cells.append(Cell(cell.id, ordered, epsilon))
        gluings = [((a, slot_maps[a][sa]), (b, slot_maps[b][sb])) for (a, sa), (b, sb) in self._gluings]
        return Triangulation(self.dimension, cells, gluings)

    # -- queries --------------------------------------------------------

    def cells(self) -> List[Cell]:
        return list(self._cells.values())

    def cell(self, cell_id: CellId) -> Cell:
        try:
            return self._cells[cell_id]
        except KeyError:
            raise TriangulationError(f"Unknown cell {cell_id!r}", cell=cell_id) from None

    def cell_ids(self) -> List[CellId]:
        return list(self._cells)

    def __contains__(self, cell_id: object) -> bool:
        return cell_id in self._cells

    def __len__(self) -> int:
        return len(self._cells)

    def __repr__(self) -> str:
        return (f"Triangulation(dimension={self.dimension}, cells={len(self._cells)}, "
                f"gluings={len(self._gluings)})")

    def gluings(self) -> List[Gluing]:
        return list(self._gluings)

    def partner(self, cell_id: CellId, slot: int) -> Optional[Slot]:
        return self._partner.get((cell_id, slot))

    def boundary_facets(self) -> List[Slot]:
        return [(c.id, s) for c in self._cells.values() for s in range(self.dimension + 1)
                if (c.id, s) not in self._partner]

    def is_closed(self) -> bool:
        return not self.boundary_facets()

    def vertices(self) -> List[int]:
        return sorted({v for c in self._cells.values() for v in c.vertices})

    def boundary_vertices(self) -> List[int]:
        found = set()
        for cell_id, slot in self.boundary_facets():
            found.update(self._cells[cell_id].facet(slot))
        return sorted(found)

    def inner_vertices(self) -> List[int]:
        boundary = set(self.boundary_vertices())
        return [v for v in self.vertices() if v not in boundary]

    def cells_containing(self, vertex: int) -> List[CellId]:
        return [c.id for c in self._cells.values() if vertex in c.vertices]

    # -- faces ----------------------------------------------------------

    def faces(self, k: int) -> List[Face]:
        """
        All k-dimensional faces (0 <= k < dimension), in order of first occurrence.

        Order: cells in canonical order, subsets of each cell lexicographically.
        """
        if not 0 <= k < self.dimension:
            raise TriangulationError(f"No faces of dimension {k} in a {self.dimension}D complex")
        if k in self._face_cache:
            return self._face_cache[k]
        union = _UnionFind()
        ordered: List[FaceMember] = []
        for cell in self._cells.values():
            for subset in combinations(cell.vertices, k + 1):
                member = (cell.id, subset)
                union.add(member)
                ordered.append(member)
        for (a, sa), (b, _) in self._gluings:
            facet = self._cells[a].facet(sa)
            for subset in combinations(facet, k + 1):
                union.union((a, subset), (b, subset))

        boundary_sets = {}
        for cell_id, slot in self.boundary_facets():
            boundary_sets.setdefault(cell_id, []).append(set(self._cells[cell_id].facet(slot)))

        classes: Dict[FaceMember, List[FaceMember]] = {}
        for member in ordered:
            classes.setdefault(union.find(member), []).append(member)

        label_counts: Dict[Tuple[int, ...], int] = {}
        for members in classes.values():
            label_counts[members[0][1]] = label_counts.get(members[0][1], 0) + 1

        seen_labels: Dict[Tuple[int, ...], int] = {}
        faces: List[Face] = []
        lookup: Dict[FaceMember, Face] = {}
        for members in classes.values():
            vertices = members[0][1]
            on_boundary = any(set(subset) <= facet
                              for cell_id, subset in members
                              for facet in boundary_sets.get(cell_id, ()))
            name = simplex_name(vertices)
            if label_counts[vertices] > 1:
                seen_labels[vertices] = seen_labels.get(vertices, 0) + 1
                name = f"{name}#{seen_labels[vertices]}"
            face = Face(vertices=vertices, members=tuple(members), inner=not on_boundary, name=name)
            faces.append(face)
            for member in members:
                lookup[member] = face
        self._face_cache[k] = faces
        self._face_lookup[k] = lookup
        return faces

    def face_of(self, cell_id: CellId, subset: Sequence[int]) -> Face:
        """The face class of a vertex subset of a cell."""
        subset = tuple(sorted(subset))
        k = len(subset) - 1
        self.faces(k)
        try:
            return self._face_lookup[k][(cell_id, subset)]
        except KeyError:
            raise TriangulationError(f"Cell {cell_id!r} has no face {subset}", cell=cell_id) from None

    def facet_face(self, cell_id: CellId, slot: int) -> Face:
        return self.face_of(cell_id, self.cell(cell_id).facet(slot))

    def faces_by_name(self, k: int) -> Dict[str, Face]:
        return {face.name: face for face in self.faces(k)}

    def faces_with_vertices(self, vertices: Sequence[int]) -> List[Face]:
        vertices = tuple(sorted(vertices))
        return [f for f in self.faces(len(vertices) - 1) if f.vertices == vertices]

    def inner_faces(self, k: int) -> List[Face]:
        return [f for f in self.faces(k) if f.inner]

    def boundary_faces(self, k: int) -> List[Face]:
        return [f for f in self.faces(k) if not f.inner]

    # -- global invariants ----------------------------------------------

    def euler_characteristic(self) -> int:
        total = len(self.vertices())
        for k in range(1, self.dimension):
            total += (-1) ** k * len(self.faces(k))
        return total + (-1) ** self.dimension * len(self._cells)

    def boundary_euler_characteristic(self) -> int:
        """Euler characteristic of the boundary complex."""
        total = len(self.boundary_vertices())
        for k in range(1, self.dimension - 1):
            total += (-1) ** k * len(self.boundary_faces(k))
        return total + (-1) ** (self.dimension - 1) * len(self.boundary_facets())

    def orientation_problems(self) -> List[str]:
        """Gluings across which the induced facet orientations are not opposite."""
        problems = []
        for (a, sa), (b, sb) in self._gluings:
            cell_a, cell_b = self._cells[a], self._cells[b]
            if cell_a.epsilon is None or cell_b.epsilon is None:
                problems.append(f"unoriented cell in gluing {a!r}:{sa} ~ {b!r}:{sb}")
            elif cell_a.induced_sign(sa) != -cell_b.induced_sign(sb):
                problems.append(f"orientation clash across {a!r}:{sa} ~ {b!r}:{sb}")
        return problems

    def is_oriented(self) -> bool:
        return all(c.epsilon is not None for c in self._cells.values()) and not self.orientation_problems()

    def codim2_link_shape(self, face: Face) -> str:
        """
        'cycle' if the cells around a codimension-2 face close up, 'path' if
        they form an open chain ending on the boundary, 'broken' otherwise.
        """
        if face.dimension != self.dimension - 2:
            raise TriangulationError("Link shape is defined for codimension-2 faces only")
        members = set(face.members)
        glued = 0
        open_ends = 0
        for cell_id, subset in members:
            cell = self._cells[cell_id]
            for vertex in set(cell.vertices) - set(subset):
                partner = self._partner.get((cell_id, cell.slot_omitting(vertex)))
                if partner is None:
                    open_ends += 1
                else:
                    other = self._cells[partner[0]]
                    if (other.id, subset) in members:
                        glued += 1
        if open_ends == 0 and glued == 2 * len(members):
            shape = 'cycle'
        elif open_ends == 2 and glued == 2 * len(members) - 2:
            shape = 'path'
        else:
            return 'broken'
        # connectivity: walk around the face
        start = next(iter(members))
        seen = {start}
        queue = deque([start])
        while queue:
            cell_id, subset = queue.popleft()
            cell = self._cells[cell_id]
            for vertex in set(cell.vertices) - set(subset):
                partner = self._partner.get((cell_id, cell.slot_omitting(vertex)))
                if partner is not None and (partner[0], subset) not in seen:
                    seen.add((partner[0], subset))
                    queue.append((partner[0], subset))
        return shape if seen == members else 'broken'

    def validate(self) -> List[str]:
        """
        Structural checks beyond construction: orientation consistency and
        codimension-2 links (cycles for inner faces, paths for boundary faces).
        """
        problems = list(self.orientation_problems())
        for face in self.faces(self.dimension - 2):
            shape = self.codim2_link_shape(face)
            expected = 'cycle' if face.inner else 'path'
            if shape != expected:
                cells = ', '.join(repr(c) for c, _ in face.members)
                problems.append(f"link of face {face.name} is {shape}, expected {expected} (cells {cells})")
        return problems

    # -- serialization --------------------------------------------------

    def to_dict(self) -> dict:
        cells = []
        for cell in self._cells.values():
            record = {'id': cell.id, 'vertices': list(cell.vertices)}
            if cell.epsilon is not None:
                record['epsilon'] = cell.epsilon
            cells.append(record)
        return {
            'dimension': self.dimension,
            'cells': cells,
            'gluings': [[[a, sa], [b, sb]] for (a, sa), (b, sb) in self._gluings],
        }

    def to_json(self) -> str:
        """One cell or gluing per line; stable byte-for-byte."""
        data = self.to_dict()
        lines = ['{', f'  "dimension": {data["dimension"]},', '  "cells": [']
        lines.extend(f'    {json.dumps(c, ensure_ascii=False)}' + (',' if i < len(data['cells']) - 1 else '')
                     for i, c in enumerate(data['cells']))
        lines.append('  ],')
        lines.append('  "gluings": [')
        lines.extend(f'    {json.dumps(g, ensure_ascii=False)}' + (',' if i < len(data['gluings']) - 1 else '')
                     for i, g in enumerate(data['gluings']))
        lines.append('  ]')
        lines.append('}')
        return '\n'.join(lines) + '\n'

    @classmethod
    def from_dict(cls, data: Mapping) -> 'Triangulation':
        try:
            dimension = int(data['dimension'])
            cells = [Cell(id=record['id'], vertices=tuple(record['vertices']), epsilon=record.get('epsilon'))
                     for record in data['cells']]
            gluings = [((left[0], left[1]), (right[0], right[1])) for left, right in data.get('gluings', [])]
        except (KeyError, TypeError, ValueError, IndexError) as e:
            raise TriangulationError(f"Malformed triangulation data: {e}") from e
        return cls(dimension, cells, gluings)

    @classmethod
    def from_json(cls, text: str) -> 'Triangulation':
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise TriangulationError(f"Triangulation file is not valid JSON: {e}") from e
        return cls.from_dict(data)

    def combinatorial_signature(self) -> Tuple:
        """
        Id-free description for complexes whose cells have distinct vertex tuples.

        Two such complexes with equal signatures are isomorphic.
        """
        cells = tuple(sorted((c.vertices, c.epsilon or 0) for c in self._cells.values()))
        gluings = tuple(sorted(tuple(sorted(((self._cells[a].vertices, sa), (self._cells[b].vertices, sb))))
                               for (a, sa), (b, sb) in self._gluings))
        return cells, gluings


def classify(t: Triangulation) -> Classification:
    """
    Flag every face inner or boundary.

    Args:
        t: Triangulation

    Returns:
        Classification: Inner/boundary vertices and faces of dimensions 1..dim-1
    """
    return Classification(
        dimension=t.dimension,
        inner_vertices=t.inner_vertices(),
        boundary_vertices=t.boundary_vertices(),
        faces={k: t.faces(k) for k in range(1, t.dimension)},
    )


def orient(t: Triangulation, reference: Optional[CellId] = None) -> Triangulation:
    """
    Assign consistent orientation signs by propagation from a reference cell.

    Args:
        t: Triangulation
        reference: Cell that receives +1 (default: the first cell)

    Returns:
        Triangulation: Copy with every epsilon set

    Raises:
        OrientationError: If the complex is disconnected or non-orientable
    """
    cells = t.cells()
    if not cells:
        return t
    start = reference if reference is not None else cells[0].id
    signs: Dict[CellId, int] = {start: 1}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        cell = t.cell(current)
        for slot in range(t.dimension + 1):
            partner = t.partner(current, slot)
            if partner is None:
                continue
            other, other_slot = partner
            # induced signs must be opposite: eps_b (-1)^sb = -eps_a (-1)^sa
            sign = -signs[current] * (-1) ** (slot + other_slot)
            if other in signs:
                if signs[other] != sign:
                    raise OrientationError(f"Complex is not orientable (clash at cell {other!r})", cell=other)
            else:
                signs[other] = sign
                queue.append(other)
    if len(signs) != len(cells):
        missing = [c.id for c in cells if c.id not in signs]
        raise OrientationError(f"Complex is disconnected; unreachable cells: {missing[:5]}", cell=missing[0])
    logger.debug(f"Oriented {len(cells)} cells from reference {start!r}")
    return t.with_cells(replace(c, epsilon=signs[c.id]) for c in cells)


def oriented_link(t: Triangulation, face: Union[Face, Sequence[int]], strict: bool = False) -> List[Tuple[CellId, Tuple[int, int]]]:
    """
    Oriented link of a codimension-2 face (an edge in 3D, a 2-face in 4D).

    Each cell containing the face contributes the pair (i, j) of its two other
    vertices, ordered so that epsilon * sign(i, j, face...) = +1, where the
    face vertices follow the order given (ascending for a Face).

    Args:
        t: Oriented triangulation
        face: Face object, or vertex tuple (all faces with those labels)
        strict: Raise instead of returning [] when the labels are absent

    Returns:
        List of (cell id, (i, j))
    """
    if isinstance(face, Face):
        labels = face.vertices
        members = list(face.members)
    else:
        labels = tuple(face)
        if len(labels) != t.dimension - 1:
            raise TriangulationError(f"{labels} is not a codimension-2 face in {t.dimension}D")
        key = tuple(sorted(labels))
        members = [m for f in t.faces_with_vertices(key) for m in f.members]
    if not members:
        if strict:
            raise TriangulationError(f"Face {tuple(labels)} is not present")
        return []
    link = []
    for cell_id, _ in members:
        cell = t.cell(cell_id)
        if cell.epsilon is None:
            raise OrientationError(f"Cell {cell_id!r} has no orientation", cell=cell_id)
        i, j = [v for v in cell.vertices if v not in labels]
        sign = cell.epsilon * permutation_sign((i, j) + tuple(labels))
        link.append((cell_id, (i, j) if sign > 0 else (j, i)))
    return link


def oriented_link_of_edge(t: Triangulation, edge: Sequence[int], strict: bool = False) -> List[Tuple[CellId, Tuple[int, int]]]:
    """Oriented link of edge (k, l) in a 3D triangulation."""
    if t.dimension != 3:
        raise TriangulationError("oriented_link_of_edge needs a 3D triangulation")
    return oriented_link(t, edge, strict=strict)


def read_triangulation(path: Union[str, Path]) -> Triangulation:
    """Load a triangulation JSON file (UTF-8)."""
    try:
        text = Path(path).read_text(encoding='utf-8')
    except OSError as e:
        raise TriangulationError(f"Cannot read triangulation file {path}: {e}") from e
    return Triangulation.from_json(text)


def write_triangulation(t: Triangulation, path: Union[str, Path]) -> Path:
    """
    Write a triangulation JSON file (UTF-8), creating parent directories.

    Raises:
        ConfigError: If the file cannot be written
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(t.to_json(), encoding='utf-8')
    except OSError as e:
        raise ConfigError(f"Cannot write triangulation file {path}: {e}") from e
    return path
