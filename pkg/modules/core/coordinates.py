"""
Leading-vertex coordinates on simplices and the local blocks of the chain maps.

A vector living on a k-simplex (k >= 2) has one coordinate per vertex, subject
to the two relations sum y_i = 0 and sum zeta_i y_i = 0. The k-1 smallest
vertices carry the free coordinates; the two largest are dependent. Every
chain-map block in 3D and 4D is assembled here from those relations, so the
matrices and the Grassmann weights read their coefficients from one place.
"""

from fractions import Fraction
from typing import Dict, Sequence, Tuple

from modules.core.scalars import Scalar, ZetaAssignment

Coefficients = Dict[int, Scalar]


def free_vertices(vertices: Sequence[int]) -> Tuple[int, ...]:
    """Vertices that carry free coordinates (all but the two largest)."""
    return tuple(vertices[:-2])


def dependent_coefficients(z: ZetaAssignment, vertices: Sequence[int]) -> Dict[int, Coefficients]:
    """
    Express every vertex coordinate through the free ones.

    For dependent vertices p < q and a free vertex f:
    y_p = -zeta_fq / zeta_pq * y_f and y_q = zeta_fp / zeta_pq * y_f.

    Args:
        z: Zeta assignment
        vertices: Ascending vertices of a simplex with at least 3 vertices

    Returns:
        dict: vertex -> {free vertex: coefficient}
    """
    if len(vertices) < 3:
        raise ValueError(f"Coordinates need a simplex with at least 3 vertices, got {tuple(vertices)}")
    free = free_vertices(vertices)
    p, q = vertices[-2], vertices[-1]
    zpq = z.diff(p, q)
    table: Dict[int, Coefficients] = {f: {f: Fraction(1)} for f in free}
    table[p] = {f: -z.diff(f, q) / zpq for f in free}
    table[q] = {f: z.diff(f, p) / zpq for f in free}
    return table


def facet_incidence(slot: int, dimension: int) -> int:
    """Sign with which the facet in `slot` enters the boundary block of a cell."""
    return -1 if (slot + dimension) % 2 else 1


def boundary_block(z: ZetaAssignment, vertices: Sequence[int]) -> Dict[int, Dict[Tuple[int, int], Scalar]]:
    """
    Local block of the map from facet coordinates to cell coordinates.

    Row v (a free vertex of the cell) collects, for every facet through v,
    the facet's coordinate at v written in the facet's free coordinates.
    In 3D this is the 2x4 block of the tetrahedron weight; in 4D the same
    rule gives both the 2-face -> 3-face and the 3-face -> 4-simplex blocks.

    Args:
        z: Zeta assignment
        vertices: Ascending vertices of the cell (4 or 5 of them)

    Returns:
        dict: free vertex v -> {(facet slot, facet free vertex): coefficient}
    """
    vertices = tuple(vertices)
    dimension = len(vertices) - 1
    block: Dict[int, Dict[Tuple[int, int], Scalar]] = {v: {} for v in free_vertices(vertices)}
    for slot in range(dimension + 1):
        facet = vertices[:slot] + vertices[slot + 1:]
        sign = facet_incidence(slot, dimension)
        local = dependent_coefficients(z, facet)
        for v, row in block.items():
            if v not in local:
                continue
            for f, coefficient in local[v].items():
                value = row.get((slot, f), Fraction(0)) + sign * coefficient
                if value:
                    row[(slot, f)] = value
                else:
                    row.pop((slot, f), None)
    return block


def face_vertex_coefficients(z: ZetaAssignment, face: Sequence[int]) -> Coefficients:
    """
    Coefficients of u_i in the leading coordinate of a 2-face (i, j, k).

    These are the entries of f2 and of the vertex-face operators.
    """
    i, j, k = face
    zij, zik = z.diff(i, j), z.diff(i, k)
    return {i: 1 / zij - 1 / zik, j: -1 / zij, k: 1 / zik}


def vertex_cell_coefficients(z: ZetaAssignment, vertices: Sequence[int], epsilon: int) -> Dict[int, Coefficients]:
    """
    Orientation-weighted coefficients of y_{r,i} in the two free coordinates
    of a tetrahedron: the entries of f4 and of the vertex-tetrahedron operators.
    """
    return {v: {f: epsilon * c for f, c in row.items()}
            for v, row in dependent_coefficients(z, vertices).items()}


def face_label(name: str) -> str:
    """Grassmann label of a 2-face variable."""
    return f"a{name}"


def tetra_labels(cell_id) -> Tuple[str, str]:
    """Grassmann labels of the two variables of a tetrahedron."""
    return f"b{cell_id}.1", f"b{cell_id}.2"
