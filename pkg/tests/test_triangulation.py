import json

import pytest

from modules.core.errors import ConfigError, OrientationError, TriangulationError
from modules.core.triangulation import (
    Cell,
    Triangulation,
    classify,
    orient,
    oriented_link,
    oriented_link_of_edge,
    read_triangulation,
    simplex_name,
    write_triangulation,
)


def two_tetrahedra() -> Triangulation:
    return orient(Triangulation.from_cells(3, [Cell('1234', (1, 2, 3, 4)), Cell('1235', (1, 2, 3, 5))]))


class TestCells:
    def test_simplex_name(self):
        assert simplex_name((1, 2, 3, 4)) == '1234'
        assert simplex_name((1, 2, 10)) == '1-2-10'

    def test_vertices_must_ascend(self):
        with pytest.raises(TriangulationError):
            Cell('x', (2, 1, 3, 4))

    def test_bad_orientation(self):
        with pytest.raises(TriangulationError):
            Cell('x', (1, 2, 3, 4), epsilon=2)

    def test_facets_and_induced_sign(self):
        cell = Cell('x', (1, 2, 3, 4), epsilon=-1)
        assert cell.facet(0) == (2, 3, 4)
        assert cell.slot_of((1, 2, 4)) == 2
        assert cell.induced_sign(1) == 1
        assert cell.induced_sign(2) == -1


class TestConstruction:
    def test_gluing_with_different_labels(self):
        cells = [Cell('a', (1, 2, 3, 4)), Cell('b', (1, 2, 3, 5))]
        with pytest.raises(TriangulationError) as info:
            Triangulation(3, cells, [(('a', 3), ('b', 2))])
        assert info.value.cell == 'b'
        assert info.value.slot == 2

    def test_slot_glued_twice(self):
        cells = [Cell('a', (1, 2, 3, 4)), Cell('b', (1, 2, 3, 5)), Cell('c', (1, 2, 3, 6))]
        with pytest.raises(TriangulationError) as info:
            Triangulation(3, cells, [(('a', 3), ('b', 3)), (('a', 3), ('c', 3))])
        assert info.value.cell == 'a'

    def test_unknown_cell(self):
        with pytest.raises(TriangulationError):
            Triangulation(3, [Cell('a', (1, 2, 3, 4))], [(('a', 0), ('z', 0))])

    def test_wrong_dimension(self):
        with pytest.raises(TriangulationError):
            Triangulation(3, [Cell('a', (1, 2, 3, 4, 5))], [])

    def test_facet_shared_by_three_cells(self):
        cells = [Cell(str(k), (1, 2, 3, k)) for k in (4, 5, 6)]
        with pytest.raises(TriangulationError):
            Triangulation.from_cells(3, cells)


class TestFaces:
    def test_counts(self):
        t = two_tetrahedra()
        counts = classify(t).counts()
        assert counts['N0'] == 5
        assert counts["N0'"] == 0
        assert counts['N1'] == 9
        assert counts["N1'"] == 0
        assert counts['N2'] == 7
        assert counts["N2'"] == 1
        assert [f.name for f in t.inner_faces(2)] == ['123']

    def test_euler_characteristics(self):
        t = two_tetrahedra()
        assert t.euler_characteristic() == 1
        assert t.boundary_euler_characteristic() == 2

    def test_face_of(self):
        t = two_tetrahedra()
        face = t.face_of('1235', (3, 1, 2))
        assert face.name == '123'
        assert face.inner
        assert len(face.members) == 2
        with pytest.raises(TriangulationError):
            t.face_of('1234', (1, 2, 5))

    def test_no_faces_of_top_dimension(self):
        with pytest.raises(TriangulationError):
            two_tetrahedra().faces(3)


class TestOrientation:
    def test_orient_from_first_cell(self):
        t = two_tetrahedra()
        assert [c.epsilon for c in t.cells()] == [1, -1]
        assert t.is_oriented()
        assert t.validate() == []

    def test_orient_from_reference(self):
        t = orient(two_tetrahedra(), reference='1235')
        assert t.cell('1235').epsilon == 1
        assert t.cell('1234').epsilon == -1

    def test_clash_is_reported(self):
        t = two_tetrahedra().with_epsilons({'1235': 1})
        problems = t.validate()
        assert any('orientation clash' in p for p in problems)
        assert not t.is_oriented()

    def test_unoriented_is_reported(self):
        t = Triangulation.from_cells(3, [Cell('1234', (1, 2, 3, 4)), Cell('1235', (1, 2, 3, 5))])
        assert any('unoriented' in p for p in t.validate())

    def test_disconnected(self):
        t = Triangulation(3, [Cell('a', (1, 2, 3, 4)), Cell('b', (5, 6, 7, 8))], [])
        with pytest.raises(OrientationError):
            orient(t)

    def test_renumbering_keeps_orientation(self):
        t = two_tetrahedra().renumbered({5: 0})
        assert t.cell('1235').vertices == (0, 1, 2, 3)
        assert t.is_oriented()
        assert t.validate() == []

    def test_renumbering_cannot_merge(self):
        with pytest.raises(TriangulationError):
            two_tetrahedra().renumbered({5: 4})


class TestOrientedLink:
    def test_edge_link_of_two_tetrahedra(self):
        t = two_tetrahedra()
        assert oriented_link_of_edge(t, (1, 2)) == [('1234', (3, 4)), ('1235', (5, 3))]

    def test_absent_face(self):
        t = two_tetrahedra()
        assert oriented_link(t, (4, 5)) == []
        with pytest.raises(TriangulationError):
            oriented_link(t, (4, 5), strict=True)

    def test_wrong_codimension(self):
        with pytest.raises(TriangulationError):
            oriented_link(two_tetrahedra(), (1, 2, 3))

    def test_unoriented(self):
        t = Triangulation.from_cells(3, [Cell('1234', (1, 2, 3, 4))])
        with pytest.raises(OrientationError):
            oriented_link(t, (1, 2))


class TestSerialization:
    def test_json_layout(self):
        text = two_tetrahedra().to_json()
        lines = text.splitlines()
        assert lines[0] == '{'
        assert lines[1] == '  "dimension": 3,'
        assert lines[3] == '    {"id": "1234", "vertices": [1, 2, 3, 4], "epsilon": 1},'
        assert '    [["1234", 3], ["1235", 3]]' in lines
        assert json.loads(text)['dimension'] == 3

    def test_file_round_trip(self, tmp_path):
        t = two_tetrahedra()
        path = write_triangulation(t, tmp_path / 'nested' / 'two.json')
        loaded = read_triangulation(path)
        assert loaded.to_json() == t.to_json()
        assert loaded.combinatorial_signature() == t.combinatorial_signature()

    def test_malformed_json(self):
        with pytest.raises(TriangulationError):
            Triangulation.from_json('{"dimension": 3, "cells": [')
        with pytest.raises(TriangulationError):
            Triangulation.from_json('{"cells": []}')

    def test_missing_file(self, tmp_path):
        with pytest.raises(TriangulationError):
            read_triangulation(tmp_path / 'absent.json')

    def test_unwritable_path(self, tmp_path):
        blocker = tmp_path / 'file'
        blocker.write_text('x')
        with pytest.raises(ConfigError):
            write_triangulation(two_tetrahedra(), blocker / 'two.json')
