from fractions import Fraction

import pytest

from modules.core.errors import ElementaryMoveError, InnerVertexError, OrderlyConstructionError
from modules.core.grassmann import same_up_to_sign
from modules.core.invariant3d import (
    LENS_ALPHA,
    PUBLISHED_LENS_TABLE,
    OrderlyMapping,
    calibrate_lens_labelling,
    construct_orderly,
    elementary_move,
    elementary_path,
    free_region,
    invariant_G,
    invariant_G_pfaffian,
    is_orderly,
    lens_table,
    lens_relabel_check,
    lens_values,
    quadratic_form,
    table_entries,
)
from modules.core.lens import DEFAULT_LABELLING, build_lens
from modules.core.moves import move_cluster, pachner_move
from modules.core.scalars import ZetaAssignment
from modules.core.triangulation import Cell, Triangulation, orient
from modules.core.weights3d import chain_registry

SINGLE = orient(Triangulation.from_cells(3, [Cell('1234', (1, 2, 3, 4))]))
LENS_ZETA = ZetaAssignment.from_sequence([1, 2, 3, 4])


@pytest.fixture
def two_inner():
    """The 1-4 cluster with a second 1-4 move on 1235 adding vertex 6."""
    return pachner_move(move_cluster('1-4').rhs, '1-4', ['1235'], new_vertex=6)


class TestOrderly:
    def test_single_inner_vertex(self, cluster_14):
        m = construct_orderly(cluster_14.rhs)
        assert m.to_dict() == {'5': '1235'}
        assert is_orderly(cluster_14.rhs, m)

    def test_no_inner_vertices(self):
        assert len(construct_orderly(SINGLE)) == 0

    def test_every_star_cell_is_orderly_for_one_vertex(self, cluster_14):
        for cell_id in cluster_14.rhs.cell_ids():
            assert is_orderly(cluster_14.rhs, OrderlyMapping({5: cell_id}))

    def test_two_inner_vertices(self, two_inner):
        m = construct_orderly(two_inner)
        assert m.assignment == {5: '1245', 6: '1236'}
        assert is_orderly(two_inner, m)

    def test_not_orderly(self, two_inner):
        assert not is_orderly(two_inner, OrderlyMapping({5: '1256', 6: '1256'}))
        assert not is_orderly(two_inner, OrderlyMapping({5: '1236', 6: '1256'}))
        assert not is_orderly(two_inner, OrderlyMapping({5: '1245'}))

    def test_avoid(self, cluster_14):
        m = construct_orderly(cluster_14.rhs, avoid=['1235'])
        assert m[5] != '1235'

    def test_closed_manifold(self):
        with pytest.raises(OrderlyConstructionError):
            construct_orderly(build_lens(3, 1))

    def test_elementary_path(self, two_inner):
        start = construct_orderly(two_inner)
        target = OrderlyMapping({5: '2345', 6: '1256'})
        assert is_orderly(two_inner, target)
        path = elementary_path(two_inner, start, target)
        assert path == [(5, '2345'), (6, '1256')]
        current = start
        for k, cell in path:
            current = elementary_move(two_inner, current, k, cell)
            assert is_orderly(two_inner, current)
        assert current.assignment == target.assignment

    def test_elementary_move_outside_region(self, two_inner):
        m = construct_orderly(two_inner)
        assert '1236' not in free_region(two_inner, m, 5)
        with pytest.raises(ElementaryMoveError):
            elementary_move(two_inner, m, 5, '1236')

    def test_path_from_non_orderly(self, two_inner):
        with pytest.raises(OrderlyConstructionError):
            elementary_path(two_inner, OrderlyMapping({5: '1245'}), construct_orderly(two_inner))


class TestInvariant:
    def test_single_tetrahedron(self, z5):
        g = invariant_G(SINGLE, z5)
        assert g.scalar_part() == -2
        assert invariant_G_pfaffian(SINGLE, z5) == -2

    @pytest.mark.parametrize('alpha', [0, 1, Fraction(1, 3)])
    def test_single_tetrahedron_alpha(self, z5, alpha):
        assert invariant_G_pfaffian(SINGLE, z5, alpha) == alpha
        assert invariant_G(SINGLE, z5, alpha=alpha).scalar_part() == alpha

    def test_quadratic_form_variables(self, z5, cluster_23):
        data = quadratic_form(cluster_23.lhs, z5)
        assert data.variables == ('b1234.1', 'b1234.2', 'b1235.1', 'b1235.2', 'a123')

    def test_lens_alpha_puts_c_block_into_form(self, small_z5):
        matrix = quadratic_form(SINGLE, small_z5, LENS_ALPHA).matrix
        assert matrix.entry('b1234.1', 'b1234.2') == SINGLE.cell('1234').epsilon * small_z5.diff(3, 4)
        doubled = quadratic_form(SINGLE, small_z5, -2).matrix
        assert doubled.entry('b1234.1', 'b1234.2') == 2 * matrix.entry('b1234.1', 'b1234.2')

    def test_pfaffian_matches_integral(self, small_z5, cluster_23):
        t = cluster_23.lhs
        assert invariant_G(t, small_z5).scalar_part() == invariant_G_pfaffian(t, small_z5)

    @pytest.mark.slow
    def test_independent_of_orderly_mapping(self, small_z5, cluster_14):
        t = cluster_14.rhs
        registry = chain_registry(t)
        values = [invariant_G(t, small_z5, OrderlyMapping({5: cell_id}), registry=registry) for cell_id in t.cell_ids()]
        for value in values[1:]:
            assert same_up_to_sign(values[0], value)

    def test_invariant_under_two_three_move(self, small_z5, cluster_23):
        registry = chain_registry(cluster_23.lhs, cluster_23.rhs)
        lhs = invariant_G(cluster_23.lhs, small_z5, registry=registry)
        rhs = invariant_G(cluster_23.rhs, small_z5, registry=registry)
        assert same_up_to_sign(lhs, rhs)

    def test_pfaffian_rejects_inner_vertices(self, z5, cluster_14):
        with pytest.raises(InnerVertexError):
            invariant_G_pfaffian(cluster_14.rhs, z5)


class TestLens:
    def test_zero_alpha_vanishes(self):
        assert lens_table(5, 2, 1, LENS_ZETA, alpha=0) == 0

    @pytest.mark.parametrize('n', [1, 2])
    def test_rotation_symmetry(self, n):
        assert lens_table(5, 2, n, LENS_ZETA) == lens_table(5, 2, 5 - n, LENS_ZETA)

    def test_values_are_non_negative(self):
        assert all(v >= 0 for v in lens_values(3, 1, [LENS_ZETA]))

    def test_lens_values_count(self):
        zetas = [LENS_ZETA, ZetaAssignment.from_sequence([0, 1, 3, 7])]
        values = lens_values(5, 2, zetas)
        assert len(values) == 8
        assert values == sorted(values)

    def test_table_entries(self):
        rows = table_entries([(5, 2, 1, '1,2,3,4', 7), (5, 1, 2, (0, 1, 3, 7), 3)])
        assert rows[0][3] == LENS_ZETA
        assert rows[1][:3] == (5, 1, 2)
        assert rows[1][4] == 3

    def test_published_entries_parse(self):
        assert all(len(row[3]) == 4 for row in table_entries())

    @pytest.mark.slow
    def test_calibrate(self):
        found = calibrate_lens_labelling([(5, 2, 1, (1, 2, 3, 4), 0)], alphas=(0,))
        assert found is not None
        assert found.labelling == dict(DEFAULT_LABELLING)
        assert found.matched == 1

    @pytest.mark.slow
    def test_calibrate_without_match(self):
        assert calibrate_lens_labelling([(5, 2, 1, (1, 2, 3, 4), -1)], alphas=(0,)) is None

    def test_relabel_check_same_family(self):
        check = lens_relabel_check(5, 2, 2, [LENS_ZETA])
        assert check.agree
        assert check.first == (5, 2)
        assert len(check.first_values) == 4

    @pytest.mark.slow
    @pytest.mark.parametrize('p, q, n, zeta, expected', PUBLISHED_LENS_TABLE)
    def test_published_table(self, p, q, n, zeta, expected):
        assert lens_table(p, q, n, ZetaAssignment.from_sequence(zeta)) == expected

    @pytest.mark.slow
    def test_homeomorphic_lens_spaces_agree(self):
        zetas = [LENS_ZETA, ZetaAssignment.from_sequence([1, 2, 4, 3])]
        check = lens_relabel_check(7, 2, 3, zetas)
        assert check.agree
        assert len(check.first_values) == 12
        assert check.first_values != lens_values(7, 1, zetas)
