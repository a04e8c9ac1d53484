from fractions import Fraction

import pytest
from hypothesis import given

from modules.core.alpha import (
    AlphaSystem3,
    AlphaSystem4,
    alpha_basis,
    check_alpha_manifold,
    check_alpha_move,
    link_sum,
    manifold_residuals,
    move_residuals,
    random_consistent_alpha,
    random_manifold_alpha,
    transport_alpha,
)
from modules.core.chain4d import published_alpha_systems
from modules.core.errors import InconsistentAlphaError
from modules.core.moves import move_cluster
from modules.core.scalars import ZetaAssignment
from modules.core.weights3d import alpha_residuals_23, solve_alpha_move, solve_alpha_move_32
from tests.strategies import rationals, zeta_assignments

CLUSTER_23 = move_cluster('2-3')
CLUSTER_14 = move_cluster('1-4')


class TestAlphaSystem:
    def test_vertex_tuples_name_cells(self):
        alpha = AlphaSystem3({(2, 1, 4, 3): 5})
        assert alpha['1234'] == 5
        assert alpha[(1, 2, 3, 4)] == 5
        assert (4, 3, 2, 1) in alpha

    def test_key_size(self):
        with pytest.raises(ValueError):
            AlphaSystem4({(1, 2, 3, 4): 1})

    def test_missing_value(self):
        with pytest.raises(InconsistentAlphaError):
            AlphaSystem3({'1234': 1})['1235']

    def test_constant(self):
        alpha = AlphaSystem3.constant(Fraction(1, 3))
        assert alpha['anything'] == Fraction(1, 3)
        assert alpha.value(CLUSTER_23.lhs.cell('1234')) == Fraction(1, 3)
        assert AlphaSystem3.zero().to_dict() == {'*': '0'}

    def test_perturbed_and_combined(self):
        alpha = AlphaSystem3({'1234': 1, '1235': 2})
        assert alpha.perturbed('1234')['1234'] == 2
        combined = alpha.combined(AlphaSystem3({'1234': 1, '1235': 1}), -2)
        assert combined.to_dict() == {'1234': '-1', '1235': '0'}
        with pytest.raises(InconsistentAlphaError):
            alpha.combined(AlphaSystem3({'1245': 4}), 1)

    def test_to_dict(self):
        assert AlphaSystem3({'1234': Fraction(1, 2)}, default=3).to_dict() == {'1234': '1/2', '*': '3'}


class TestBalance:
    def test_link_sum_over_edge(self, small_z5):
        alpha = AlphaSystem3({'1234': 2, '1235': 3})
        expected = small_z5.diff(3, 4) * 2 + small_z5.diff(5, 3) * 3
        assert link_sum(CLUSTER_23.lhs, (1, 2), small_z5, alpha) == expected

    def test_zero_is_consistent(self, z5):
        check_alpha_move(CLUSTER_23.lhs, CLUSTER_23.rhs, z5, AlphaSystem3.zero())
        assert move_residuals(CLUSTER_14.lhs, CLUSTER_14.rhs, z5, AlphaSystem3.zero()) == {}

    def test_inconsistent_system(self, z5):
        alpha = AlphaSystem3({'1234': 1, '1235': 0, '1245': 0, '1345': 0, '2345': 0})
        with pytest.raises(InconsistentAlphaError) as info:
            check_alpha_move(CLUSTER_23.lhs, CLUSTER_23.rhs, z5, alpha)
        assert info.value.residuals
        assert alpha_residuals_23(z5, alpha) == info.value.residuals

    def test_two_three_space(self, z5):
        assert len(alpha_basis(CLUSTER_23.lhs, CLUSTER_23.rhs, z5)) == 2

    @given(z=zeta_assignments(5), a=rationals(), b=rationals())
    def test_explicit_solution_balances(self, z: ZetaAssignment, a, b):
        alpha = solve_alpha_move(z, AlphaSystem3({'1234': a, '1235': b}))
        check_alpha_move(CLUSTER_23.lhs, CLUSTER_23.rhs, z, alpha)
        transported = transport_alpha(CLUSTER_23.lhs, CLUSTER_23.rhs, z, alpha)
        for cell_id in CLUSTER_23.rhs.cell_ids():
            assert transported[cell_id] == alpha[cell_id]

    @given(z=zeta_assignments(5), a=rationals())
    def test_one_four_transport(self, z: ZetaAssignment, a):
        alpha = transport_alpha(CLUSTER_14.lhs, CLUSTER_14.rhs, z, AlphaSystem3({'1234': a}))
        check_alpha_move(CLUSTER_14.lhs, CLUSTER_14.rhs, z, alpha)
        assert solve_alpha_move(z, AlphaSystem3({'1234': a}), move='1-4') == alpha

    def test_three_two_needs_balanced_right_side(self, z5):
        with pytest.raises(InconsistentAlphaError):
            solve_alpha_move_32(z5, AlphaSystem3({'1245': 1, '1345': 0, '2345': 0}))
        alpha = solve_alpha_move(z5, AlphaSystem3({'1234': 2, '1235': -1}))
        back = solve_alpha_move_32(z5, alpha)
        assert back['1234'] == 2
        assert back['1235'] == -1

    def test_random_consistent(self, z5, z6):
        for seed in range(3):
            alpha = random_consistent_alpha(CLUSTER_23.lhs, CLUSTER_23.rhs, z5, seed)
            check_alpha_move(CLUSTER_23.lhs, CLUSTER_23.rhs, z5, alpha)
        cluster = move_cluster('3-3')
        alpha = random_consistent_alpha(cluster.lhs, cluster.rhs, z6, 5)
        assert isinstance(alpha, AlphaSystem4)
        check_alpha_move(cluster.lhs, cluster.rhs, z6, alpha)

    def test_manifold_balance(self, z5):
        t = CLUSTER_14.rhs
        alpha = random_manifold_alpha(t, z5, 3)
        check_alpha_manifold(t, z5, alpha)
        assert manifold_residuals(t, z5, alpha) == {}
        with pytest.raises(InconsistentAlphaError):
            check_alpha_manifold(t, z5, alpha.perturbed('1235', 1))

    def test_published_systems_balance(self, z6):
        cluster = move_cluster('3-3')
        for alpha in published_alpha_systems(z6).values():
            check_alpha_move(cluster.lhs, cluster.rhs, z6, alpha)
