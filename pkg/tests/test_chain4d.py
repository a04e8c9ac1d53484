from itertools import combinations, combinations_with_replacement

import pytest

from modules.core.alpha import AlphaSystem4, random_consistent_alpha
from modules.core.chain4d import (
    ChainBasis4,
    alpha_affinity_check,
    build_f3_4d,
    check_complex_4d,
    conjectured_invariant_4d,
    conjectured_invariant_agrees,
    published_24_weight,
    published_alpha_systems,
    registry_4d,
    verify_move_24,
    verify_move_33,
    weight_W_4d,
)
from modules.core.errors import InconsistentAlphaError, TriangulationError
from modules.core.moves import move_cluster
from modules.core.scalars import zeta_samples


class TestComplex:
    @pytest.mark.parametrize('move', ['3-3', '2-4'])
    @pytest.mark.parametrize('side', ['lhs', 'rhs'])
    def test_complex(self, z6, move, side):
        t = move_cluster(move).side(side)
        result = check_complex_4d(t, z6)
        assert result.f4_f3_zero
        assert result.gauged_zero
        assert result.passed

    def test_inner_only_shapes(self, z6):
        result = check_complex_4d(move_cluster('3-3').lhs, z6, inner_only=True)
        assert result.passed
        assert result.shapes == {'f3': (6, 1), 'f4': (9, 6)}

    def test_basis(self):
        basis = ChainBasis4.of(move_cluster('3-3').lhs, inner_only=True)
        assert [c.name for c in basis.faces] == ['123']
        assert [str(c) for c in basis.tetra][:2] == ['a1234', 'b1234']
        assert len(basis.simplices) == 9

    def test_rejects_3d(self, z6):
        with pytest.raises(TriangulationError):
            build_f3_4d(move_cluster('2-3').lhs, z6)


class TestWeights:
    def test_weight_shape(self, z6):
        w = weight_W_4d(z6, (1, 2, 3, 4, 5))
        assert len(w) == 72
        assert w.degrees() == [3]

    def test_coefficients_are_products_of_two_differences(self, z6):
        edges = [z6.diff(i, j) for i, j in combinations((1, 2, 3, 4, 5), 2)]
        products = {x * y for x, y in combinations_with_replacement(edges, 2)}
        products |= {-p for p in products}
        w = weight_W_4d(z6, (1, 2, 3, 4, 5))
        assert all(value in products for _, value in w.items())

    def test_rejects_unsorted_simplex(self, z6):
        with pytest.raises(TriangulationError):
            weight_W_4d(z6, (2, 1, 3, 4, 5))

    def test_registry(self):
        cluster = move_cluster('3-3')
        labels = registry_4d(cluster.lhs, cluster.rhs).labels
        assert labels[:2] == ('a1234', 'b1234')
        assert labels[-1] == 'e'
        assert len(set(labels)) == len(labels)


class TestThreeThree:
    def test_undeformed(self, small_z6):
        assert verify_move_33(small_z6).passed

    @pytest.mark.parametrize('name', ['ones', 'zeta'])
    def test_published_alphas(self, small_z6, name):
        assert verify_move_33(small_z6, published_alpha_systems(small_z6)[name]).passed

    @pytest.mark.slow
    @pytest.mark.parametrize('seed', [1, 2])
    def test_random_alphas(self, z6, seed):
        cluster = move_cluster('3-3')
        alpha = random_consistent_alpha(cluster.lhs, cluster.rhs, z6, seed)
        assert verify_move_33(z6, alpha).passed

    @pytest.mark.slow
    def test_random_sweep(self):
        cluster = move_cluster('3-3')
        for k, z in enumerate(zeta_samples(20, 6, seed=33)):
            for seed in range(10):
                alpha = random_consistent_alpha(cluster.lhs, cluster.rhs, z, 100 * k + seed)
                assert verify_move_33(z, alpha).passed

    def test_perturbed_alpha(self, small_z6):
        broken = AlphaSystem4.constant(1).perturbed('12345', 1)
        with pytest.raises(InconsistentAlphaError):
            verify_move_33(small_z6, broken)
        result = verify_move_33(small_z6, broken, check_alpha=False)
        assert not result.passed
        assert result.to_dict()['difference']


class TestTwoFour:
    def test_undeformed(self, small_z6):
        assert verify_move_24(small_z6).passed

    def test_constant_alpha(self, small_z6):
        assert verify_move_24(small_z6, AlphaSystem4.constant(1)).passed

    @pytest.mark.slow
    def test_random_alpha(self, z6):
        cluster = move_cluster('2-4')
        alpha = random_consistent_alpha(cluster.lhs, cluster.rhs, z6, 3)
        assert verify_move_24(z6, alpha).passed

    @pytest.mark.slow
    def test_random_sweep(self):
        cluster = move_cluster('2-4')
        for k, z in enumerate(zeta_samples(20, 6, seed=24)):
            for seed in range(10):
                alpha = random_consistent_alpha(cluster.lhs, cluster.rhs, z, 100 * k + seed)
                assert verify_move_24(z, alpha).passed

    def test_published_face_weight(self, small_z6):
        assert verify_move_24(small_z6, candidate=published_24_weight()).passed

    def test_perturbed_alpha(self, small_z6):
        broken = AlphaSystem4.constant(1).perturbed('12346', 2)
        assert not verify_move_24(small_z6, broken, check_alpha=False).passed


class TestConjecture:
    @pytest.mark.parametrize('move', ['3-3', '2-4'])
    def test_agrees(self, small_z6, move):
        assert conjectured_invariant_agrees(move, small_z6)

    def test_agrees_with_alpha(self, small_z6):
        assert conjectured_invariant_agrees('3-3', small_z6, AlphaSystem4.constant(1))

    def test_needs_4d(self, z6):
        with pytest.raises(TriangulationError):
            conjectured_invariant_4d(move_cluster('2-3').lhs, z6)


class TestAffinity:
    @pytest.mark.parametrize('move', ['3-3', '2-4'])
    def test_affine(self, small_z6, move):
        result = alpha_affinity_check(move, small_z6, AlphaSystem4.zero(), AlphaSystem4.constant(1))
        assert result.lhs_affine
        assert result.rhs_affine
        assert result.passed

    def test_only_4d_moves(self, small_z6):
        with pytest.raises(TriangulationError):
            alpha_affinity_check('2-3', small_z6, AlphaSystem4.zero(), AlphaSystem4.constant(1))
