from fractions import Fraction

import pytest

from modules.core.chain3d import (
    ChainBasis3,
    build_f2,
    build_f3,
    build_f4,
    canonical_subsets,
    check_complex,
    generating_function_F,
    generating_function_T,
    invariant_I0,
    invariant_vector,
    prefactor,
    subset_coefficient,
    torsion_tau,
    torsion_vector,
    validate_subset,
)
from modules.core.errors import SubsetError
from modules.core.grassmann import same_up_to_sign
from modules.core.lens import lens_complement
from modules.core.moves import move_cluster
from modules.core.triangulation import Cell, Triangulation, orient
from modules.core.weights3d import chain_registry, integrated_weight


def single_tetrahedron() -> Triangulation:
    return orient(Triangulation.from_cells(3, [Cell('1234', (1, 2, 3, 4))]))


class TestComplex:
    @pytest.mark.parametrize('move', ['2-3', '1-4'])
    @pytest.mark.parametrize('side', ['lhs', 'rhs'])
    def test_consecutive_maps_compose_to_zero(self, move, side, z5):
        result = check_complex(move_cluster(move).side(side), z5)
        assert result.f3_f2_zero
        assert result.f4_f3_zero
        assert result.passed

    def test_shapes_with_inner_vertex(self, cluster_14, z5):
        t = cluster_14.rhs
        assert build_f2(t, z5).shape == (10, 1)
        assert build_f3(t, z5).shape == (8, 10)
        assert build_f4(t, z5).shape == (1, 8)

    def test_lens_complement(self, small_z5):
        z = small_z5.restricted([1, 2, 3, 4])
        result = check_complex(lens_complement(3, 1, 1), z)
        assert result.passed
        assert result.shapes['f4'][0] == 0

    def test_basis(self, cluster_14):
        basis = ChainBasis3.of(cluster_14.rhs)
        assert basis.vertices == (5,)
        assert basis.inner_faces == ('a125', 'a135', 'a235', 'a145', 'a245', 'a345')
        assert basis.boundary_faces == ('a123', 'a124', 'a134', 'a234')
        assert basis.tetra[:2] == ('b1235.1', 'b1235.2')
        assert basis.subset_size == 2


class TestSubsets:
    def test_forms_accepted(self, cluster_14):
        t = cluster_14.rhs
        assert validate_subset(t, ['a123', '124']) == ('a123', 'a124')
        assert validate_subset(t, [(1, 3, 4), t.faces_by_name(2)['234']]) == ('a134', 'a234')

    def test_rejected(self, cluster_14):
        t = cluster_14.rhs
        with pytest.raises(SubsetError):
            validate_subset(t, ['a123'])
        with pytest.raises(SubsetError):
            validate_subset(t, ['a123', 'a123'])
        with pytest.raises(SubsetError):
            validate_subset(t, ['a123', 'a125'])
        with pytest.raises(SubsetError):
            validate_subset(t, ['a123', 'a999'])

    def test_canonical_subsets(self, cluster_14):
        subsets = canonical_subsets(cluster_14.rhs)
        assert len(subsets) == 6
        assert subsets[0] == ('a123', 'a124')


class TestTorsion:
    def test_generating_function_matches_torsions(self, cluster_14, z5):
        t = cluster_14.rhs
        generating = generating_function_T(t, z5)
        torsions = torsion_vector(t, z5)
        assert any(result.defined for result in torsions.values())
        signs = set()
        for subset, result in torsions.items():
            coefficient = subset_coefficient(generating, subset)
            if not result.defined:
                assert coefficient == 0
                continue
            assert coefficient in (result.value, -result.value)
            signs.add(coefficient / result.value)
        assert len(signs) == 1

    @pytest.mark.parametrize('move', ['2-3', '1-4'])
    def test_one_sign_across_a_move(self, move, z5):
        cluster = move_cluster(move)
        registry = chain_registry(cluster.lhs, cluster.rhs)
        lhs = generating_function_F(cluster.lhs, z5, registry)
        rhs = generating_function_F(cluster.rhs, z5, registry)
        assert not lhs.is_zero()
        assert same_up_to_sign(lhs, rhs)

        before = invariant_vector(cluster.lhs, z5)
        after = invariant_vector(cluster.rhs, z5)
        assert set(before) == set(after)
        assert after in (before, {subset: -value for subset, value in before.items()})

    def test_generating_function_lives_on_boundary(self, cluster_14, z5):
        generating = generating_function_T(cluster_14.rhs, z5)
        assert generating.degrees() == [2]
        for label in ChainBasis3.of(cluster_14.rhs).inner_faces:
            assert not generating.contains_generator(label)

    def test_invariants(self, cluster_14, z5):
        t = cluster_14.rhs
        values = invariant_vector(t, z5)
        subset = canonical_subsets(t)[0]
        assert values[subset] == invariant_I0(t, z5, subset)
        assert invariant_I0(t, z5, subset) == prefactor(t, z5) * torsion_tau(t, z5, subset).value

    def test_single_tetrahedron(self, small_z5):
        t = single_tetrahedron()
        registry = chain_registry(t)
        generating = generating_function_T(t, small_z5, registry)
        assert generating == integrated_weight(t, small_z5, '1234', registry=registry)
        assert prefactor(t, small_z5) == 1 / small_z5.diff(3, 4)
        assert generating_function_F(t, small_z5, registry) == generating / small_z5.diff(3, 4)
        assert len(canonical_subsets(t)) == 6

    def test_torsion_of_single_tetrahedron(self, small_z5):
        t = single_tetrahedron()
        generating = generating_function_T(t, small_z5)
        for subset, result in torsion_vector(t, small_z5).items():
            expected = result.value if result.defined else Fraction(0)
            assert subset_coefficient(generating, subset) in (expected, -expected)
