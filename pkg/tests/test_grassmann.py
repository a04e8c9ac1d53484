from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from modules.core.errors import GrassmannDomainError, OperatorInversionError, UnknownGeneratorError
from modules.core.grassmann import (
    FirstOrderOperator,
    GeneratorRegistry,
    GrassmannElement,
    apply_operator,
    berezin_integrate,
    exp,
    grade,
    integrate_measure,
    integrate_product,
    invert_operator_on_one,
    left_derivative,
    normalize_inverse,
    right_derivative,
    same_up_to_sign,
)
from modules.core.linalg import SkewMatrix, pfaffian
from tests.strategies import REGISTRY, grassmann_elements, homogeneous_elements, rationals


def gen(label: str) -> GrassmannElement:
    return REGISTRY.generator(label)


class TestAlgebra:
    @given(x=grassmann_elements(), y=grassmann_elements(), w=grassmann_elements())
    def test_associativity(self, x, y, w):
        assert (x * y) * w == x * (y * w)

    @given(x=grassmann_elements(), y=grassmann_elements(), w=grassmann_elements())
    def test_distributivity(self, x, y, w):
        assert x * (y + w) == x * y + x * w
        assert (y + w) * x == y * x + w * x

    @given(x=homogeneous_elements(1), y=homogeneous_elements(1))
    def test_odd_elements_anticommute(self, x, y):
        assert x * y == -(y * x)

    @given(x=homogeneous_elements(2), y=grassmann_elements())
    def test_even_elements_commute(self, x, y):
        assert x * y == y * x

    @given(x=homogeneous_elements(1))
    def test_odd_square_vanishes(self, x):
        assert (x * x).is_zero()

    @given(label=st.sampled_from(REGISTRY.labels))
    def test_generator_square_vanishes(self, label):
        assert (gen(label) * gen(label)).is_zero()

    def test_monomial_sign(self):
        assert REGISTRY.monomial(['b', 'a']) == -REGISTRY.monomial(['a', 'b'])
        assert REGISTRY.monomial(['c', 'a', 'b']) == REGISTRY.monomial(['a', 'b', 'c'])
        assert REGISTRY.monomial(['a', 'a']).is_zero()

    def test_ordered_coefficient(self):
        x = REGISTRY.monomial(['a', 'c'], 5)
        assert x.coefficient(['a', 'c']) == 5
        assert x.ordered_coefficient(['c', 'a']) == -5

    def test_unknown_generator(self):
        with pytest.raises(UnknownGeneratorError):
            REGISTRY.generator('z')

    def test_duplicate_labels(self):
        with pytest.raises(GrassmannDomainError):
            GeneratorRegistry(['a', 'a'])

    def test_to_dict(self):
        x = REGISTRY.monomial(['b', 'a'], 3) + 2
        assert x.to_dict() == {'1': '2', 'a*b': '-3'}

    @given(x=grassmann_elements())
    def test_grades_sum_to_element(self, x):
        parts = [grade(x, k) for k in range(len(REGISTRY) + 1)]
        assert sum(parts, REGISTRY.zero()) == x
        assert all(p.is_zero() or p.degrees() == [k] for k, p in enumerate(parts))


class TestExp:
    def test_exp_of_degree_two(self):
        x = REGISTRY.monomial(['a', 'b']) + REGISTRY.monomial(['c', 'd'])
        expected = 1 + x + REGISTRY.monomial(['a', 'b', 'c', 'd'])
        assert exp(x) == expected

    @given(x=homogeneous_elements(2), y=homogeneous_elements(2))
    def test_exp_is_multiplicative_on_even(self, x, y):
        assert exp(x + y) == exp(x) * exp(y)

    def test_exp_rejects_odd(self):
        with pytest.raises(GrassmannDomainError):
            exp(gen('a'))

    def test_exp_rejects_scalar_part(self):
        with pytest.raises(GrassmannDomainError):
            exp(REGISTRY.monomial(['a', 'b']) + 1)


class TestDerivatives:
    def test_left_and_right(self):
        ab = REGISTRY.monomial(['a', 'b'])
        assert left_derivative(ab, 'a') == gen('b')
        assert left_derivative(ab, 'b') == -gen('a')
        assert right_derivative(ab, 'b') == gen('a')
        assert right_derivative(ab, 'a') == -gen('b')

    @given(x=homogeneous_elements(1), y=grassmann_elements(), label=st.sampled_from(REGISTRY.labels))
    def test_leibniz_for_odd_left_factor(self, x, y, label):
        assert left_derivative(x * y, label) == left_derivative(x, label) * y - x * left_derivative(y, label)

    @given(x=grassmann_elements(), label=st.sampled_from(REGISTRY.labels))
    def test_derivative_twice_vanishes(self, x, label):
        assert left_derivative(left_derivative(x, label), label).is_zero()


class TestIntegration:
    def test_measure_convention(self):
        ab = REGISTRY.monomial(['a', 'b'])
        assert integrate_measure(ab, ['b', 'a']) == 1
        assert integrate_measure(ab, ['a', 'b']) == -1
        assert berezin_integrate(ab, ['a', 'b']) == 1

    def test_integrating_a_constant(self):
        assert integrate_measure(REGISTRY.scalar(4), ['a']).is_zero()

    def test_repeated_generator(self):
        with pytest.raises(GrassmannDomainError):
            integrate_measure(gen('a'), ['a', 'a'])

    @given(factors=st.lists(grassmann_elements(max_terms=3), min_size=1, max_size=3),
           measure=st.lists(st.sampled_from(REGISTRY.labels), max_size=3, unique=True))
    def test_product_matches_expanded_integral(self, factors, measure):
        product = factors[0]
        for factor in factors[1:]:
            product = product * factor
        assert integrate_product(factors, measure) == integrate_measure(product, measure)

    @given(entries=st.lists(rationals(9), min_size=6, max_size=6))
    def test_gaussian_gives_pfaffian(self, entries):
        registry = GeneratorRegistry(['v1', 'v2', 'v3', 'v4'])
        labels = registry.labels
        pairs = list(combinations(range(4), 2))
        exponent = registry.zero()
        upper = {}
        for (i, j), value in zip(pairs, entries):
            exponent = exponent + registry.monomial([labels[i], labels[j]], value)
            upper[(labels[i], labels[j])] = value
        integral = integrate_measure(exp(exponent), list(labels))
        assert integral == pfaffian(SkewMatrix.from_upper(labels, upper))


class TestOperators:
    def test_rightmost_factor_acts_first(self):
        d_a = FirstOrderOperator(REGISTRY, {'a': 1})
        d_b = FirstOrderOperator(REGISTRY, {'b': 1})
        ab = REGISTRY.monomial(['a', 'b'])
        assert apply_operator([d_a, d_b], ab) == -1
        assert apply_operator([d_b, d_a], ab) == 1

    @given(coefficients=st.lists(rationals(9).filter(bool), min_size=2, max_size=2))
    def test_inverse_on_one(self, coefficients):
        d1 = FirstOrderOperator(REGISTRY, {'a': coefficients[0], 'b': 1})
        d2 = FirstOrderOperator(REGISTRY, {'a': 1, 'c': coefficients[1]})
        f = invert_operator_on_one([d1, d2])
        assert apply_operator([d1, d2], f) == 1
        assert f.max_degree() == 2

    def test_inverse_is_unique_up_to_kernel(self):
        d1 = FirstOrderOperator(REGISTRY, {'a': 2, 'b': 3})
        f = invert_operator_on_one(d1)
        g = normalize_inverse(d1, gen('b'))
        assert f == gen('a') / 2
        assert g == gen('b') / 3
        assert apply_operator(d1, f - g).is_zero()

    def test_no_inverse(self):
        d = FirstOrderOperator(REGISTRY, {'a': 1})
        with pytest.raises(OperatorInversionError):
            invert_operator_on_one([d, d])

    def test_normalize_rejects_kernel(self):
        d = FirstOrderOperator(REGISTRY, {'a': 1})
        with pytest.raises(OperatorInversionError):
            normalize_inverse(d, gen('b'))

    def test_empty_product(self):
        assert invert_operator_on_one([], REGISTRY) == 1

    def test_same_up_to_sign(self):
        x = REGISTRY.monomial(['a', 'b'], Fraction(3, 2))
        assert same_up_to_sign(x, -x)
        assert not same_up_to_sign(x, 2 * x)
