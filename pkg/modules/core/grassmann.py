"""
Finite-dimensional Grassmann algebra over exact rationals.

Generators are registered once in a GeneratorRegistry; every element keeps a
sparse map from monomials to Fractions. A monomial is stored as an integer bit
mask over the registry's canonical generator order, which is also its sign
normal form: the product g_i1 g_i2 ... with i1 < i2 < ...

The Berezin integral over a generator g coincides with the right derivative:
g is moved to the right end of each monomial and struck out.
"""

import logging
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from modules.core.errors import (
    GrassmannDomainError,
    OperatorInversionError,
    RegistryMismatchError,
    UnknownGeneratorError,
)
from modules.core.scalars import Scalar, ScalarLike, to_scalar

logger = logging.getLogger('pachnercalc.grassmann')

Terms = Dict[int, Fraction]


def _popcount(mask: int) -> int:
    return bin(mask).count('1')


def _swap_parity(left: int, right: int) -> int:
    """Parity of the transpositions needed to sort left-monomial * right-monomial."""
    count = 0
    remaining = right
    while remaining:
        lowest = remaining & -remaining
        count += _popcount(left >> lowest.bit_length())
        remaining ^= lowest
    return count & 1


def _multiply_terms(x_terms: Mapping[int, Fraction], y_terms: Mapping[int, Fraction]) -> Terms:
    result: Terms = {}
    for m1, c1 in x_terms.items():
        for m2, c2 in y_terms.items():
            if m1 & m2:
                continue
            product = c1 * c2
            if _swap_parity(m1, m2):
                product = -product
            key = m1 | m2
            value = result.get(key, 0) + product
            if value:
                result[key] = value
            else:
                result.pop(key, None)
    return result


def _integrate_terms(terms: Mapping[int, Fraction], order: Sequence[int]) -> Terms:
    """
    Integrate over generator indices in `order`, first entry innermost.

    Only terms containing every integrated generator survive.
    """
    mask = 0
    for index in order:
        mask |= 1 << index
    result: Terms = {}
    for monomial, coefficient in terms.items():
        if monomial & mask != mask:
            continue
        parity = 0
        current = monomial
        for index in order:
            parity ^= _popcount(current >> (index + 1)) & 1
            current ^= 1 << index
        result[current] = result.get(current, 0) + (-coefficient if parity else coefficient)
    return {m: c for m, c in result.items() if c}


class GeneratorRegistry:
    """
    Ordered, immutable collection of generator labels.

    The position of a label is its canonical index; monomials are normalized
    to ascending index order.
    """

    def __init__(self, labels: Iterable[str]):
        self._labels: Tuple[str, ...] = tuple(labels)
        self._index: Dict[str, int] = {}
        for position, label in enumerate(self._labels):
            if label in self._index:
                raise GrassmannDomainError(f"Duplicate generator label: {label}")
            self._index[label] = position

    def __len__(self) -> int:
        return len(self._labels)

    def __contains__(self, label: object) -> bool:
        return label in self._index

    def __iter__(self) -> Iterator[str]:
        return iter(self._labels)

    def __repr__(self) -> str:
        return f"GeneratorRegistry({len(self)} generators)"

    @property
    def labels(self) -> Tuple[str, ...]:
        return self._labels

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownGeneratorError(f"Unknown generator: {label}") from None

    def label(self, index: int) -> str:
        return self._labels[index]

    def mask(self, labels: Iterable[str]) -> int:
        """Bit mask of a set of generators."""
        mask = 0
        for label in labels:
            mask |= 1 << self.index(label)
        return mask

    def monomial_labels(self, mask: int) -> Tuple[str, ...]:
        """Labels of a monomial in canonical order."""
        labels = []
        index = 0
        while mask:
            if mask & 1:
                labels.append(self._labels[index])
            mask >>= 1
            index += 1
        return tuple(labels)

    def zero(self) -> 'GrassmannElement':
        return GrassmannElement(self)

    def one(self) -> 'GrassmannElement':
        return GrassmannElement(self, {0: Fraction(1)})

    def scalar(self, value: ScalarLike) -> 'GrassmannElement':
        return GrassmannElement(self, {0: to_scalar(value)})

    def generator(self, label: str, coefficient: ScalarLike = 1) -> 'GrassmannElement':
        return GrassmannElement(self, {1 << self.index(label): to_scalar(coefficient)})

    def monomial(self, labels: Sequence[str], coefficient: ScalarLike = 1) -> 'GrassmannElement':
        """The product of the given generators in the given order."""
        result = self.scalar(coefficient)
        for label in labels:
            result = result * self.generator(label)
        return result

    def linear_form(self, coefficients: Mapping[str, ScalarLike]) -> 'GrassmannElement':
        """Sum of coefficient * generator."""
        terms = {}
        for label, value in coefficients.items():
            value = to_scalar(value)
            if value:
                key = 1 << self.index(label)
                terms[key] = terms.get(key, 0) + value
        return GrassmannElement(self, terms)


class GrassmannElement:
    """
    Element of the Grassmann algebra: sparse map monomial -> coefficient.

    Elements are treated as immutable values.
    """

    __slots__ = ('registry', '_terms')

    def __init__(self, registry: GeneratorRegistry, terms: Optional[Mapping[int, ScalarLike]] = None):
        self.registry = registry
        self._terms: Terms = {}
        for monomial, coefficient in (terms or {}).items():
            value = to_scalar(coefficient)
            if value:
                self._terms[int(monomial)] = value

    @classmethod
    def _wrap(cls, registry: GeneratorRegistry, terms: Terms) -> 'GrassmannElement':
        element = cls.__new__(cls)
        element.registry = registry
        element._terms = terms
        return element

    # -- access ---------------------------------------------------------

    @property
    def terms(self) -> Mapping[int, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[int, Fraction]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def scalar_part(self) -> Fraction:
        return self._terms.get(0, Fraction(0))

    def degrees(self) -> List[int]:
        return sorted({_popcount(m) for m in self._terms})

    def max_degree(self) -> int:
        return max((_popcount(m) for m in self._terms), default=-1)

    def is_even(self) -> bool:
        return all(_popcount(m) % 2 == 0 for m in self._terms)

    def is_odd(self) -> bool:
        return all(_popcount(m) % 2 == 1 for m in self._terms)

    def support(self) -> int:
        """Mask of all generators occurring in the element."""
        mask = 0
        for monomial in self._terms:
            mask |= monomial
        return mask

    def contains_generator(self, label: str) -> bool:
        return bool(self.support() & (1 << self.registry.index(label)))

    def grade(self, k: int) -> 'GrassmannElement':
        return GrassmannElement._wrap(
            self.registry, {m: c for m, c in self._terms.items() if _popcount(m) == k})

    def coefficient(self, monomial: Union[int, Iterable[str]]) -> Fraction:
        """Coefficient of a monomial given as a mask or as a set of labels (canonical order)."""
        mask = monomial if isinstance(monomial, int) else self.registry.mask(monomial)
        return self._terms.get(mask, Fraction(0))

    def ordered_coefficient(self, labels: Sequence[str]) -> Fraction:
        """Coefficient of the product labels[0]*labels[1]*... taken in the given order."""
        ordered = self.registry.monomial(labels)
        if ordered.is_zero():
            return Fraction(0)
        (mask, sign), = ordered._terms.items()
        return self._terms.get(mask, Fraction(0)) * sign

    # -- arithmetic -----------------------------------------------------

    def _coerce(self, other: object) -> 'GrassmannElement':
        if isinstance(other, GrassmannElement):
            if other.registry is not self.registry:
                raise RegistryMismatchError("Grassmann elements belong to different registries")
            return other
        if isinstance(other, (int, Fraction, str)):
            return self.registry.scalar(other)
        raise TypeError(f"Cannot combine GrassmannElement with {type(other).__name__}")

    def __add__(self, other: object) -> 'GrassmannElement':
        other = self._coerce(other)
        terms = dict(self._terms)
        for monomial, coefficient in other._terms.items():
            value = terms.get(monomial, 0) + coefficient
            if value:
                terms[monomial] = value
            else:
                terms.pop(monomial, None)
        return GrassmannElement._wrap(self.registry, terms)

    __radd__ = __add__

    def __neg__(self) -> 'GrassmannElement':
        return GrassmannElement._wrap(self.registry, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other: object) -> 'GrassmannElement':
        return self + (-self._coerce(other))

    def __rsub__(self, other: object) -> 'GrassmannElement':
        return self._coerce(other) + (-self)

    def __mul__(self, other: object) -> 'GrassmannElement':
        if isinstance(other, (int, Fraction)):
            if not other:
                return self.registry.zero()
            return GrassmannElement._wrap(self.registry, {m: c * other for m, c in self._terms.items()})
        other = self._coerce(other)
        return GrassmannElement._wrap(self.registry, _multiply_terms(self._terms, other._terms))

    def __rmul__(self, other: object) -> 'GrassmannElement':
        if isinstance(other, (int, Fraction)):
            return self * other
        return self._coerce(other) * self

    def __truediv__(self, other: ScalarLike) -> 'GrassmannElement':
        divisor = to_scalar(other)
        if not divisor:
            raise ZeroDivisionError("Division of a Grassmann element by zero")
        return self * (1 / divisor)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, GrassmannElement):
            return self.registry is other.registry and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == ({0: Fraction(other)} if other else {})
        return NotImplemented

    __hash__ = None

    # -- presentation ---------------------------------------------------

    def sorted_items(self) -> List[Tuple[int, Fraction]]:
        """Terms ordered by degree, then by canonical monomial order."""
        return sorted(self._terms.items(), key=lambda item: (_popcount(item[0]), item[0]))

    def to_dict(self) -> Dict[str, str]:
        """Serialize as {'a1*a2': '3/4', '1': '2'}."""
        out = {}
        for monomial, coefficient in self.sorted_items():
            key = '*'.join(self.registry.monomial_labels(monomial)) or '1'
            out[key] = str(coefficient)
        return out

    def __repr__(self) -> str:
        if not self._terms:
            return '0'
        parts = []
        for monomial, coefficient in self.sorted_items():
            labels = '*'.join(self.registry.monomial_labels(monomial))
            if not labels:
                parts.append(str(coefficient))
            elif coefficient == 1:
                parts.append(labels)
            elif coefficient == -1:
                parts.append(f"-{labels}")
            else:
                parts.append(f"({coefficient})*{labels}")
        return ' + '.join(parts).replace('+ -', '- ')


def mul(x: GrassmannElement, y: GrassmannElement) -> GrassmannElement:
    """Sign-correct product x * y (same registry)."""
    if x.registry is not y.registry:
        raise RegistryMismatchError("Grassmann elements belong to different registries")
    return x * y


def exp(x: GrassmannElement) -> GrassmannElement:
    """
    Exponential by the terminating Taylor series.

    Args:
        x: Even element with zero scalar part

    Returns:
        GrassmannElement: 1 + x + x^2/2! + ...

    Raises:
        GrassmannDomainError: If x is not even or has a nonzero scalar part
    """
    if not x.is_even():
        raise GrassmannDomainError("exp is only defined here for even elements")
    if x.scalar_part():
        raise GrassmannDomainError("exp requires an element with zero scalar part")
    result = x.registry.one()
    term = x.registry.one()
    k = 0
    while True:
        k += 1
        term = (term * x) / k
        if term.is_zero():
            return result
        result = result + term


def left_derivative(x: GrassmannElement, g: str) -> GrassmannElement:
    """
    Left derivative: bring g to the left end of each monomial, then strike it.

    Args:
        x: Element
        g: Generator label

    Returns:
        GrassmannElement: d x / d g
    """
    index = x.registry.index(g)
    bit = 1 << index
    below = bit - 1
    terms = {}
    for monomial, coefficient in x.items():
        if monomial & bit:
            terms[monomial ^ bit] = -coefficient if _popcount(monomial & below) & 1 else coefficient
    return GrassmannElement._wrap(x.registry, terms)


def right_derivative(x: GrassmannElement, g: str) -> GrassmannElement:
    """Right derivative: bring g to the right end of each monomial, then strike it."""
    index = x.registry.index(g)
    bit = 1 << index
    terms = {}
    for monomial, coefficient in x.items():
        if monomial & bit:
            terms[monomial ^ bit] = -coefficient if _popcount(monomial >> (index + 1)) & 1 else coefficient
    return GrassmannElement._wrap(x.registry, terms)


def _integration_order(registry: GeneratorRegistry, measure: Sequence[str]) -> List[int]:
    order = [registry.index(label) for label in measure]
    if len(set(order)) != len(order):
        raise GrassmannDomainError(f"Repeated generator in integration measure: {list(measure)}")
    return order


def berezin_integrate(x: GrassmannElement, gens: Sequence[str]) -> GrassmannElement:
    """
    Iterated Berezin integral; gens are listed from the outermost to the innermost.

    berezin_integrate(a*b, ['a', 'b']) is the integral over a of (the integral
    of a*b over b), which equals 1.

    Raises:
        GrassmannDomainError: If a generator is repeated
    """
    order = _integration_order(x.registry, gens)
    order.reverse()
    return GrassmannElement._wrap(x.registry, _integrate_terms(x._terms, order))


def integrate_measure(x: GrassmannElement, measure: Sequence[str]) -> GrassmannElement:
    """
    Iterated Berezin integral with the measure written as in a formula.

    For the integral of x db da the measure is ['b', 'a']: the first
    differential is the innermost integration.
    """
    order = _integration_order(x.registry, measure)
    return GrassmannElement._wrap(x.registry, _integrate_terms(x._terms, order))


def integrate_product(factors: Sequence[GrassmannElement], measure: Sequence[str]) -> GrassmannElement:
    """
    Integrate the ordered product of factors with a formula-order measure.

    The result equals integrate_measure(factors[0] * factors[1] * ..., measure).
    Products of terms are formed only when every integrated generator can
    still be covered exactly once, since all other terms integrate to zero.

    Args:
        factors: Factors of the integrand, in order
        measure: Integration measure, innermost first

    Returns:
        GrassmannElement: The integral
    """
    if not factors:
        raise GrassmannDomainError("integrate_product needs at least one factor")
    registry = factors[0].registry
    for factor in factors:
        if factor.registry is not registry:
            raise RegistryMismatchError("Grassmann elements belong to different registries")
    order = _integration_order(registry, measure)
    mask = 0
    for index in order:
        mask |= 1 << index

    grouped: List[List[Tuple[int, Terms]]] = []
    for factor in factors:
        groups: Dict[int, Terms] = {}
        for monomial, coefficient in factor.items():
            groups.setdefault(monomial & mask, {})[monomial] = coefficient
        grouped.append(sorted(groups.items()))

    reach = [0] * (len(grouped) + 1)
    for position in range(len(grouped) - 1, -1, -1):
        available = 0
        for part, _ in grouped[position]:
            available |= part
        reach[position] = reach[position + 1] | available

    total: Terms = {}
    combinations = 0

    def walk(position: int, used: int, accumulated: Terms) -> None:
        nonlocal combinations
        if position == len(grouped):
            if used == mask:
                combinations += 1
                for monomial, coefficient in accumulated.items():
                    value = total.get(monomial, 0) + coefficient
                    if value:
                        total[monomial] = value
                    else:
                        total.pop(monomial, None)
            return
        for part, terms in grouped[position]:
            if part & used:
                continue
            if (used | part | reach[position + 1]) & mask != mask:
                continue
            product = _multiply_terms(accumulated, terms)
            if product:
                walk(position + 1, used | part, product)

    walk(0, 0, {0: Fraction(1)})
    logger.debug(f"integrate_product: {len(factors)} factors, {len(order)} integrated generators, "
                 f"{combinations} surviving combinations, {len(total)} terms before integration")
    return GrassmannElement._wrap(registry, _integrate_terms(total, order))


def coefficient(x: GrassmannElement, m: Union[int, Iterable[str]]) -> Scalar:
    """Coefficient of monomial m (mask or label set, canonical order)."""
    return x.coefficient(m)


def grade(x: GrassmannElement, k: int) -> GrassmannElement:
    """Degree-k projection."""
    return x.grade(k)


def same_up_to_sign(x: GrassmannElement, y: GrassmannElement) -> bool:
    """x == y or x == -y."""
    return x == y or x == -y


class FirstOrderOperator:
    """
    A Scalar-weighted sum of left derivatives, sum_g c_g d/dg.
    """

    __slots__ = ('registry', '_coefficients')

    def __init__(self, registry: GeneratorRegistry, coefficients: Mapping[str, ScalarLike]):
        self.registry = registry
        collected: Dict[str, Fraction] = {}
        for label, value in coefficients.items():
            registry.index(label)
            value = to_scalar(value)
            total = collected.get(label, Fraction(0)) + value
            if total:
                collected[label] = total
            else:
                collected.pop(label, None)
        self._coefficients = dict(sorted(collected.items(), key=lambda item: registry.index(item[0])))

    def items(self) -> Iterator[Tuple[str, Fraction]]:
        return iter(self._coefficients.items())

    def coefficient(self, label: str) -> Fraction:
        return self._coefficients.get(label, Fraction(0))

    def support(self) -> Tuple[str, ...]:
        """Generators with nonzero coefficient, in canonical order."""
        return tuple(self._coefficients)

    def is_zero(self) -> bool:
        return not self._coefficients

    def __add__(self, other: 'FirstOrderOperator') -> 'FirstOrderOperator':
        if other.registry is not self.registry:
            raise RegistryMismatchError("Operators belong to different registries")
        merged = dict(self._coefficients)
        for label, value in other.items():
            merged[label] = merged.get(label, Fraction(0)) + value
        return FirstOrderOperator(self.registry, merged)

    def __rmul__(self, scalar: ScalarLike) -> 'FirstOrderOperator':
        factor = to_scalar(scalar)
        return FirstOrderOperator(self.registry, {g: c * factor for g, c in self.items()})

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FirstOrderOperator):
            return self.registry is other.registry and self._coefficients == other._coefficients
        return NotImplemented

    __hash__ = None

    def __call__(self, x: GrassmannElement) -> GrassmannElement:
        return apply_operator(self, x)

    def __repr__(self) -> str:
        if not self._coefficients:
            return '0'
        return ' + '.join(f"({c})*d/d{g}" for g, c in self.items())


OperatorProduct = Union[FirstOrderOperator, Sequence[FirstOrderOperator]]


def _factors(d: OperatorProduct) -> List[FirstOrderOperator]:
    return [d] if isinstance(d, FirstOrderOperator) else list(d)


def apply_operator(d: OperatorProduct, x: GrassmannElement) -> GrassmannElement:
    """
    Apply a first-order operator, or a product d1 d2 ... dk of them.

    For a product the rightmost factor acts first: d1(d2(...(dk x))).
    """
    result = x
    for factor in reversed(_factors(d)):
        if factor.registry is not result.registry:
            raise RegistryMismatchError("Operator and element belong to different registries")
        total = result.registry.zero()
        for label, value in factor.items():
            total = total + left_derivative(result, label) * value
        result = total
    return result


def normalize_inverse(d: OperatorProduct, candidate: GrassmannElement) -> GrassmannElement:
    """
    Rescale a candidate monomial so that d applied to it gives 1.

    Raises:
        OperatorInversionError: If d maps the candidate to zero or to a non-scalar
    """
    image = apply_operator(d, candidate)
    value = image.scalar_part()
    if not value or image != value:
        raise OperatorInversionError(f"Operator does not map {candidate!r} to a nonzero scalar")
    return candidate / value


def invert_operator_on_one(d: OperatorProduct,
                           registry: Optional[GeneratorRegistry] = None) -> GrassmannElement:
    """
    Find a monomial f with d f = 1.

    Each factor picks the first generator (canonical order) with a nonzero
    coefficient that no earlier factor has taken; the resulting monomial is
    divided by the scalar d maps it to. Later candidates are tried only when
    that scalar vanishes.

    Args:
        d: Operator or product of operators
        registry: Needed only when d is an empty product

    Returns:
        GrassmannElement: f with apply_operator(d, f) == 1

    Raises:
        OperatorInversionError: If no valid monomial exists
    """
    factors = _factors(d)
    if not factors:
        if registry is None:
            raise OperatorInversionError("Empty operator product without a registry")
        return registry.one()
    registry = factors[0].registry
    for position, factor in enumerate(factors):
        if factor.is_zero():
            raise OperatorInversionError(f"Operator factor {position} has no nonzero coefficient")

    chosen: List[str] = []

    def search(position: int) -> Optional[GrassmannElement]:
        if position == len(factors):
            candidate = registry.monomial(chosen)
            value = apply_operator(factors, candidate)
            if value.is_zero() or value != value.scalar_part():
                return None
            return candidate / value.scalar_part()
        for label in factors[position].support():
            if label in chosen:
                continue
            chosen.append(label)
            found = search(position + 1)
            chosen.pop()
            if found is not None:
                return found
        return None

    result = search(0)
    if result is None:
        raise OperatorInversionError("No monomial preimage of 1 exists for the operator product")
    if apply_operator(factors, result) != 1:
        raise OperatorInversionError("Operator inversion failed its postcondition")
    return result
