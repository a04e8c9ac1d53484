"""
Exact scalars and zeta-coordinate assignments.

All arithmetic in pachnercalc is carried out over the rationals using
fractions.Fraction. A ZetaAssignment attaches a distinct rational zeta_i to
every global vertex number; the differences zeta_ij = zeta_i - zeta_j are
derived on demand.
"""

import logging
import random
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple, Union

from modules.core.errors import MissingVertexError, ZetaCollisionError

Scalar = Fraction
ScalarLike = Union[int, str, Fraction]

logger = logging.getLogger('pachnercalc.scalars')

# random zeta values are n / d with |n| <= DEFAULT_NUMERATOR_BOUND, 1 <= d <= DEFAULT_DENOMINATOR_BOUND
DEFAULT_NUMERATOR_BOUND = 10 ** 6
DEFAULT_DENOMINATOR_BOUND = 997


def to_scalar(value: ScalarLike) -> Scalar:
    """
    Convert an int, a rational string such as '3/4', or a Fraction to a Scalar.

    Args:
        value: Value to convert

    Returns:
        Fraction: The exact value in lowest terms

    Raises:
        ValueError: If the value is a float or cannot be parsed
    """
    if isinstance(value, float):
        raise ValueError(f"Floating-point value {value!r} is not accepted; use an exact rational")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    text = str(value).strip()
    if not text:
        raise ValueError("Empty scalar")
    return Fraction(text)


class ZetaAssignment(Mapping[int, Scalar]):
    """
    Immutable map from global vertex numbers to pairwise distinct zeta values.
    """

    __slots__ = ('_values',)

    def __init__(self, values: Mapping[int, ScalarLike]):
        converted = {int(vertex): to_scalar(value) for vertex, value in values.items()}
        seen: Dict[Scalar, int] = {}
        for vertex in sorted(converted):
            value = converted[vertex]
            if value in seen:
                raise ZetaCollisionError(
                    f"Vertices {seen[value]} and {vertex} share the zeta value {value}")
            seen[value] = vertex
        self._values = dict(sorted(converted.items()))

    @classmethod
    def from_sequence(cls, values: Sequence[ScalarLike], start: int = 1) -> 'ZetaAssignment':
        """Assign values[0] to vertex `start`, values[1] to `start + 1`, and so on."""
        return cls({start + offset: value for offset, value in enumerate(values)})

    @classmethod
    def parse(cls, text: str, start: int = 1) -> 'ZetaAssignment':
        """
        Parse the CLI form '1,2,3,4' or '0,1/2,-3'.

        Args:
            text: Comma-separated rationals
            start: Vertex number of the first value

        Returns:
            ZetaAssignment: Parsed assignment
        """
        parts = [part for part in text.split(',')]
        if any(not part.strip() for part in parts):
            raise ValueError(f"Malformed zeta list: {text!r}")
        return cls.from_sequence([to_scalar(part) for part in parts], start=start)

    def __getitem__(self, vertex: int) -> Scalar:
        try:
            return self._values[vertex]
        except KeyError:
            raise MissingVertexError(f"No zeta value for vertex {vertex}") from None

    def __iter__(self) -> Iterator[int]:
        return iter(self._values)

    def __len__(self) -> int:
        return len(self._values)

    def __hash__(self) -> int:
        return hash(tuple(self._values.items()))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, ZetaAssignment):
            return self._values == other._values
        return NotImplemented

    def __repr__(self) -> str:
        return f"ZetaAssignment({self.to_text()})"

    def diff(self, i: int, j: int) -> Scalar:
        """zeta_i - zeta_j."""
        return self[i] - self[j]

    def renumbered(self, permutation: Mapping[int, int]) -> 'ZetaAssignment':
        """Move the value of vertex v to vertex permutation[v] (unlisted vertices stay)."""
        return ZetaAssignment({permutation.get(v, v): value for v, value in self._values.items()})

    def restricted(self, vertices: Iterable[int]) -> 'ZetaAssignment':
        return ZetaAssignment({v: self[v] for v in vertices})

    def to_text(self, separator: str = ',') -> str:
        """Serialize values in vertex order, e.g. '1,2,3/2'."""
        return separator.join(str(value) for value in self._values.values())

    def as_tuple(self) -> Tuple[Scalar, ...]:
        return tuple(self._values.values())


def zeta_diff(z: ZetaAssignment, i: int, j: int) -> Scalar:
    """
    Return zeta_ij = zeta_i - zeta_j.

    Args:
        z: Zeta assignment
        i: First vertex
        j: Second vertex

    Returns:
        Fraction: The difference (antisymmetric in i, j)

    Raises:
        MissingVertexError: If either vertex has no zeta value
    """
    return z[i] - z[j]


def random_scalar(rng: random.Random,
                  numerator_bound: int = DEFAULT_NUMERATOR_BOUND,
                  denominator_bound: int = DEFAULT_DENOMINATOR_BOUND) -> Scalar:
    """Draw a random rational with bounded numerator and denominator."""
    return Fraction(rng.randint(-numerator_bound, numerator_bound),
                    rng.randint(1, denominator_bound))


def sample_distinct_zetas(n: int, seed: int,
                          numerator_bound: int = DEFAULT_NUMERATOR_BOUND,
                          denominator_bound: int = DEFAULT_DENOMINATOR_BOUND,
                          start: int = 1) -> ZetaAssignment:
    """
    Draw n pairwise distinct rationals deterministically from a seed.

    Args:
        n: Number of vertices (numbered start, start+1, ...)
        seed: Random seed
        numerator_bound: Numerators are drawn from [-bound, bound]
        denominator_bound: Denominators are drawn from [1, bound]
        start: Number of the first vertex

    Returns:
        ZetaAssignment: The sampled assignment
    """
    if n < 1:
        raise ValueError("At least one zeta value is required")
    rng = random.Random(seed)
    values = []
    seen = set()
    while len(values) < n:
        value = random_scalar(rng, numerator_bound, denominator_bound)
        if value not in seen:
            seen.add(value)
            values.append(value)
    logger.debug(f"Sampled {n} zeta values with seed {seed}")
    return ZetaAssignment.from_sequence(values, start=start)


def zeta_samples(count: int, n: int, seed: int, **bounds) -> Iterator[ZetaAssignment]:
    """Yield `count` independent assignments derived deterministically from one seed."""
    master = random.Random(seed)
    for _ in range(count):
        yield sample_distinct_zetas(n, master.randrange(2 ** 32), **bounds)
