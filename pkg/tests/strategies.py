"""Hypothesis strategies shared by the test modules."""

from fractions import Fraction

from hypothesis import strategies as st

from modules.core.grassmann import GeneratorRegistry
from modules.core.scalars import ZetaAssignment

LABELS = ("a", "b", "c", "d", "e", "f")
REGISTRY = GeneratorRegistry(LABELS)


def rationals(bound: int = 50) -> st.SearchStrategy[Fraction]:
    return st.fractions(min_value=-bound, max_value=bound, max_denominator=12)


def zeta_assignments(n: int) -> st.SearchStrategy[ZetaAssignment]:
    """Pairwise distinct rational zetas on the vertices 1..n."""
    return st.lists(rationals(), min_size=n, max_size=n, unique=True).map(ZetaAssignment.from_sequence)


@st.composite
def grassmann_elements(draw, registry: GeneratorRegistry = REGISTRY, max_terms: int = 4, max_degree: int = 3):
    element = registry.zero()
    for _ in range(draw(st.integers(min_value=0, max_value=max_terms))):
        chosen = draw(st.lists(st.sampled_from(registry.labels), max_size=max_degree, unique=True))
        element = element + registry.monomial(chosen, draw(rationals(9)))
    return element


@st.composite
def homogeneous_elements(draw, degree: int, registry: GeneratorRegistry = REGISTRY, max_terms: int = 3):
    element = registry.zero()
    for _ in range(draw(st.integers(min_value=1, max_value=max_terms))):
        chosen = draw(st.lists(st.sampled_from(registry.labels), min_size=degree, max_size=degree, unique=True))
        element = element + registry.monomial(chosen, draw(rationals(9)))
    return element
