import pytest
from hypothesis import HealthCheck, settings

from modules.core.moves import move_cluster
from modules.core.scalars import ZetaAssignment, sample_distinct_zetas

settings.register_profile(
    "pachnercalc",
    deadline=None,
    max_examples=25,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("pachnercalc")


@pytest.fixture
def z5() -> ZetaAssignment:
    return sample_distinct_zetas(5, seed=11)


@pytest.fixture
def z6() -> ZetaAssignment:
    return sample_distinct_zetas(6, seed=23)


@pytest.fixture
def small_z5() -> ZetaAssignment:
    return ZetaAssignment.from_sequence([0, 1, 3, 7, 12])


@pytest.fixture
def small_z6() -> ZetaAssignment:
    return ZetaAssignment.from_sequence([0, 1, 3, 8, 17, 21])


@pytest.fixture
def cluster_23():
    return move_cluster('2-3')


@pytest.fixture
def cluster_14():
    return move_cluster('1-4')
