import pytest

from qconv.code import example_code
from qconv.structure import logical_ops, standard_form

QCC5_GENS = ["ZXXZIII", "IZXXZII", "IIZXXZI", "IIIZXXZ"]


@pytest.fixture(scope="session")
def qcc5():
    return example_code("qcc5")


@pytest.fixture(scope="session")
def cat2():
    return example_code("cat2")


@pytest.fixture(scope="session")
def qcc5_sf(qcc5):
    return standard_form(qcc5)


@pytest.fixture(scope="session")
def qcc5_lo(qcc5_sf):
    return logical_ops(qcc5_sf)
