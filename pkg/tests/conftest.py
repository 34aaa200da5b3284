import pytest

from qcongruence import genfun, uops, verify


@pytest.fixture(scope="session")
def partition_table():
    """Partition numbers through the largest index any test needs."""
    return genfun.partition_coefficients(62474)


@pytest.fixture(scope="session")
def modular_equation():
    return uops.recover_modular_equation(500, 100)


@pytest.fixture(scope="session")
def power_tables():
    return {parity: uops.u5_power_table(parity, 15) for parity in (0, 1)}


@pytest.fixture(scope="session")
def eigen100():
    return verify.eigen_setup(100)
