import pytest

from treedec import bivariate_bicycle, color_code, gross_code
from treedec.codes import GROSS_A, GROSS_B


@pytest.fixture(scope="session")
def steane():
    return color_code(3)


@pytest.fixture(scope="session")
def cc5():
    return color_code(5)


@pytest.fixture(scope="session")
def cc7():
    return color_code(7)


@pytest.fixture(scope="session")
def bb72():
    return bivariate_bicycle(6, 6, GROSS_A, GROSS_B)


@pytest.fixture(scope="session")
def gross():
    return gross_code()
