import numpy as np
import pytest

from epcodes.bilinear import strassen_222
from epcodes.field import field_context


@pytest.fixture
def F():
    return field_context()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def strassen():
    return strassen_222()
