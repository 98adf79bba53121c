import numpy as np
import pytest

from mimodet.config import settings


@pytest.fixture(autouse=True)
def check_finite():
    # tests run with every counted primitive checking for NaN/Inf
    previous = settings.checkFinite
    settings.checkFinite = True
    yield
    settings.checkFinite = previous


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
