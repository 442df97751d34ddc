import numpy as np
import pytest

from core.model import PairCoupling


@pytest.fixture
def coupling():
    return PairCoupling()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
