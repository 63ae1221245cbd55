import numpy as np
import pytest

from supersim import seeding
from supersim.linalg import PureDensity, StateVector, outer


def haar_vector(rng, d: int) -> StateVector:
    return StateVector(seeding.haar_state(rng, d))


def haar_density(rng, d: int) -> PureDensity:
    return outer(haar_vector(rng, d))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
