import math

import numpy as np
import pytest


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def random_thetas(rng: np.random.Generator) -> np.ndarray:
    return rng.uniform(0.0, math.tau, 20)
