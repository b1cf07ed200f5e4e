import numpy as np
import pytest

from components.core.rng import make_rng


@pytest.fixture
def rng() -> np.random.Generator:
    return make_rng(12345)


def random_skew(n: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    matrix = scale * rng.standard_normal((n, n))
    return matrix - matrix.T
