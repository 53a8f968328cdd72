import numpy as np
import pytest

from qgalois import QContext


@pytest.fixture
def ctx() -> QContext:
    return QContext(0.5)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)
