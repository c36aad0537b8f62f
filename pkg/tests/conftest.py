import numpy as np
import pytest

from solitonlab import Grid1D


@pytest.fixture
def grid512():
    """Standard acceptance grid: 512 points, dz = 0.1."""
    return Grid1D(512, -25.6, 25.6)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
