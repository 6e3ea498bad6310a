import numpy as np
import pytest

from freezewave import WaveParams, make_grid, profile_on_grid


@pytest.fixture(scope="session")
def params():
    return WaveParams(1.5, -0.5)


@pytest.fixture(scope="session")
def std_grid():
    return make_grid(-15.0, 15.0, 300)


@pytest.fixture(scope="session")
def exact300(std_grid, params):
    return profile_on_grid(std_grid, params)


@pytest.fixture
def small_grid():
    return make_grid(0.0, 1.0, 4)


def random_smooth_profile(rng, grid):
    """Sum of a few random fronts and a slow sine; generic, non-flat, no symmetry."""
    x = grid.nodes
    w = np.zeros_like(x)
    for _ in range(3):
        w += rng.uniform(-2, 2) * np.tanh(rng.uniform(0.2, 2.0) * (x - rng.uniform(-8, 8)))
    w += rng.uniform(-1, 1) * np.sin(rng.uniform(0.1, 1.0) * x)
    return w
