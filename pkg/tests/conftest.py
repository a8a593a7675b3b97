import numpy as np
import pytest

from entmono import catalog
from entmono.rng import haar_random_state, stream_rng


@pytest.fixture
def ghz():
    return catalog.ghz()


@pytest.fixture
def w():
    return catalog.w()


@pytest.fixture
def bell_prod():
    return catalog.bell_prod()


@pytest.fixture
def kempe1():
    return catalog.kempe1()


@pytest.fixture
def kempe2():
    return catalog.kempe2()


def random_states(dims, count, seed):
    """Seeded batch of normalized Haar states for property loops."""
    return [haar_random_state(dims, stream_rng(seed, i)) for i in range(count)]


def random_matrix(rng, n, m=None):
    m = n if m is None else m
    return rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
