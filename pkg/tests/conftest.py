import numpy as np
import pytest

from sepkit import _kernels


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # compile the numba kernels once so individual tests measure steady state
    _kernels.warmup()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_hermitian(rng, n, scale=1.0):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    h = (g + g.conj().T) / 2.0
    return scale * h


def random_density(rng, n):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


@pytest.fixture
def make_hermitian(rng):
    return lambda n, scale=1.0: random_hermitian(rng, n, scale)


@pytest.fixture
def make_density(rng):
    return lambda n: random_density(rng, n)
