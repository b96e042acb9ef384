import numpy as np
import pytest


def _random_hermitian(N, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(N, N)) + 1j * rng.normal(size=(N, N))
    return 0.5 * (X + X.conj().T)


def _random_density(N, seed=0, pure=False):
    rng = np.random.default_rng(seed)
    k = 1 if pure else N
    X = rng.normal(size=(N, k)) + 1j * rng.normal(size=(N, k))
    rho = X @ X.conj().T
    return rho / np.trace(rho).real


@pytest.fixture
def random_hermitian():
    return _random_hermitian


@pytest.fixture
def random_density():
    return _random_density


@pytest.fixture
def pauli():
    return (np.eye(2, dtype=complex),
            np.array([[0, 1], [1, 0]], dtype=complex),
            np.array([[0, -1j], [1j, 0]], dtype=complex),
            np.array([[1, 0], [0, -1]], dtype=complex))
