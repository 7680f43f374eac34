import numpy as np
import pytest


def crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def rev(n):
    return np.eye(n)[::-1]


def jmat(n):
    m = n // 2
    j = np.zeros((n, n))
    j[:m, m:] = np.eye(m)
    j[m:, :m] = -np.eye(m)
    return j


def pairing_distance(values, partner):
    """Largest distance from each value to the nearest ``partner`` of another value."""
    w = np.asarray(values)
    p = partner(w)
    return max(np.min(np.abs(w - q)) for q in p) if w.size else 0.0


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
