import numpy as np
import pytest

from epicontrol.graph import Network


def random_network(rng, n_min=2, n_max=50, p=None):
    """Erdos-Renyi graph with at least one edge."""
    n = int(rng.integers(n_min, n_max + 1))
    if p is None:
        p = min(1.0, 2.0 / max(n - 1, 1) + 0.1)
    while True:
        mask = rng.random((n, n)) < p
        edges = [(i, j) for i in range(n) for j in range(i + 1, n) if mask[i, j]]
        if edges:
            return Network(n, edges)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def path3():
    # a - b - c
    return Network(3, [(0, 1), (1, 2)], node_labels=["a", "b", "c"])


@pytest.fixture
def triangle():
    return Network(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def star4():
    # center 0 with three leaves
    return Network(4, [(0, 1), (0, 2), (0, 3)])
