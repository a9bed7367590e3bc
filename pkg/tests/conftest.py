import numpy as np
import pytest

from szego.samples import random_generic_symbol


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def generic_suite():
    """Fifty seeded generic symbols with rank cycling through 1..6."""
    out = []
    for i in range(50):
        out.append(random_generic_symbol(np.random.default_rng([7, i]), 1 + i % 6, 128))
    return out
