import numpy as np
import pytest

from bergman_jets.routers.composition_router import CompositionRouter


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


@pytest.fixture
def router():
    """A router of its own, so statistics start from zero."""
    return CompositionRouter()
