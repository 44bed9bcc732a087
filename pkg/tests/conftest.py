import numpy as np
import pytest
from hypothesis import settings

from nlsdress.boundary import build_boundary_chain
from nlsdress.presets import PRESETS


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture(scope="session")
def preset_chains():
    return {name: build_boundary_chain(p.boundary, p.solitons) for name, p in PRESETS.items()}


settings.register_profile("repro", derandomize=True)
settings.load_profile("repro")
