"""Shared fixtures for the anleak test suite."""

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("anleak", deadline=None)
settings.load_profile("anleak")


@pytest.fixture
def rng():
    """Deterministic generator, fresh per test."""
    return np.random.default_rng(1234)
