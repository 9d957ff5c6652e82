"""
Shared fixtures for the test suite.
"""
import numpy as np
import pytest

from nwskit.config import DEFAULT_SEED
from nwskit.models import CoefficientTriple


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running numerical acceptance checks (deselect with -m 'not slow')")


@pytest.fixture
def rng():
    return np.random.default_rng(DEFAULT_SEED)


@pytest.fixture
def unit_triple():
    """u_t = u_xx + u − u³."""
    return CoefficientTriple.from_strings("1", "1", "1", (0.0, 1.0))


@pytest.fixture
def exp_triple():
    """(1, 0, eᵗ), reducible with λ = 1/2."""
    return CoefficientTriple.from_strings("1", "0", "exp(t)", (0.0, 2.0))


@pytest.fixture
def power_triple():
    """(1, 1 − 1/t, t²) on [0.5, 3], reducible with λ = 1."""
    return CoefficientTriple.from_strings("1", "1 - 1/t", "t^2", (0.5, 3.0))


@pytest.fixture
def decaying_triple():
    """(1, −1/2, e⁻ᵗ), reducible with λ = −1."""
    return CoefficientTriple.from_strings("1", "-0.5", "exp(-t)", (0.0, 2.0))
