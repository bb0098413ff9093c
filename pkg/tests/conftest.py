"""Pytest configuration and fixtures"""

import pytest

from besselk_ad.numerics.besselk import BranchConfig
from besselk_ad.numerics.likelihood import Dataset, grid_locations, simulate
from besselk_ad.numerics.matern import MaternParams


@pytest.fixture
def branch_config():
    """Fixture providing the default branch thresholds"""
    return BranchConfig()


@pytest.fixture
def true_theta():
    """Fixture providing the parameters small datasets are simulated from"""
    return MaternParams(1.2, 0.4, 1.3)


@pytest.fixture
def small_dataset(true_theta):
    """Fixture providing a 4x4 grid with three replicates"""
    return simulate(true_theta, grid_locations(4), m=3, seed=7)


@pytest.fixture
def tiny_dataset():
    """Fixture providing five scattered points in the unit square"""
    locations = [[0.1, 0.2], [0.8, 0.3], [0.4, 0.9], [0.55, 0.5], [0.2, 0.7]]
    replicates = [[0.3, -1.1, 0.8, 0.05, -0.4], [1.2, 0.1, -0.6, 0.9, 0.2]]
    return Dataset(locations, replicates)


@pytest.fixture
def temp_config(tmp_path):
    """Fixture providing a temporary config file"""
    config_path = tmp_path / "config.yaml"
    config_path.write_text("""
        a1: 9.0
        t4: 16
        near_int_tol: 0.001
    """)
    return config_path


@pytest.fixture
def oracle():
    """Fixture providing the mpmath oracle module; skips when mpmath is missing"""
    pytest.importorskip("mpmath")
    from besselk_ad.oracle import quadrature

    return quadrature
