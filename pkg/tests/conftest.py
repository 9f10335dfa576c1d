"""Shared pytest fixtures for Decay-Cert tests.

Note that fixtures with a package-scope are run once and then available as
cached value.
"""

import os
import numpy as np
import pytest
from decaycert.system import SecondOrderSystem, load_system, random_system
from .utils import single_mode

TEST_DATA_DIR = "tests/test_data"
SEEDS = (3, 11, 29)


@pytest.fixture
def underdamped_mode(scope="package"):  # pylint: disable=W0613
    """Return the single mode x'' + x' + x = 0."""
    return single_mode(1.0, 1.0)


@pytest.fixture
def critical_mode(scope="package"):  # pylint: disable=W0613
    """Return the critically damped single mode x'' + 2 x' + x = 0."""
    return single_mode(1.0, 2.0)


@pytest.fixture
def overdamped_mode(scope="package"):  # pylint: disable=W0613
    """Return the overdamped single mode x'' + 3 x' + x = 0."""
    return single_mode(1.0, 3.0)


@pytest.fixture
def critical_sys(scope="package"):  # pylint: disable=W0613
    """Return the critically damped system with M = K = I, C = 2I."""
    return load_system(os.path.join(TEST_DATA_DIR, "critical.toml"))


@pytest.fixture
def two_mass_sys(scope="package"):  # pylint: disable=W0613
    """Return the two-mass system read from MatrixMarket files."""
    return load_system(os.path.join(TEST_DATA_DIR, "two_mass.toml"))


@pytest.fixture
def generic_systems(scope="package"):  # pylint: disable=W0613
    """Return random systems with independent M, C and K."""
    return [
        random_system(dim, np.random.default_rng(seed))
        for dim, seed in zip((2, 3, 4), SEEDS)
    ]


@pytest.fixture
def overdamped_systems(scope="package"):  # pylint: disable=W0613
    """Return random systems with one heavily damped direction."""
    return [
        random_system(dim, np.random.default_rng(seed), kind="partially_overdamped")
        for dim, seed in zip((2, 3), SEEDS)
    ]


@pytest.fixture
def modal_sys(scope="package"):  # pylint: disable=W0613
    """Return a random modally damped system."""
    return random_system(3, np.random.default_rng(7), kind="modal")


@pytest.fixture
def non_system_invalid(scope="package"):  # pylint: disable=W0613
    """Provide list of objects that are not SecondOrderSystem."""
    invalid_types = [
        None,
        False,
        0,
        34.5,
        "system",
        {"M": [1], "C": [1], "K": [1]},
        [1, 2, 3],
        np.eye(2),
    ]
    return invalid_types


@pytest.fixture
def diagonal_sys(scope="package"):  # pylint: disable=W0613
    """Return an uncoupled system of three modes."""
    return SecondOrderSystem(np.eye(3), np.diag([1.0, 3.0, 0.5]), np.diag([1.0, 1.0, 4.0]))
