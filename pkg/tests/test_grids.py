"""Tests for functions in grids.py."""

import numpy as np
import pytest
import decaycert.grids as dcg


def test_time_grid():
    """Equidistant times from 0 to t_max."""
    assert np.array_equal(dcg.time_grid(2.0, 5), [0.0, 0.5, 1.0, 1.5, 2.0])
    with pytest.raises(ValueError):
        dcg.time_grid(0.0, 5)
    with pytest.raises(ValueError):
        dcg.time_grid(1.0, 1)


def test_log_time_grid():
    """Zero followed by log-spaced times."""
    grid = dcg.log_time_grid(100.0, 6)
    assert len(grid) == 6
    assert grid[0] == 0.0
    assert grid[1] == pytest.approx(1e-2)
    assert grid[-1] == pytest.approx(100.0)
    assert np.all(np.diff(grid) > 0)
    assert np.allclose(np.diff(np.log(grid[1:])), np.log(10.0))
    assert np.array_equal(dcg.log_time_grid(3.0, 2), [0.0, 3.0])
    assert dcg.log_time_grid(10.0, 3, t_min=1.0)[1] == pytest.approx(1.0)


def test_log_time_grid_invalid():
    """Bad bounds and sizes are rejected."""
    with pytest.raises(ValueError):
        dcg.log_time_grid(-1.0, 10)
    with pytest.raises(ValueError):
        dcg.log_time_grid(1.0, 1)
    with pytest.raises(ValueError):
        dcg.log_time_grid(1.0, 10, t_min=2.0)


def test_check_time_grid():
    """Grids must be non-empty, finite, non-negative and ascending."""
    assert np.array_equal(dcg.check_time_grid([0, 1, 2]), [0.0, 1.0, 2.0])
    invalid_grids = [[], [[0.0, 1.0]], [0.0, np.inf], [-1.0, 0.0], [0.0, 0.0], [2.0, 1.0]]
    for invalid in invalid_grids:
        with pytest.raises(ValueError):
            dcg.check_time_grid(invalid)


def test_mu_grid():
    """Shifts run from just above gamma to 0."""
    grid = dcg.mu_grid(-2.0, 5)
    assert len(grid) == 5
    assert grid[-1] == 0.0
    assert grid[0] == pytest.approx(-2.0 + 2e-6)
    assert np.all(np.diff(grid) > 0)
    assert np.array_equal(dcg.mu_grid(-2.0, 1), [0.0])
    small = dcg.mu_grid(-1e-6, 3)
    assert small[0] == pytest.approx(-1e-6 + 1e-10)


def test_mu_grid_nested():
    """Grids of 5 and 17 shifts are nested."""
    coarse = dcg.mu_grid(-0.7, 5)
    fine = dcg.mu_grid(-0.7, 17)
    assert np.allclose(fine[::4], coarse, rtol=0, atol=1e-15)


def test_mu_grid_invalid():
    """gamma must be negative and at least one shift requested."""
    with pytest.raises(ValueError):
        dcg.mu_grid(0.0, 4)
    with pytest.raises(ValueError):
        dcg.mu_grid(-1.0, 0)
    with pytest.warns(UserWarning):
        assert np.array_equal(dcg.mu_grid(-1e-11, 4), [0.0])
