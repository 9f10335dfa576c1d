"""Decay-Cert time and shift grids."""

from warnings import warn
import numpy as np

DEFAULT_N_MU = 16
TOL_BISECT = 1e-10
EDGE_FRACTION = 1e-6


def check_time_grid(t_grid) -> np.ndarray:
    """Return `t_grid` as a float array after validating it.

    Args:
        t_grid (array_like): Times.

    Returns:
        np.ndarray: One-dimensional float copy of the grid.

    Raises:
        ValueError: If the grid is empty, not one-dimensional, has negative
            or non-finite entries, or is not ascending.
    """
    t = np.array(t_grid, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise ValueError("time grid must be a non-empty 1-D array")
    if not np.all(np.isfinite(t)) or np.any(t < 0):
        raise ValueError("time grid must hold finite, non-negative times")
    if np.any(np.diff(t) <= 0):
        raise ValueError("time grid must be strictly ascending")
    return t


def time_grid(t_max: float, n: int) -> np.ndarray:
    """Return `n` equidistant times on [0, t_max].

    Raises:
        ValueError: If `t_max` <= 0 or `n` < 2.

    Examples:
        >>> from decaycert.grids import time_grid
        >>> time_grid(2.0, 5)
        array([0. , 0.5, 1. , 1.5, 2. ])
    """
    if t_max <= 0:
        raise ValueError(f"t_max must be positive, got {t_max}")
    if n < 2:
        raise ValueError(f"need at least 2 grid points, got {n}")
    return np.linspace(0.0, float(t_max), int(n))


def log_time_grid(t_max: float, n: int, t_min: float = None) -> np.ndarray:
    """Return 0 followed by `n` - 1 log-spaced times from `t_min` to `t_max`.

    Args:
        t_max (float): Last time (> 0).
        n (int): Number of points (>= 2).
        t_min (float: optional): First positive time. Defaults to t_max * 1e-4.

    Returns:
        np.ndarray: Ascending grid starting at 0.

    Raises:
        ValueError: If `t_max` <= 0, `n` < 2 or `t_min` is not in (0, t_max).
    """
    if t_max <= 0:
        raise ValueError(f"t_max must be positive, got {t_max}")
    if n < 2:
        raise ValueError(f"need at least 2 grid points, got {n}")
    t_min = t_max * 1e-4 if t_min is None else t_min
    if not 0 < t_min < t_max:
        raise ValueError(f"t_min must lie in (0, {t_max}), got {t_min}")
    if n == 2:
        return np.array([0.0, float(t_max)])
    return np.concatenate([[0.0], np.geomspace(t_min, t_max, int(n) - 1)])


def mu_grid(
    gamma: float, n_mu: int = DEFAULT_N_MU, *, tol_bisect: float = TOL_BISECT
) -> np.ndarray:
    """Return `n_mu` equidistant shifts on [gamma + delta_edge, 0].

    delta_edge = max(tol_bisect, 1e-6 |gamma|) keeps the grid off gamma,
    where the certificate constant blows up. A single shift is placed at 0.
    Grids with n_mu - 1 dividing n_mu' - 1 are nested.

    Args:
        gamma (float): Spectral-shift abscissa (< 0).
        n_mu (int: optional): Number of shifts (>= 1). Default 16.
        tol_bisect (float: optional): Bisection width gamma was computed to.

    Returns:
        np.ndarray: Ascending shifts ending at 0.

    Raises:
        ValueError: If `gamma` >= 0 or `n_mu` < 1.

    Warns:
        UserWarning: If gamma is so close to 0 that the grid collapses.
    """
    if gamma >= 0:
        raise ValueError(f"gamma must be negative, got {gamma}")
    if n_mu < 1:
        raise ValueError(f"n_mu must be >= 1, got {n_mu}")
    if n_mu == 1:
        return np.array([0.0])
    edge = max(tol_bisect, EDGE_FRACTION * abs(gamma))
    start = gamma + edge
    if start >= 0:
        warn(f"gamma = {gamma} is within the edge margin of 0; using mu = 0 only",
             stacklevel=2)
        return np.array([0.0])
    return np.linspace(start, 0.0, int(n_mu))
