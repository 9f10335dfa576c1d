"""Decay-Cert curve frames, CSV output and curve statistics."""

from __future__ import annotations

import numpy as np
import pandas as pd
import scipy.stats

CSV_FLOAT_FORMAT = "%.17g"


def envelope_frame(curve) -> pd.DataFrame:
    """Return an envelope curve as a frame with columns t, bound, best_mu.

    An `oracle_norm` column is added when the curve carries oracle norms.
    """
    frame = pd.DataFrame(
        {"t": curve.t_grid, "bound": curve.bound, "best_mu": curve.best_mu}
    )
    if curve.oracle_norm is not None:
        frame["oracle_norm"] = curve.oracle_norm
    return frame


def norm_frame(curve) -> pd.DataFrame:
    """Return a norm curve as a frame with columns t, norm."""
    return pd.DataFrame({"t": curve.t_grid, "norm": curve.norms})


def write_csv(frame: pd.DataFrame, path=None):
    """Write `frame` as CSV with 17 significant digits and no index.

    Args:
        frame (pd.DataFrame): Frame to write.
        path (str or file-like: optional): Destination. If omitted the CSV
            text is returned.

    Returns:
        str or None: CSV text when `path` is None.

    Raises:
        TypeError: If `frame` is not a pd.DataFrame.
    """
    if not isinstance(frame, pd.DataFrame):
        raise TypeError(f"{frame}, is not pd.DataFrame")
    return frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")


def tail_slope(t_grid, values) -> float:
    """Least-squares slope of log(values) over the last decade of t.

    The last decade is t >= t_max / 10. Zero times and non-positive values
    are ignored.

    Args:
        t_grid (array_like): Times.
        values (array_like): Positive curve values on `t_grid`.

    Returns:
        float: Fitted exponential rate.

    Raises:
        ValueError: If fewer than two usable points remain.

    Examples:
        >>> import numpy as np
        >>> from decaycert.curves import tail_slope
        >>> t = np.linspace(0, 10, 11)
        >>> round(tail_slope(t, np.exp(-0.5 * t)), 12)
        -0.5
    """
    t = np.asarray(t_grid, dtype=float)
    v = np.asarray(values, dtype=float)
    mask = (t >= t.max() / 10) & (t > 0) & (v > 0)
    if mask.sum() < 2:
        raise ValueError("tail fit needs at least two positive points")
    fit = scipy.stats.linregress(t[mask], np.log(v[mask]))
    return float(fit.slope)


def slack_stats(slack) -> dict:
    """Return distribution statistics of a slack curve.

    Args:
        slack (array_like or pd.Series): Bound minus norm on a time grid.

    Returns:
        dict: Key-value pairs with name of statistic and calculated value.

    Raises:
        TypeError: If `slack` is not numeric.
    """
    series = pd.Series(slack)
    if not pd.api.types.is_numeric_dtype(series.dtype):
        raise TypeError(f"slack statistics need numeric values, got {series.dtype}")
    stats = {
        "count": series.count(),
        "min": series.min(),
        "max": series.max(),
        "mean": series.mean(),
        "median": series.median(),
    }
    _add_quantiles(series, stats)
    stats["standard deviation"] = series.std()
    stats["median absolute deviation"] = scipy.stats.median_abs_deviation(
        series, nan_policy="omit"
    )
    return _order_stats(stats)


def _add_quantiles(series: pd.Series, d: dict):
    """Add quantiles to slack_stats."""
    for q in (0.01, 0.05, 0.5, 0.95, 0.99):
        d[f"{q:.0%}"] = series.quantile(q)


def _order_stats(stats: dict) -> dict:
    """Sort stats dictionary by the order of all_stats."""
    all_stats = [
        "count",
        "min",
        "1%",
        "5%",
        "50%",
        "95%",
        "99%",
        "max",
        "mean",
        "standard deviation",
        "median",
        "median absolute deviation",
    ]
    stats_order = dict(zip(all_stats, range(len(all_stats))))
    key_list = sorted(stats.keys(), key=lambda k: stats_order[k])
    return {k: stats[k] for k in key_list}
