"""Test-related utility functions."""

import numpy as np
from decaycert.system import SecondOrderSystem


def single_mode(k, d):
    """Return the system M=[1], C=[d], K=[k^2]."""
    return SecondOrderSystem([[1.0]], [[float(d)]], [[float(k) ** 2]])


def write_manifest(path, **entries):
    """Write `key = value` lines to a manifest file and return its path."""
    lines = [f"{key} = {value}" for key, value in entries.items()]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return str(path)


def assert_dominates(upper, lower, atol=1e-9):
    """Assert upper >= lower pointwise within `atol`."""
    upper = np.asarray(upper, dtype=float)
    lower = np.asarray(lower, dtype=float)
    worst = float(np.max(lower - upper))
    assert worst <= atol, f"bound violated by {worst:.3e}"
