"""Decay-Cert exceptions.

Every error raised for a domain reason derives from `DecayCertError` and
from the builtin it refines, so callers can catch either.
"""

import numpy as np


class DecayCertError(Exception):
    """Base class for all Decay-Cert errors."""


class NonConvergenceError(DecayCertError, np.linalg.LinAlgError):
    """Raised when an eigenvalue iteration fails to converge."""


class ExpmOverflowError(DecayCertError, OverflowError):
    """Raised when a matrix exponential leaves the representable range."""


class NotSymmetricError(DecayCertError, ValueError):
    """Raised when a matrix is not symmetric within tolerance."""

    def __init__(self, msg: str, name: str = ""):
        super().__init__(msg)
        self.name = name


class NotPSDError(DecayCertError, ValueError):
    """Raised when a matrix has a clearly negative eigenvalue."""


class NotPDError(DecayCertError, ValueError):
    """Raised when a matrix is required to be positive definite but is not.

    Attributes:
        name (str): Name of the offending matrix ("M", "C", "K") if known.
    """

    def __init__(self, msg: str, name: str = ""):
        super().__init__(msg)
        self.name = name


class DimensionMismatchError(DecayCertError, ValueError):
    """Raised when the matrices of a system disagree in shape."""


class PencilNotPDError(DecayCertError, ValueError):
    """Raised when the quadratic pencil K(mu) is not positive definite.

    Attributes:
        mu (float): The shift at which definiteness failed.
    """

    def __init__(self, mu: float):
        super().__init__(f"K(mu) is not positive definite at mu={mu!r}")
        self.mu = mu


class ZeroShiftError(DecayCertError, ValueError):
    """Raised when a formula divides by a shift that is zero."""


class ShiftOutOfRangeError(DecayCertError, ValueError):
    """Raised when a shift lies outside (gamma, 0]."""


class NoDecayBoundError(DecayCertError, ArithmeticError):
    """Raised when gamma_0 is numerically zero and no certificate exists.

    Attributes:
        result: The halted gamma computation, if available.
    """

    def __init__(self, msg: str, result=None):
        super().__init__(msg)
        self.result = result


class ZeroVectorError(DecayCertError, ValueError):
    """Raised when a Rayleigh quotient is requested for the zero vector."""


class NonPositiveDampingError(DecayCertError, ValueError):
    """Raised when a damping coefficient sample is not strictly positive."""


class InvalidShiftError(DecayCertError, ValueError):
    """Raised when a wave-bound denominator is not positive at the shift."""


class ManifestError(DecayCertError, ValueError):
    """Raised when a system manifest cannot be parsed."""
