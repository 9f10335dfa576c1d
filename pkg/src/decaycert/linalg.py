"""Decay-Cert dense linear-algebra kernel.

Small dense symmetric and general matrix primitives. All functions are pure:
they never modify their inputs and return new arrays.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
import numpy as np
import scipy.linalg

from decaycert.exceptions import (
    ExpmOverflowError,
    NonConvergenceError,
    NotPDError,
    NotPSDError,
    NotSymmetricError,
)

logger = logging.getLogger(__name__)

TOL_SYM = 1e-12
TOL_PD = 1e-12
TOL_PSD = 1e-12


@dataclass(frozen=True, eq=False)
class EigenDecompSym:
    """Eigen-decomposition of a symmetric matrix.

    Attributes:
        values (np.ndarray): Eigenvalues in ascending order.
        vectors (np.ndarray): Orthogonal matrix whose columns are eigenvectors.
    """

    values: np.ndarray
    vectors: np.ndarray

    @property
    def dim(self) -> int:
        """Matrix dimension."""
        return len(self.values)

    def reconstruct(self) -> np.ndarray:
        """Return V diag(values) V^T."""
        return (self.vectors * self.values) @ self.vectors.T


def as_matrix(a, *, name: str = "") -> np.ndarray:
    """Return `a` as a finite, two-dimensional float array.

    Args:
        a (array_like): Matrix entries.
        name (str: optional): Name used in error messages.

    Returns:
        np.ndarray: Float copy of the input.

    Raises:
        TypeError: If `a` cannot be converted to a real array.
        ValueError: If `a` is not two-dimensional, is empty or has
            non-finite entries.
    """
    try:
        arr = np.array(a, dtype=float)
    except (TypeError, ValueError) as ex:
        raise TypeError(f"{name or 'matrix'} is not a real array: {a!r}") from ex
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"{name or 'matrix'} must be a non-empty 2-D array")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name or 'matrix'} has non-finite entries")
    return arr


def as_symmetric(a, *, name: str = "", tol: float = TOL_SYM) -> np.ndarray:
    """Validate symmetry of `a` and return its symmetrized copy (A + A^T)/2.

    Args:
        a (array_like): Square matrix.
        name (str: optional): Name used in error messages.
        tol (float: optional): Symmetry tolerance relative to the largest
            entry. Default value is 1e-12.

    Returns:
        np.ndarray: Exactly symmetric array.

    Raises:
        NotSymmetricError: If `a` is not square or not symmetric within `tol`.
    """
    arr = as_matrix(a, name=name)
    if arr.shape[0] != arr.shape[1]:
        raise NotSymmetricError(f"{name or 'matrix'} is not square: {arr.shape}", name)
    scale = np.max(np.abs(arr))
    if np.max(np.abs(arr - arr.T)) > tol * scale:
        raise NotSymmetricError(f"{name or 'matrix'} is not symmetric", name)
    return (arr + arr.T) / 2


def sym_eigen(a) -> EigenDecompSym:
    """Return the eigen-decomposition of a symmetric matrix.

    Args:
        a (array_like): Symmetric matrix.

    Returns:
        EigenDecompSym: Ascending eigenvalues and orthogonal eigenvectors.

    Raises:
        NotSymmetricError: If `a` is not symmetric.
        NonConvergenceError: If the LAPACK driver fails to converge.

    Examples:
        >>> from decaycert.linalg import sym_eigen
        >>> sym_eigen([[3.0, 0, 0], [0, 1, 0], [0, 0, 2]]).values
        array([1., 2., 3.])
    """
    arr = as_symmetric(a)
    try:
        values, vectors = scipy.linalg.eigh(arr)
    except np.linalg.LinAlgError as ex:
        raise NonConvergenceError(f"eigh failed: {ex}") from ex
    return EigenDecompSym(values=values, vectors=vectors)


def is_positive_definite(a, *, tol: float = TOL_PD, scale: float = None) -> bool:
    """Check positive definiteness with an unpivoted Cholesky factorization.

    The matrix is positive definite when the factorization succeeds and
    every pivot (squared diagonal entry of the factor) exceeds `tol * scale`.

    Args:
        a (array_like): Symmetric matrix.
        tol (float: optional): Relative pivot threshold. Default is 1e-12.
        scale (float: optional): Reference magnitude for the pivots. Defaults
            to the largest absolute entry of `a`.

    Returns:
        bool: Whether `a` is numerically positive definite.
    """
    arr = np.asarray(a, dtype=float)
    if scale is None:
        scale = float(np.max(np.abs(arr))) if arr.size else 0.0
    if scale <= 0.0:
        return False
    try:
        factor = scipy.linalg.cholesky(arr, lower=True)
    except np.linalg.LinAlgError:
        return False
    pivots = np.diag(factor) ** 2
    return bool(np.all(pivots > tol * scale))


def sym_sqrt(a, *, tol: float = TOL_PSD) -> np.ndarray:
    """Return the symmetric positive semidefinite square root of `a`.

    Eigenvalues in [-tol * ||a||, 0) are treated as rounding noise and
    clamped to zero.

    Args:
        a (array_like): Symmetric positive semidefinite matrix.
        tol (float: optional): Relative negativity allowance. Default 1e-12.

    Returns:
        np.ndarray: Symmetric S with S @ S == a.

    Raises:
        NotPSDError: If the smallest eigenvalue is below -tol * ||a||.
    """
    eig = sym_eigen(a)
    norm = max(abs(eig.values[0]), abs(eig.values[-1]))
    if eig.values[0] < -tol * norm:
        raise NotPSDError(
            f"matrix is not positive semidefinite (min eigenvalue {eig.values[0]:.3e})"
        )
    roots = np.sqrt(np.clip(eig.values, 0.0, None))
    root = (eig.vectors * roots) @ eig.vectors.T
    return (root + root.T) / 2


def inv_sym_sqrt(a) -> np.ndarray:
    """Return a^{-1/2} by solving sym_sqrt(a) X = I.

    Raises:
        NotPDError: If `a` is not positive definite.
    """
    root = sym_sqrt(a)
    if not is_positive_definite(root):
        raise NotPDError("matrix is not positive definite; no inverse square root")
    inv = scipy.linalg.solve(root, np.eye(len(root)), assume_a="pos")
    return (inv + inv.T) / 2


def spectral_norm(a) -> float:
    """Return the largest singular value of `a`.

    Examples:
        >>> from decaycert.linalg import spectral_norm
        >>> round(spectral_norm([[0.0, 1.0], [-1.0, -1.0]]), 6)
        1.618034
    """
    arr = as_matrix(a)
    try:
        return float(scipy.linalg.svdvals(arr)[0])
    except np.linalg.LinAlgError as ex:
        raise NonConvergenceError(f"SVD failed: {ex}") from ex


def expm(a, t: float = 1.0) -> np.ndarray:
    """Return the matrix exponential of t * a.

    Uses scipy's scaling-and-squaring Padé implementation.

    Args:
        a (array_like): Square matrix.
        t (float: optional): Time. Default value is 1.

    Returns:
        np.ndarray: e^{t a}.

    Raises:
        ValueError: If `a` is not square.
        ExpmOverflowError: If the result is not finite.
    """
    arr = as_matrix(a)
    if arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expm needs a square matrix, got shape {arr.shape}")
    with np.errstate(over="ignore", invalid="ignore"):
        result = scipy.linalg.expm(t * arr)
    if not np.all(np.isfinite(result)):
        raise ExpmOverflowError(f"e^(tA) overflowed at t={t!r}")
    return result


def general_eigenvalues(a) -> np.ndarray:
    """Return the eigenvalues of a general square matrix, sorted.

    Raises:
        ValueError: If `a` is not square.
        NonConvergenceError: If the QR iteration fails.
    """
    arr = as_matrix(a)
    if arr.shape[0] != arr.shape[1]:
        raise ValueError(f"eigenvalues need a square matrix, got shape {arr.shape}")
    try:
        values = scipy.linalg.eigvals(arr)
    except np.linalg.LinAlgError as ex:
        raise NonConvergenceError(f"eig failed: {ex}") from ex
    return np.sort_complex(values.astype(complex))


def spectral_abscissa(a) -> float:
    """Return max Re of the eigenvalues of `a`."""
    return float(np.max(general_eigenvalues(a).real))


def _gen_sym_eigen_extreme(a, b, index: int) -> float:
    a_sym = as_symmetric(a, name="a")
    b_sym = as_symmetric(b, name="b")
    if a_sym.shape != b_sym.shape:
        raise ValueError(f"pencil shapes differ: {a_sym.shape} and {b_sym.shape}")
    if not is_positive_definite(b_sym):
        raise NotPDError("pencil matrix b is not positive definite", "b")
    if index < 0:
        index = len(a_sym) + index
    try:
        values = scipy.linalg.eigh(
            a_sym, b_sym, eigvals_only=True, subset_by_index=[index, index]
        )
    except np.linalg.LinAlgError as ex:
        raise NonConvergenceError(f"generalized eigh failed: {ex}") from ex
    return float(values[0])


def gen_sym_eigen_lowest(a, b) -> float:
    """Return the smallest lambda with det(a - lambda b) = 0.

    The problem is reduced to a standard symmetric one by the Cholesky
    factor of `b`.

    Args:
        a (array_like): Symmetric matrix.
        b (array_like): Symmetric positive definite matrix.

    Returns:
        float: Lowest generalized eigenvalue.

    Raises:
        NotPDError: If `b` is not positive definite.
    """
    return _gen_sym_eigen_extreme(a, b, 0)


def gen_sym_eigen_highest(a, b) -> float:
    """Return the largest lambda with det(a - lambda b) = 0.

    Raises:
        NotPDError: If `b` is not positive definite.
    """
    return _gen_sym_eigen_extreme(a, b, -1)
