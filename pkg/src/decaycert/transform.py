"""Decay-Cert shift transform L(mu).

For a shift mu in (gamma, 0] the block lower-triangular matrix

    L(mu) = [[K^{1/2} K(mu)^{-1/2}, 0], [mu M^{1/2} K(mu)^{-1/2}, I]]

maps the shifted phase operator onto A - mu I. Its condition number is the
constant of the decay certificate ||e^{At}|| <= cond(L(mu)) e^{mu t}.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional
import numpy as np

import decaycert.linalg as dcl
from decaycert.exceptions import (
    DimensionMismatchError,
    PencilNotPDError,
    ShiftOutOfRangeError,
)
from decaycert.system import (
    SecondOrderSystem,
    pencil_at,
    phase_operator,
    shifted_phase_operator,
)

logger = logging.getLogger(__name__)

TOL_PIVOT = 1e-13
COND_MODES = ("exact", "lemma")


@dataclass(frozen=True)
class LemmaBounds:
    """Computable upper bounds for ||[[A, 0], [B, I]]||.

    With N = [[||A||, 0], [||B||, 1]] the matrix of block norms,
    ||[[A, 0], [B, I]]|| <= ||N|| <= sqrt(||N||_1 ||N||_inf). The block-row
    and block-column sums are kept for reference only; neither one alone
    bounds the norm (A = [2], B = [-1] has norm 2.288 > 2).

    Attributes:
        bound_quadratic (float): sqrt(1 + ||A^T A + B^T B||).
        bound_max_shift (float): max{||A||, 1} + ||B||.
        bound_sum (float): sqrt(row_sum * column_sum).
        row_sum (float): max{||A||, 1 + ||B||}.
        column_sum (float): max{||A|| + ||B||, 1}.
    """

    bound_quadratic: float
    bound_max_shift: float
    bound_sum: float
    row_sum: float
    column_sum: float

    @property
    def values(self) -> tuple:
        """The three certified bounds."""
        return (self.bound_quadratic, self.bound_max_shift, self.bound_sum)

    @property
    def best(self) -> float:
        """Smallest of the three bounds."""
        return min(self.values)


@dataclass(frozen=True)
class DecayCertificate:
    """A bound ||e^{At}|| <= c_beta * e^{beta t} for all t >= 0.

    Attributes:
        beta (float): Decay rate (<= 0).
        c_beta (float): Constant (>= 1 for certificates built here).
        mu_source (float): Shift the certificate was built from.
        cond_mode (str): "exact", "lemma", "closed_form" or "asymptotic".
        notes (str): Provenance.
    """

    beta: float
    c_beta: float
    mu_source: float
    cond_mode: str = "exact"
    notes: str = ""

    def bound(self, t) -> np.ndarray:
        """Evaluate c_beta * e^{beta t} on a scalar or array of times."""
        return self.c_beta * np.exp(self.beta * np.asarray(t, dtype=float))


@dataclass(frozen=True, eq=False)
class ShiftTransform:
    """L(mu), its independently built inverse and their norms.

    Attributes:
        mu (float): Shift.
        l (np.ndarray): L(mu).
        l_inv (np.ndarray): L(mu)^{-1} from the explicit inverse formula.
        norm_l (float): ||L(mu)||.
        norm_l_inv (float): ||L(mu)^{-1}||.
        cond_exact (float): norm_l * norm_l_inv.
        cond_lemma (float): Best Lemma bound of L times that of L^{-1}.
        lemma_l (LemmaBounds): Bounds for ||L(mu)||.
        lemma_l_inv (LemmaBounds): Bounds for ||L(mu)^{-1}||.
    """

    mu: float
    l: np.ndarray
    l_inv: np.ndarray
    norm_l: float
    norm_l_inv: float
    cond_exact: float
    cond_lemma: float
    lemma_l: LemmaBounds
    lemma_l_inv: LemmaBounds

    def cond(self, cond_mode: str = "exact") -> float:
        """Return the condition number for `cond_mode` ("exact" or "lemma")."""
        if cond_mode not in COND_MODES:
            raise ValueError(f"cond_mode must be one of {COND_MODES}, got {cond_mode!r}")
        return self.cond_exact if cond_mode == "exact" else self.cond_lemma


def lower_block(a_block, b_block) -> np.ndarray:
    """Assemble [[A, 0], [B, I]]."""
    a_block = np.asarray(a_block, dtype=float)
    b_block = np.asarray(b_block, dtype=float)
    n = a_block.shape[0]
    return np.block([[a_block, np.zeros((n, n))], [b_block, np.eye(n)]])


def lemma_bounds(a_block, b_block) -> LemmaBounds:
    """Return the three Lemma bounds for ||[[A, 0], [B, I]]||.

    Args:
        a_block (array_like): Square block A.
        b_block (array_like): Square block B of the same shape.

    Returns:
        LemmaBounds: Each value is at least the spectral norm of the block matrix.

    Raises:
        DimensionMismatchError: If the blocks differ in shape.

    Examples:
        >>> import numpy as np
        >>> from decaycert.transform import lemma_bounds
        >>> lemma_bounds(np.eye(2), np.zeros((2, 2))).bound_max_shift
        1.0
    """
    a_block = dcl.as_matrix(a_block, name="A")
    b_block = dcl.as_matrix(b_block, name="B")
    if a_block.shape != b_block.shape or a_block.shape[0] != a_block.shape[1]:
        raise DimensionMismatchError(
            f"blocks must be square of equal shape, got {a_block.shape} and {b_block.shape}"
        )
    norm_a = dcl.spectral_norm(a_block)
    norm_b = dcl.spectral_norm(b_block)
    gram = a_block.T @ a_block + b_block.T @ b_block
    row_sum = max(norm_a, 1.0 + norm_b)
    column_sum = max(norm_a + norm_b, 1.0)
    return LemmaBounds(
        bound_quadratic=float(np.sqrt(1.0 + dcl.spectral_norm(gram))),
        bound_max_shift=max(norm_a, 1.0) + norm_b,
        bound_sum=float(np.sqrt(row_sum * column_sum)),
        row_sum=row_sum,
        column_sum=column_sum,
    )


def build_transform(
    sys: SecondOrderSystem, mu: float, *, gamma: Optional[float] = None
) -> ShiftTransform:
    """Build L(mu) and L(mu)^{-1} with norms and condition numbers.

    The inverse is assembled from its own formula
    [[K(mu)^{1/2} K^{-1/2}, 0], [-mu M^{1/2} K^{-1/2}, I]], never by
    inverting L(mu) numerically.

    Args:
        sys (SecondOrderSystem): System.
        mu (float): Shift in (gamma, 0].
        gamma (float: optional): Spectral-shift abscissa; when given, shifts
            at or below it are rejected up front.

    Returns:
        ShiftTransform: The transform at `mu`.

    Raises:
        ShiftOutOfRangeError: If `mu` > 0 or `mu` <= `gamma`.
        PencilNotPDError: If K(mu) has a relative Cholesky pivot below 1e-13.
    """
    mu = float(mu)
    if mu > 0.0:
        raise ShiftOutOfRangeError(f"shift must be <= 0, got mu={mu!r}")
    if gamma is not None and mu <= gamma:
        raise ShiftOutOfRangeError(f"shift must exceed gamma={gamma!r}, got mu={mu!r}")
    n = sys.dim
    if mu == 0.0:
        # K(0) = K
        a_block, b_block = np.eye(n), np.zeros((n, n))
        a_inv, b_inv = np.eye(n), np.zeros((n, n))
    else:
        pencil = pencil_at(sys, mu, tol=TOL_PIVOT)
        if not pencil.pd:
            raise PencilNotPDError(mu)
        kmu_sqrt = dcl.sym_sqrt(pencil.value)
        kmu_inv_sqrt = dcl.inv_sym_sqrt(pencil.value)
        a_block = sys.k_sqrt @ kmu_inv_sqrt
        b_block = mu * (sys.m_sqrt @ kmu_inv_sqrt)
        a_inv = kmu_sqrt @ sys.k_inv_sqrt
        b_inv = -mu * (sys.m_sqrt @ sys.k_inv_sqrt)
    l = lower_block(a_block, b_block)
    l_inv = lower_block(a_inv, b_inv)
    norm_l = dcl.spectral_norm(l)
    norm_l_inv = dcl.spectral_norm(l_inv)
    lemma_l = lemma_bounds(a_block, b_block)
    lemma_l_inv = lemma_bounds(a_inv, b_inv)
    transform = ShiftTransform(
        mu=mu,
        l=l,
        l_inv=l_inv,
        norm_l=norm_l,
        norm_l_inv=norm_l_inv,
        cond_exact=norm_l * norm_l_inv,
        cond_lemma=lemma_l.best * lemma_l_inv.best,
        lemma_l=lemma_l,
        lemma_l_inv=lemma_l_inv,
    )
    logger.debug(
        "L(%.6g): cond_exact=%.12g cond_lemma=%.12g",
        mu,
        transform.cond_exact,
        transform.cond_lemma,
    )
    return transform


def similarity_residual(sys: SecondOrderSystem, mu: float) -> float:
    """Return ||L(mu) A_hat - (A - mu I) L(mu)|| / (||A|| ||L(mu)||).

    A_hat is the phase operator of the shifted system.
    """
    a = phase_operator(sys).a
    a_hat = shifted_phase_operator(sys, mu).a
    l = build_transform(sys, mu).l
    lhs = l @ a_hat
    rhs = (a - float(mu) * np.eye(len(a))) @ l
    return dcl.spectral_norm(lhs - rhs) / (dcl.spectral_norm(a) * dcl.spectral_norm(l))


def certificate_at(
    sys: SecondOrderSystem,
    mu: float,
    cond_mode: str = "exact",
    *,
    gamma: Optional[float] = None,
) -> DecayCertificate:
    """Return the certificate (beta = mu, C_beta = cond(L(mu))).

    Args:
        sys (SecondOrderSystem): System.
        mu (float): Shift in (gamma, 0].
        cond_mode (str: optional): "exact" (singular values) or "lemma"
            (computable block bounds). Default "exact".
        gamma (float: optional): Passed on to `build_transform`.

    Returns:
        DecayCertificate: Certificate built from L(mu).

    Raises:
        ValueError: If `cond_mode` is unknown.
        ShiftOutOfRangeError: If `mu` is out of range.
        PencilNotPDError: If K(mu) is not positive definite.
    """
    if cond_mode not in COND_MODES:
        raise ValueError(f"cond_mode must be one of {COND_MODES}, got {cond_mode!r}")
    transform = build_transform(sys, mu, gamma=gamma)
    return DecayCertificate(
        beta=transform.mu,
        c_beta=transform.cond(cond_mode),
        mu_source=transform.mu,
        cond_mode=cond_mode,
        notes=f"L(mu) condition number ({cond_mode}) at mu={transform.mu:.17g}",
    )


def closed_form_transform(k: float, d: float, mu: float):
    """Return L(mu) and L(mu)^{-1} of the single mode M=[1], C=[d], K=[k^2].

    With q = mu^2 + mu d + k^2, L(mu) = [[k/sqrt(q), 0], [mu/sqrt(q), 1]] and
    L(mu)^{-1} = [[sqrt(q)/k, 0], [-mu/k, 1]].

    Args:
        k (float): Natural frequency (> 0).
        d (float): Damping (> 0).
        mu (float): Shift with q > 0.

    Returns:
        tuple: (l, l_inv) as 2x2 arrays.

    Raises:
        ValueError: If `k` or `d` is not positive.
        PencilNotPDError: If q <= 0.
    """
    if k <= 0 or d <= 0:
        raise ValueError(f"k and d must be positive, got k={k}, d={d}")
    q = mu**2 + mu * d + k**2
    if q <= 0:
        raise PencilNotPDError(float(mu))
    root = np.sqrt(q)
    l = np.array([[k / root, 0.0], [mu / root, 1.0]])
    l_inv = np.array([[root / k, 0.0], [-mu / k, 1.0]])
    return l, l_inv
