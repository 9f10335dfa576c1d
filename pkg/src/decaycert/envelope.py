"""Decay-Cert decay envelopes and comparison bounds.

An envelope is the pointwise minimum over a grid of shifts mu in (gamma, 0]
of the certified curves cond(L(mu)) e^{mu t}. This module also classifies
partial overdamping, computes the comparison abscissa gamma_b and treats
modally damped systems mode by mode.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional
from warnings import warn
import numpy as np

import decaycert.linalg as dcl
from decaycert import curves, grids, oracle
from decaycert.spectral import TOL_BISECT, compute_gamma, gamma_zero
from decaycert.system import SecondOrderSystem, phase_operator
from decaycert.transform import (
    DecayCertificate,
    certificate_at,
    closed_form_transform,
)

logger = logging.getLogger(__name__)

TOL_COMMUTE = 1e-10
TOL_MODAL_OFFDIAG = 1e-8
TOL_COROLLARY = 1e-6
MODAL_WEIGHT = 0.6180339887498949


@dataclass(frozen=True, eq=False)
class EnvelopeCurve:
    """Pointwise minimum of certified decay curves.

    Attributes:
        t_grid (np.ndarray): Ascending times.
        bound (np.ndarray): min over certificates of c_beta e^{beta t}.
        best_mu (np.ndarray): Shift attaining the minimum at each time.
        oracle_norm (np.ndarray or None): ||e^{At}|| when requested.
        gamma (float): Spectral-shift abscissa the grid was placed against.
        certificates (tuple): The certificates the minimum runs over.
    """

    t_grid: np.ndarray
    bound: np.ndarray
    best_mu: np.ndarray
    oracle_norm: Optional[np.ndarray] = None
    gamma: float = float("nan")
    certificates: tuple = field(default_factory=tuple)

    @property
    def mus(self) -> np.ndarray:
        """Shifts of the certificates."""
        return np.array([cert.beta for cert in self.certificates])

    def to_frame(self):
        """Return the curve as a DataFrame (t, bound, best_mu[, oracle_norm])."""
        return curves.envelope_frame(self)


@dataclass(frozen=True)
class ComparisonReport:
    """gamma next to the comparison abscissa gamma_b and the spectral abscissa.

    Attributes:
        gamma (float): Spectral-shift abscissa.
        gamma_b (float): Comparison abscissa.
        gamma0 (float): -inf x^T C x / (2 x^T M x).
        partially_overdamped (bool): Whether gamma > gamma0.
        spectral_abscissa (float): max Re of the eigenvalues of A.
        smaller (str): "gamma", "gamma_b" or "equal".
        remark_ii (bool): Whether K(gamma) is positive definite.
        path (str): How gamma was obtained.
        bisection_iterations (int): Bisection steps taken for gamma.
    """

    gamma: float
    gamma_b: float
    gamma0: float
    partially_overdamped: bool
    spectral_abscissa: float
    smaller: str
    remark_ii: bool = False
    path: str = ""
    bisection_iterations: int = 0


def _curves(certificates, t_grid: np.ndarray) -> np.ndarray:
    """Stack c_beta e^{beta t} of each certificate into rows."""
    return np.vstack([cert.bound(t_grid) for cert in certificates])


def _minimum(certificates, t_grid):
    stacked = _curves(certificates, t_grid)
    best = np.argmin(stacked, axis=0)
    mus = np.array([cert.beta for cert in certificates])
    return stacked[best, np.arange(len(t_grid))], mus[best]


def envelope(
    sys: SecondOrderSystem,
    n_mu: int = grids.DEFAULT_N_MU,
    t_grid=None,
    with_oracle: bool = False,
    *,
    cond_mode: str = "exact",
    mus=None,
    tol_bisect: float = TOL_BISECT,
) -> EnvelopeCurve:
    """Return the envelope of certified decay curves on a grid of shifts.

    Args:
        sys (SecondOrderSystem): System.
        n_mu (int: optional): Number of shifts. Default 16.
        t_grid (array_like: optional): Ascending non-negative times. Defaults
            to 200 log-spaced points on [0, 50 / |gamma|].
        with_oracle (bool: optional): Also compute ||e^{At}|| on the grid.
        cond_mode (str: optional): "exact" or "lemma".
        mus (array_like: optional): Explicit shifts in (gamma, 0], replacing
            the default grid.
        tol_bisect (float: optional): Bisection width for gamma.

    Returns:
        EnvelopeCurve: Envelope, minimizing shifts and optional oracle.

    Raises:
        NoDecayBoundError: If gamma_0 is numerically zero.
        PencilNotPDError: If an explicit shift has K(mu) not positive definite.

    Examples:
        >>> from decaycert.system import SecondOrderSystem
        >>> from decaycert.envelope import envelope
        >>> sys = SecondOrderSystem([[1.0]], [[1.0]], [[1.0]])
        >>> envelope(sys, n_mu=1, t_grid=[0.0, 1.0]).bound
        array([1., 1.])
    """
    gamma = compute_gamma(sys, tol_bisect).gamma
    if mus is None:
        mus = grids.mu_grid(gamma, n_mu, tol_bisect=tol_bisect)
    mus = np.asarray(mus, dtype=float)
    if t_grid is None:
        t_grid = grids.log_time_grid(50.0 / abs(gamma), 200)
    t_grid = grids.check_time_grid(t_grid)
    logger.debug("envelope: gamma=%.12g, mu grid %s", gamma, mus)
    certificates = tuple(certificate_at(sys, mu, cond_mode) for mu in mus)
    bound, best_mu = _minimum(certificates, t_grid)
    norms = oracle.norm_curve(sys, t_grid).norms if with_oracle else None
    return EnvelopeCurve(
        t_grid=t_grid,
        bound=bound,
        best_mu=best_mu,
        oracle_norm=norms,
        gamma=gamma,
        certificates=certificates,
    )


def batkai_bound(sys: SecondOrderSystem) -> float:
    """Return the comparison abscissa gamma_b.

    gamma_b = max{gamma_0, -1 / (lambda_max(C, K) + 2 sqrt(lambda_max(M, K)))}
    where lambda_max(X, Y) is the largest eigenvalue of the pencil X - lambda Y.
    For a single mode M=[1], C=[d], K=[k^2] this is
    max{-k^2 / (d + 2 k), -d/2}.

    Examples:
        >>> from decaycert.system import SecondOrderSystem
        >>> from decaycert.envelope import batkai_bound
        >>> round(batkai_bound(SecondOrderSystem([[1.0]], [[1.0]], [[1.0]])), 12)
        -0.333333333333
    """
    gamma0 = gamma_zero(sys)
    damping = dcl.gen_sym_eigen_highest(sys.c, sys.k)
    stiffness = dcl.gen_sym_eigen_highest(sys.m, sys.k)
    return max(gamma0, -1.0 / (damping + 2.0 * np.sqrt(stiffness)))


def classify(sys: SecondOrderSystem, *, tol_bisect: float = TOL_BISECT) -> ComparisonReport:
    """Compare gamma with gamma_0, gamma_b and the spectral abscissa.

    A system is partially overdamped when gamma exceeds gamma_0; gamma then
    equals the spectral abscissa of the phase operator.

    Warns:
        UserWarning: If gamma_b lies below gamma, or if a partially
            overdamped system has gamma away from the spectral abscissa.

    Raises:
        NoDecayBoundError: If gamma_0 is numerically zero.
    """
    result = compute_gamma(sys, tol_bisect)
    gamma_b = batkai_bound(sys)
    abscissa = dcl.spectral_abscissa(phase_operator(sys).a)
    tol = 10 * tol_bisect * max(1.0, abs(result.gamma0))
    partially_overdamped = result.gamma > result.gamma0 + tol
    if partially_overdamped and abs(result.gamma - abscissa) > TOL_COROLLARY:
        warn(
            f"partially overdamped but gamma={result.gamma:.12g} differs from "
            f"spectral abscissa {abscissa:.12g}",
            stacklevel=2,
        )
    if gamma_b < result.gamma - tol:
        smaller = "gamma_b"
        warn(
            f"gamma_b={gamma_b:.12g} lies below gamma={result.gamma:.12g}",
            stacklevel=2,
        )
    elif result.gamma < gamma_b - tol:
        smaller = "gamma"
    else:
        smaller = "equal"
    report = ComparisonReport(
        gamma=result.gamma,
        gamma_b=gamma_b,
        gamma0=result.gamma0,
        partially_overdamped=partially_overdamped,
        spectral_abscissa=abscissa,
        smaller=smaller,
        remark_ii=result.remark_ii,
        path=result.path,
        bisection_iterations=result.bisection_iterations,
    )
    logger.debug("classify: %s", report)
    return report


def modal_decompose(
    sys: SecondOrderSystem, *, tol_commute: float = TOL_COMMUTE
) -> Optional[list]:
    """Split a modally damped system into single modes.

    In the coordinates M^{1/2} x the system has damping C~ = M^{-1/2} C M^{-1/2}
    and stiffness K~ = M^{-1/2} K M^{-1/2}. When these commute they share an
    orthonormal eigenbasis and the system is an orthogonal sum of modes
    M=[1], C=[d_i], K=[k_i^2].

    Args:
        sys (SecondOrderSystem): System.
        tol_commute (float: optional): Relative commutator tolerance.

    Returns:
        list or None: (k_i, d_i) pairs, or None when the system is not
            modally damped.
    """
    mh = sys.m_inv_sqrt
    c_mod = dcl.as_symmetric(mh @ sys.c @ mh, tol=1e-8)
    k_mod = dcl.as_symmetric(mh @ sys.k @ mh, tol=1e-8)
    norm_c, norm_k = dcl.spectral_norm(c_mod), dcl.spectral_norm(k_mod)
    commutator = dcl.spectral_norm(c_mod @ k_mod - k_mod @ c_mod)
    if commutator > tol_commute * norm_c * norm_k:
        logger.debug("not modally damped: commutator %.3e", commutator)
        return None
    # a generic combination separates eigenvalues repeated in one of the two
    weight = MODAL_WEIGHT * norm_k / norm_c
    vectors = dcl.sym_eigen(k_mod + weight * c_mod).vectors
    k_diag = vectors.T @ k_mod @ vectors
    c_diag = vectors.T @ c_mod @ vectors
    for mat, norm in ((k_diag, norm_k), (c_diag, norm_c)):
        if np.max(np.abs(mat - np.diag(np.diag(mat)))) > TOL_MODAL_OFFDIAG * norm:
            logger.debug("joint diagonalization failed")
            return None
    modes = [
        (float(np.sqrt(k2)), float(d)) for k2, d in zip(np.diag(k_diag), np.diag(c_diag))
    ]
    logger.debug("modally damped with %d modes", len(modes))
    return modes


def mode_gamma(k: float, d: float) -> float:
    """Return Re((-d + sqrt(d^2 - 4 k^2)) / 2), the type of a single mode."""
    disc = d**2 - 4 * k**2
    if disc <= 0:
        return -d / 2
    # -d/2 + sqrt(disc)/2 written without cancellation
    return -2 * k**2 / (d + np.sqrt(disc))


def modal_envelope(
    modes,
    t_grid=None,
    n_mu: int = grids.DEFAULT_N_MU,
    with_oracle: bool = False,
    *,
    mus=None,
    tol_bisect: float = TOL_BISECT,
) -> EnvelopeCurve:
    """Return the envelope of a modally damped system from its modes.

    At each shift the constant is max_i ||L_i(mu)|| * max_i ||L_i(mu)^{-1}||
    over the 2x2 mode transforms, which equals cond(L(mu)) of the full
    system. gamma is the largest single-mode type. With `with_oracle` the
    exact norm max_i ||e^{A_i t}|| comes from the closed form.

    Args:
        modes (list): Non-empty list of (k, d) pairs.
        t_grid (array_like: optional): Ascending non-negative times.
        n_mu (int: optional): Number of shifts. Default 16.
        with_oracle (bool: optional): Also compute the closed-form norm.
        mus (array_like: optional): Explicit shifts replacing the grid.
        tol_bisect (float: optional): Used for the grid edge margin.

    Returns:
        EnvelopeCurve: Envelope over the shifts.

    Raises:
        ValueError: If `modes` is empty.
    """
    modes = [(float(k), float(d)) for k, d in modes]
    if not modes:
        raise ValueError("modal envelope needs at least one mode")
    gamma = max(mode_gamma(k, d) for k, d in modes)
    if mus is None:
        mus = grids.mu_grid(gamma, n_mu, tol_bisect=tol_bisect)
    mus = np.asarray(mus, dtype=float)
    if t_grid is None:
        t_grid = grids.log_time_grid(50.0 / abs(gamma), 200)
    t_grid = grids.check_time_grid(t_grid)
    certificates = []
    for mu in mus:
        norms = [
            tuple(dcl.spectral_norm(part) for part in closed_form_transform(k, d, mu))
            for k, d in modes
        ]
        c_beta = max(n[0] for n in norms) * max(n[1] for n in norms)
        certificates.append(
            DecayCertificate(
                beta=float(mu),
                c_beta=c_beta,
                mu_source=float(mu),
                cond_mode="closed_form",
                notes=f"modal condition number over {len(modes)} modes",
            )
        )
    bound, best_mu = _minimum(certificates, t_grid)
    norms = None
    if with_oracle:
        forms = [oracle.ClosedForm2x2(k, d) for k, d in modes]
        norms = np.array(
            [max(oracle.closed_form_norm(cf, t) for cf in forms) for t in t_grid]
        )
    return EnvelopeCurve(
        t_grid=t_grid,
        bound=bound,
        best_mu=best_mu,
        oracle_norm=norms,
        gamma=gamma,
        certificates=tuple(certificates),
    )


def asymptotic_certificate(k: float, d: float) -> DecayCertificate:
    """Return the certificate beta = -d/2 of an underdamped single mode.

    K(-d/2) = k^2 - d^2/4 is positive definite, so the shift -d/2 = gamma is
    admissible by continuity and C_beta = cond(L(-d/2)). As k/d grows,
    L(-d/2) tends to the identity and the bound tends to e^{-d t/2}.

    Raises:
        ValueError: If the mode is not underdamped (4 k^2 <= d^2).
    """
    if 4 * k**2 <= d**2:
        raise ValueError(f"mode k={k}, d={d} is not underdamped")
    l, l_inv = closed_form_transform(k, d, -d / 2)
    return DecayCertificate(
        beta=-d / 2,
        c_beta=dcl.spectral_norm(l) * dcl.spectral_norm(l_inv),
        mu_source=-d / 2,
        cond_mode="asymptotic",
        notes=f"single mode k={k:g}, d={d:g} at mu=-d/2",
    )
