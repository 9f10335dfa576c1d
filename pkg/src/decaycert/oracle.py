"""Decay-Cert ground truth.

True norm curves t -> ||e^{At}|| from the matrix exponential, the closed
form of e^{At} for a single mode, certificate verification against the
norm curve and the resolvent cross-check.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
import numpy as np
import pandas as pd
import scipy.linalg

import decaycert.linalg as dcl
from decaycert import curves, grids
from decaycert.spectral import TOL_BISECT, compute_gamma
from decaycert.system import SecondOrderSystem, phase_operator, resolvent_block
from decaycert.transform import DecayCertificate, certificate_at

logger = logging.getLogger(__name__)

TOL_CRIT = 1e-9
TOL_VIOLATION = 1e-9
REGIMES = ("underdamped", "critical", "overdamped")


@dataclass(frozen=True)
class ClosedForm2x2:
    """Single mode x'' + d x' + k^2 x = 0 with phase matrix [[0, k], [-k, -d]].

    Attributes:
        k (float): Natural frequency (> 0).
        d (float): Damping (> 0).
        delta (float): sqrt(|4 k^2 - d^2|) / 2, zero in the critical band.
        regime (str): "underdamped", "critical" or "overdamped".
    """

    k: float
    d: float
    delta: float = field(init=False)
    regime: str = field(init=False)

    def __post_init__(self):
        """Classify the regime.

        Raises:
            ValueError: If `k` or `d` is not positive.
        """
        if self.k <= 0 or self.d <= 0:
            raise ValueError(f"k and d must be positive, got k={self.k}, d={self.d}")
        gap = 4 * self.k**2 - self.d**2
        if abs(gap) <= TOL_CRIT * (4 * self.k**2 + self.d**2):
            regime, delta = "critical", 0.0
        else:
            regime = "underdamped" if gap > 0 else "overdamped"
            delta = float(np.sqrt(abs(gap)) / 2)
        object.__setattr__(self, "regime", regime)
        object.__setattr__(self, "delta", delta)

    @property
    def a(self) -> np.ndarray:
        """The 2x2 phase matrix."""
        return np.array([[0.0, self.k], [-self.k, -self.d]])


@dataclass(frozen=True, eq=False)
class NormCurve:
    """Values of ||e^{At}|| on a time grid.

    Attributes:
        t_grid (np.ndarray): Ascending non-negative times.
        norms (np.ndarray): Spectral norms of e^{At}.
    """

    t_grid: np.ndarray
    norms: np.ndarray

    def to_frame(self) -> pd.DataFrame:
        """Return the curve as a DataFrame with columns t, norm."""
        return curves.norm_frame(self)


@dataclass(frozen=True, eq=False)
class VerificationReport:
    """Result of checking a certificate against the norm curve.

    Attributes:
        certificate (DecayCertificate): Certificate under test.
        t_grid (np.ndarray): Times checked.
        norms (np.ndarray): ||e^{At}|| on `t_grid`.
        slack_curve (np.ndarray): c_beta e^{beta t} - ||e^{At}||.
        max_violation (float): max of -slack_curve; <= 1e-9 for a valid bound.
    """

    certificate: DecayCertificate
    t_grid: np.ndarray
    norms: np.ndarray
    slack_curve: np.ndarray
    max_violation: float

    @property
    def passed(self) -> bool:
        """Whether the violation is within 1e-9."""
        return self.max_violation <= TOL_VIOLATION


def closed_form_exp(cf: ClosedForm2x2, t: float) -> np.ndarray:
    """Return e^{At} of a single mode in closed form.

    With S = A + (d/2) I:
    underdamped e^{-dt/2} (cos(delta t) I + sin(delta t)/delta S),
    overdamped e^{-dt/2} (cosh(delta t) I + sinh(delta t)/delta S),
    critical e^{-dt/2} (I + t S).

    Examples:
        >>> from decaycert.oracle import ClosedForm2x2, closed_form_exp
        >>> closed_form_exp(ClosedForm2x2(1.0, 2.0), 0.0)
        array([[1., 0.],
               [0., 1.]])
    """
    t = float(t)
    eye = np.eye(2)
    shifted = cf.a + (cf.d / 2) * eye
    decay = np.exp(-cf.d * t / 2)
    if cf.regime == "critical":
        return decay * (eye + t * shifted)
    if cf.regime == "underdamped":
        arg = cf.delta * t
        return decay * (np.cos(arg) * eye + (np.sin(arg) / cf.delta) * shifted)
    # e^{-dt/2} cosh and sinh from the two real exponentials
    grow = np.exp((cf.delta - cf.d / 2) * t)
    fall = np.exp((-cf.delta - cf.d / 2) * t)
    return (grow + fall) / 2 * eye + ((grow - fall) / (2 * cf.delta)) * shifted


def closed_form_norm(cf: ClosedForm2x2, t: float) -> float:
    """Return ||e^{At}|| of a single mode from the closed form."""
    return dcl.spectral_norm(closed_form_exp(cf, t))


def norm_curve(sys: SecondOrderSystem, t_grid) -> NormCurve:
    """Return ||e^{At}|| on `t_grid` from the matrix exponential.

    Raises:
        ValueError: If `t_grid` is not ascending and non-negative.
        ExpmOverflowError: If an exponential is not finite.
    """
    t_grid = grids.check_time_grid(t_grid)
    a = phase_operator(sys).a
    norms = np.array([dcl.spectral_norm(dcl.expm(a, t)) for t in t_grid])
    return NormCurve(t_grid=t_grid, norms=norms)


def verify_certificate(
    sys: SecondOrderSystem, cert: DecayCertificate, t_grid, *, norms=None
) -> VerificationReport:
    """Check ||e^{At}|| <= c_beta e^{beta t} on a time grid.

    Args:
        sys (SecondOrderSystem): System.
        cert (DecayCertificate): Certificate to check.
        t_grid (array_like): Non-negative ascending times.
        norms (array_like: optional): Precomputed ||e^{At}|| on `t_grid`.

    Returns:
        VerificationReport: Slack curve and largest violation.
    """
    t_grid = grids.check_time_grid(t_grid)
    norms = norm_curve(sys, t_grid).norms if norms is None else np.asarray(norms)
    slack = cert.bound(t_grid) - norms
    report = VerificationReport(
        certificate=cert,
        t_grid=t_grid,
        norms=norms,
        slack_curve=slack,
        max_violation=float(np.max(-slack)),
    )
    logger.debug("verify beta=%.6g: max violation %.3e", cert.beta, report.max_violation)
    return report


def resolvent_check(sys: SecondOrderSystem, lambdas) -> float:
    """Compare the block resolvent formula with a direct inverse.

    Args:
        sys (SecondOrderSystem): System.
        lambdas (array_like): Real nonzero shifts with K(lambda) positive definite.

    Returns:
        float: max over lambda of ||R_block - R_direct|| / ||R_direct||.

    Raises:
        ZeroShiftError: If a shift is zero.
        PencilNotPDError: If K(lambda) is not positive definite.
    """
    a = phase_operator(sys).a
    eye = np.eye(len(a))
    worst = 0.0
    for lam in np.atleast_1d(np.asarray(lambdas, dtype=float)):
        block = resolvent_block(sys, lam)
        direct = scipy.linalg.inv(a - lam * eye)
        residual = dcl.spectral_norm(block - direct) / dcl.spectral_norm(direct)
        worst = max(worst, residual)
    return worst


def tail_decay_rate(curve: NormCurve) -> float:
    """Return the fitted exponential rate of the norm curve's last decade."""
    return curves.tail_slope(curve.t_grid, curve.norms)


def demo_2x2_frame(
    k: float, d: float, n_mu: int = 4, t_grid=None, *, cond_mode: str = "exact"
) -> pd.DataFrame:
    """Return bound and norm curves of a single mode as a DataFrame.

    The system is M=[1], C=[d], K=[k^2]. Columns are t, bound (minimum over
    the certificates), norm (||e^{At}||) and one column mu=<value> per
    certificate curve.

    Args:
        k (float): Natural frequency (> 0).
        d (float): Damping (> 0).
        n_mu (int: optional): Number of equidistant shifts. Default 4.
        t_grid (array_like: optional): Times; defaults to 200 points on [0, 10].
        cond_mode (str: optional): "exact" or "lemma".

    Returns:
        pd.DataFrame: Demo curves.

    Raises:
        ValueError: If `k` or `d` is not positive.
    """
    if k <= 0 or d <= 0:
        raise ValueError(f"k and d must be positive, got k={k}, d={d}")
    sys = SecondOrderSystem([[1.0]], [[float(d)]], [[float(k) ** 2]])
    t_grid = grids.time_grid(10.0, 200) if t_grid is None else grids.check_time_grid(t_grid)
    gamma = compute_gamma(sys, TOL_BISECT).gamma
    mus = grids.mu_grid(gamma, n_mu)
    frame = pd.DataFrame({"t": t_grid})
    columns = {}
    for mu in mus:
        cert = certificate_at(sys, mu, cond_mode)
        columns[f"mu={mu:.17g}"] = cert.bound(t_grid)
    per_mu = pd.DataFrame(columns)
    frame["bound"] = per_mu.min(axis=1)
    cf = ClosedForm2x2(float(k), float(d))
    frame["norm"] = [closed_form_norm(cf, t) for t in t_grid]
    return pd.concat([frame, per_mu], axis=1)
