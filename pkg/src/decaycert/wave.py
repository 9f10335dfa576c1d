"""Decay-Cert damped wave demo.

Discretizes w_tt + c(x) w_t - w_xx = 0 on (0, length) with Dirichlet
conditions by second differences: K = (1/h^2) tridiag(-1, 2, -1),
C = diag(c(x_i)), M = I. The certificate constant at a shift mu is then
bounded through three auxiliary eigenvalues lambda_1, lambda_2, lambda_3.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from warnings import warn
import numpy as np
import scipy.sparse

import decaycert.linalg as dcl
from decaycert.exceptions import InvalidShiftError, NonPositiveDampingError, ZeroShiftError
from decaycert.system import SecondOrderSystem

logger = logging.getLogger(__name__)

DEFAULT_N = 199
DEFAULT_LENGTH = np.pi


@dataclass(frozen=True, eq=False)
class WaveDiscretization:
    """Finite-difference damped wave equation on an interval.

    Attributes:
        n_interior (int): Number of interior nodes.
        length (float): Interval length.
        h (float): Mesh width length / (n_interior + 1).
        laplacian (np.ndarray): Positive definite second-difference matrix.
        damping_diag (np.ndarray): Damping samples c(x_i) > 0.
        mass (np.ndarray): Identity mass matrix.
    """

    n_interior: int
    length: float
    h: float
    laplacian: np.ndarray
    damping_diag: np.ndarray
    mass: np.ndarray

    @property
    def nodes(self) -> np.ndarray:
        """Interior node positions x_i = i h."""
        return self.h * np.arange(1, self.n_interior + 1)

    @cached_property
    def laplacian_min(self) -> float:
        """Lowest eigenvalue of the second-difference matrix."""
        return float(dcl.sym_eigen(self.laplacian).values[0])

    @cached_property
    def system(self) -> SecondOrderSystem:
        """The discretization as M x'' + C x' + K x = 0."""
        return SecondOrderSystem(self.mass, np.diag(self.damping_diag), self.laplacian)


@dataclass(frozen=True)
class WaveBoundComponents:
    """Eigenvalue route to the certificate constant at one shift.

    Attributes:
        lambda1 (float): Lowest lambda of (mu^2 + mu c) u = lambda K u.
        lambda2 (float): Lowest eigenvalue of diag(mu c) + K.
        lambda3 (float): Lowest lambda of K u = lambda (-mu) u.
        mu (float): Shift.
        c_mu_bound (float): max{1/sqrt(1+lambda1), 1 + 1/sqrt(mu^2+lambda2)}
            * (1 + 1/sqrt(lambda3)).
        c_mu_rigorous (float): (max{||A||, 1} + ||B||) * (max{||A'||, 1} + ||B'||)
            from the exact block norms.
        norm_a (float): ||K^{1/2} K(mu)^{-1/2}|| = 1/sqrt(1 + lambda1).
        norm_b (float): ||mu K(mu)^{-1/2}|| = |mu|/sqrt(mu^2 + lambda2).
        norm_a_inv (float): ||K(mu)^{1/2} K^{-1/2}||.
        norm_b_inv (float): ||mu K^{-1/2}|| = sqrt(-mu/lambda3).
    """

    lambda1: float
    lambda2: float
    lambda3: float
    mu: float
    c_mu_bound: float
    c_mu_rigorous: float
    norm_a: float
    norm_b: float
    norm_a_inv: float
    norm_b_inv: float


def second_difference(n: int, length: float) -> np.ndarray:
    """Return (1/h^2) tridiag(-1, 2, -1) of size n with h = length / (n + 1)."""
    h = length / (n + 1)
    stencil = scipy.sparse.diags([-1.0, 2.0, -1.0], [-1, 0, 1], shape=(n, n))
    return stencil.toarray() / h**2


def damping_samples(damping, nodes: np.ndarray, length: float) -> np.ndarray:
    """Sample a damping specification at the interior nodes.

    Args:
        damping (str, callable or array_like): "const:<v>",
            "piecewise:<v1>,<v2>" (v1 on the left half, v2 from the midpoint
            on), "file:<path>" (one sample per node), a function of x or an
            array of samples.
        nodes (np.ndarray): Interior node positions.
        length (float): Interval length.

    Returns:
        np.ndarray: Damping samples.

    Raises:
        ValueError: If the specification is malformed or has the wrong length.
        NonPositiveDampingError: If a sample is not strictly positive.
    """
    if isinstance(damping, str):
        kind, _, args = damping.partition(":")
        try:
            if kind == "const":
                samples = np.full(len(nodes), float(args))
            elif kind == "piecewise":
                left, right = (float(v) for v in args.split(","))
                samples = np.where(nodes < length / 2, left, right)
            elif kind == "file":
                samples = np.loadtxt(args, dtype=float, ndmin=1)
            else:
                raise ValueError(f"unknown damping kind {kind!r}")
        except ValueError as ex:
            raise ValueError(f"cannot parse damping {damping!r}: {ex}") from ex
    elif callable(damping):
        samples = np.asarray(damping(nodes), dtype=float) * np.ones(len(nodes))
    else:
        samples = np.asarray(damping, dtype=float)
    samples = np.asarray(samples, dtype=float).ravel()
    if samples.shape != nodes.shape:
        raise ValueError(f"need {len(nodes)} damping samples, got {samples.size}")
    if not np.all(np.isfinite(samples)) or np.any(samples <= 0):
        raise NonPositiveDampingError(
            f"damping must be finite and positive, min is {np.min(samples)}"
        )
    return samples


def discretize(
    n: int = DEFAULT_N, length: float = DEFAULT_LENGTH, damping="const:1"
) -> WaveDiscretization:
    """Discretize the damped wave equation on (0, length).

    Args:
        n (int: optional): Interior nodes (>= 2). Default 199.
        length (float: optional): Interval length. Default pi, where the
            lowest continuum eigenvalue is 1.
        damping (str, callable or array_like: optional): See `damping_samples`.

    Returns:
        WaveDiscretization: Discretized operators.

    Raises:
        ValueError: If `n` < 2 or `length` <= 0.
        NonPositiveDampingError: If a damping sample is not positive.

    Examples:
        >>> from decaycert.wave import discretize
        >>> disc = discretize(3, 4.0, "const:1")
        >>> disc.laplacian
        array([[ 2., -1.,  0.],
               [-1.,  2., -1.],
               [ 0., -1.,  2.]])
    """
    if n < 2:
        raise ValueError(f"need at least 2 interior nodes, got {n}")
    if length <= 0:
        raise ValueError(f"length must be positive, got {length}")
    h = length / (n + 1)
    nodes = h * np.arange(1, n + 1)
    samples = damping_samples(damping, nodes, length)
    disc = WaveDiscretization(
        n_interior=int(n),
        length=float(length),
        h=h,
        laplacian=second_difference(n, length),
        damping_diag=samples,
        mass=np.eye(n),
    )
    logger.debug("wave discretization n=%d, h=%.6g", n, h)
    return disc


def lambda1(disc: WaveDiscretization, mu: float) -> float:
    """Lowest lambda of diag(mu^2 + mu c) u = lambda K u."""
    weight = np.diag(mu**2 + mu * disc.damping_diag)
    return dcl.gen_sym_eigen_lowest(weight, disc.laplacian)


def lambda2(disc: WaveDiscretization, mu: float) -> float:
    """Lowest eigenvalue of diag(mu c) + K."""
    return float(dcl.sym_eigen(np.diag(mu * disc.damping_diag) + disc.laplacian).values[0])


def lambda3(disc: WaveDiscretization, mu: float) -> float:
    """Lowest lambda of K u = lambda (-mu) u, i.e. lambda_min(K) / (-mu).

    Raises:
        ZeroShiftError: If `mu` is zero.
    """
    if mu == 0:
        raise ZeroShiftError("lambda3 needs mu != 0")
    return disc.laplacian_min / (-mu)


def wave_bound(disc: WaveDiscretization, mu: float) -> WaveBoundComponents:
    """Bound the certificate constant at `mu` from three eigenvalues.

    Args:
        disc (WaveDiscretization): Discretization.
        mu (float): Negative shift above gamma.

    Returns:
        WaveBoundComponents: Eigenvalues, displayed bound and block norms.

    Raises:
        InvalidShiftError: If `mu` >= 0 or a denominator is not positive.

    Warns:
        UserWarning: If |mu| > 1, where the displayed bound may fall below
            the condition number.
    """
    mu = float(mu)
    if mu >= 0:
        raise InvalidShiftError(f"wave bound needs mu < 0, got mu={mu!r}")
    lam1 = lambda1(disc, mu)
    lam2 = lambda2(disc, mu)
    lam3 = lambda3(disc, mu)
    if 1 + lam1 <= 0 or mu**2 + lam2 <= 0 or lam3 <= 0:
        raise InvalidShiftError(
            f"non-positive denominator at mu={mu!r}: 1+lambda1={1 + lam1:.3e}, "
            f"mu^2+lambda2={mu**2 + lam2:.3e}, lambda3={lam3:.3e}"
        )
    if abs(mu) > 1:
        warn(f"|mu| = {abs(mu)} > 1: c_mu_bound may not dominate", stacklevel=2)
    weight = np.diag(mu**2 + mu * disc.damping_diag)
    norm_a = 1 / np.sqrt(1 + lam1)
    norm_b = abs(mu) / np.sqrt(mu**2 + lam2)
    norm_a_inv = np.sqrt(1 + dcl.gen_sym_eigen_highest(weight, disc.laplacian))
    norm_b_inv = np.sqrt(-mu / lam3)
    components = WaveBoundComponents(
        lambda1=lam1,
        lambda2=lam2,
        lambda3=lam3,
        mu=mu,
        c_mu_bound=max(1 / np.sqrt(1 + lam1), 1 + 1 / np.sqrt(mu**2 + lam2))
        * (1 + 1 / np.sqrt(lam3)),
        c_mu_rigorous=(max(norm_a, 1.0) + norm_b) * (max(norm_a_inv, 1.0) + norm_b_inv),
        norm_a=float(norm_a),
        norm_b=float(norm_b),
        norm_a_inv=float(norm_a_inv),
        norm_b_inv=float(norm_b_inv),
    )
    logger.debug("wave bound at mu=%.6g: %s", mu, components)
    return components
