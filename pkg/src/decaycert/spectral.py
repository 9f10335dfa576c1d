"""Decay-Cert spectral-shift abscissa.

Computes gamma_0 = -inf x^T C x / (2 x^T M x), the spectral-shift abscissa
gamma = sup Re p_+(x) by bisection on the definiteness of K(mu), the roots
p_+(x), p_-(x) of the scalar quadratics x^T K(lambda) x = 0, and samples of
the numerical range of the pencil.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
import numpy as np
import scipy.optimize

import decaycert.linalg as dcl
from decaycert.exceptions import NoDecayBoundError, NonConvergenceError, ZeroVectorError
from decaycert.system import SecondOrderSystem, pencil_at, pencil_scale

logger = logging.getLogger(__name__)

TOL_BISECT = 1e-10
MAX_BISECT_ITER = 200
TOL_HALT = 1e-10
TOL_PSD_PENCIL = 1e-13
DEFAULT_SEED = 20240607
GAMMA_PATHS = ("halted_zero_damping_gap", "gamma_equals_gamma0", "bisected")


@dataclass(frozen=True, eq=False)
class RayleighRoots:
    """Roots of (x^T M x) lambda^2 + (x^T C x) lambda + x^T K x = 0.

    Attributes:
        x (np.ndarray): Unit vector the roots belong to.
        discriminant (float): D(x) = (x^T C x / (2 x^T M x))^2 - x^T K x / x^T M x.
        p_plus (complex): Root with the larger real part (positive imaginary
            part when complex).
        p_minus (complex): The other root.
    """

    x: np.ndarray
    discriminant: float
    p_plus: complex
    p_minus: complex

    @property
    def real(self) -> bool:
        """Whether both roots are real."""
        return self.discriminant >= 0


@dataclass(frozen=True)
class GammaResult:
    """Outcome of the gamma computation.

    Attributes:
        gamma0 (float): -lowest eigenvalue of the pencil (C, 2M).
        gamma (float): Spectral-shift abscissa.
        path (str): One of "halted_zero_damping_gap", "gamma_equals_gamma0"
            or "bisected".
        bisection_iterations (int): Number of bisection steps taken.
        pd_at_gamma_plus_eps (bool): Whether K(gamma + eps) is positive
            definite, eps being the bisection width.
        remark_ii (bool): Whether K(gamma) itself is positive definite on the
            gamma_equals_gamma0 path. The type of the semigroup is then
            strictly below gamma.
    """

    gamma0: float
    gamma: float
    path: str
    bisection_iterations: int = 0
    pd_at_gamma_plus_eps: bool = True
    remark_ii: bool = False


def _quadratic_roots(mm, cc, kk):
    """Vectorized roots of mm lambda^2 + cc lambda + kk with mm, cc, kk > 0."""
    half = cc / (2 * mm)
    disc = half**2 - kk / mm
    root = np.sqrt(np.abs(disc))
    # both roots are negative when real; form p_+ from p_- by Vieta
    p_minus_real = -half - root
    real = disc >= 0
    p_minus = np.where(real, p_minus_real + 0j, -half - 1j * root)
    with np.errstate(divide="ignore", invalid="ignore"):
        p_plus_real = (kk / mm) / p_minus_real
    p_plus = np.where(real, p_plus_real + 0j, -half + 1j * root)
    return disc, p_plus, p_minus


def rayleigh_roots(sys: SecondOrderSystem, x) -> RayleighRoots:
    """Return p_+(x) and p_-(x) for a nonzero vector x.

    Args:
        sys (SecondOrderSystem): System.
        x (array_like): Nonzero vector of length `sys.dim`; normalized here.

    Returns:
        RayleighRoots: Discriminant and both roots.

    Raises:
        ZeroVectorError: If `x` is the zero vector.

    Examples:
        >>> from decaycert.system import SecondOrderSystem
        >>> from decaycert.spectral import rayleigh_roots
        >>> rayleigh_roots(SecondOrderSystem([[1.0]], [[1.0]], [[1.0]]), [1.0]).p_plus
        (-0.5+0.8660254037844386j)
    """
    x = np.asarray(x, dtype=float).ravel()
    norm = np.linalg.norm(x)
    if norm == 0.0:
        raise ZeroVectorError("Rayleigh roots need a nonzero vector")
    x = x / norm
    mm, cc, kk = (float(x @ mat @ x) for mat in (sys.m, sys.c, sys.k))
    disc, p_plus, p_minus = _quadratic_roots(mm, cc, kk)
    return RayleighRoots(
        x=x, discriminant=float(disc), p_plus=complex(p_plus), p_minus=complex(p_minus)
    )


def re_p_plus(sys: SecondOrderSystem, x) -> float:
    """Return Re p_+(x), -inf for the zero vector."""
    x = np.asarray(x, dtype=float)
    mm = float(x @ sys.m @ x)
    if mm <= 0.0:
        return -np.inf
    _, p_plus, _ = _quadratic_roots(mm, float(x @ sys.c @ x), float(x @ sys.k @ x))
    return float(np.real(p_plus))


def gamma_zero(sys: SecondOrderSystem) -> float:
    """Return gamma_0 = -(lowest eigenvalue of the pencil C x = 2 lambda M x).

    Examples:
        >>> import numpy as np
        >>> from decaycert.system import SecondOrderSystem
        >>> from decaycert.spectral import gamma_zero
        >>> gamma_zero(SecondOrderSystem(np.eye(2), np.diag([2.0, 4.0]), np.eye(2)))
        -1.0
    """
    return -dcl.gen_sym_eigen_lowest(sys.c, 2.0 * sys.m)


def compute_gamma(
    sys: SecondOrderSystem,
    tol_bisect: float = TOL_BISECT,
    *,
    max_iter: int = MAX_BISECT_ITER,
) -> GammaResult:
    """Compute the spectral-shift abscissa gamma.

    gamma_0 is computed first. If it is numerically zero no certificate is
    available and NoDecayBoundError is raised. If K(gamma_0) is positive
    semidefinite then gamma = gamma_0. Otherwise gamma is found by bisection
    on "K(mu) is positive definite" over (gamma_0, 0], keeping the upper
    end definite, until the interval is narrower than
    tol_bisect * max(1, |gamma_0|).

    Args:
        sys (SecondOrderSystem): System.
        tol_bisect (float: optional): Relative bisection width. Default 1e-10.
        max_iter (int: optional): Bisection step limit. Default 200.

    Returns:
        GammaResult: gamma_0, gamma and how gamma was obtained.

    Raises:
        ValueError: If `tol_bisect` is not positive.
        NoDecayBoundError: If gamma_0 is numerically zero.
        NonConvergenceError: If bisection does not reach the width in
            `max_iter` steps.
    """
    if tol_bisect <= 0:
        raise ValueError(f"tol_bisect must be positive, got {tol_bisect}")
    gamma0 = gamma_zero(sys)
    logger.debug("gamma0 = %.17g", gamma0)
    tol_halt = TOL_HALT * sys.norms["C"] / sys.norms["M"]
    if gamma0 >= -tol_halt:
        result = GammaResult(gamma0, 0.0, "halted_zero_damping_gap", 0, False, False)
        raise NoDecayBoundError(
            f"gamma0 = {gamma0:.3e} is numerically zero; no decay certificate", result
        )
    width = tol_bisect * max(1.0, abs(gamma0))

    pencil0 = pencil_at(sys, gamma0)
    lowest = dcl.sym_eigen(pencil0.value).values[0]
    if pencil0.pd or lowest >= -TOL_PSD_PENCIL * pencil_scale(sys, gamma0):
        logger.debug("K(gamma0) semidefinite (min eig %.3e): gamma = gamma0", lowest)
        return GammaResult(
            gamma0=gamma0,
            gamma=gamma0,
            path="gamma_equals_gamma0",
            bisection_iterations=0,
            pd_at_gamma_plus_eps=pencil_at(sys, gamma0 + width).pd,
            remark_ii=pencil0.pd,
        )

    lo, hi = gamma0, 0.0
    iterations = 0
    while hi - lo > width:
        if iterations >= max_iter:
            raise NonConvergenceError(
                f"bisection stopped after {max_iter} steps at width {hi - lo:.3e}"
            )
        mid = (lo + hi) / 2
        if pencil_at(sys, mid).pd:
            hi = mid
        else:
            lo = mid
        iterations += 1
    logger.debug("bisected gamma = %.17g in %d steps", hi, iterations)
    return GammaResult(
        gamma0=gamma0,
        gamma=hi,
        path="bisected",
        bisection_iterations=iterations,
        pd_at_gamma_plus_eps=pencil_at(sys, hi + width).pd,
        remark_ii=False,
    )


def sample_numerical_range(
    sys: SecondOrderSystem, n_samples: int, rng_seed: int = DEFAULT_SEED
) -> np.ndarray:
    """Sample points p_+(x), p_-(x) of the numerical range of the pencil.

    Unit vectors are Gaussian draws normalized to length one.

    Args:
        sys (SecondOrderSystem): System.
        n_samples (int): Number of random vectors (>= 1).
        rng_seed (int: optional): Seed; the output is a function of it.

    Returns:
        np.ndarray: Complex array [p_+(x_1), p_-(x_1), p_+(x_2), ...].

    Raises:
        ValueError: If `n_samples` < 1.
    """
    if n_samples < 1:
        raise ValueError(f"n_samples must be >= 1, got {n_samples}")
    rng = np.random.default_rng(rng_seed)
    xs = rng.standard_normal((n_samples, sys.dim))
    xs /= np.linalg.norm(xs, axis=1, keepdims=True)
    forms = [np.einsum("ij,jk,ik->i", xs, mat, xs) for mat in (sys.m, sys.c, sys.k)]
    _, p_plus, p_minus = _quadratic_roots(*forms)
    return np.column_stack([p_plus, p_minus]).ravel()


def maximize_re_pplus(
    sys: SecondOrderSystem, restarts: int = 8, rng_seed: int = DEFAULT_SEED
) -> float:
    """Estimate gamma = sup Re p_+(x) from below by local search.

    Runs Nelder-Mead on x -> -Re p_+(x) from `restarts` random starts,
    polishes the best point with a second run and returns the best value.
    Re p_+ is scale invariant, so no sphere constraint is needed.

    Args:
        sys (SecondOrderSystem): System.
        restarts (int: optional): Number of random starts (>= 1). Default 8.
        rng_seed (int: optional): Seed for the starting points.

    Returns:
        float: Largest Re p_+(x) found.

    Raises:
        ValueError: If `restarts` < 1.
    """
    if restarts < 1:
        raise ValueError(f"restarts must be >= 1, got {restarts}")
    if sys.dim == 1:
        return re_p_plus(sys, [1.0])
    rng = np.random.default_rng(rng_seed)
    starts = list(rng.standard_normal((restarts, sys.dim)))
    starts.extend(np.eye(sys.dim))
    options = {
        "xatol": 1e-8,
        "fatol": 1e-14,
        "maxiter": 2000 * sys.dim,
        "maxfev": 4000 * sys.dim,
        "adaptive": True,
    }

    def objective(x):
        return -re_p_plus(sys, x)

    runs = [scipy.optimize.minimize(objective, x0, method="Nelder-Mead", options=options)
            for x0 in starts]
    best = min(runs, key=lambda res: res.fun)
    polished = scipy.optimize.minimize(objective, best.x, method="Nelder-Mead", options=options)
    value = -min(best.fun, polished.fun)
    logger.debug("maximize_re_pplus: %.12g over %d starts", value, len(starts))
    return float(value)
