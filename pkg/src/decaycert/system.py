"""Decay-Cert second-order systems M x'' + C x' + K x = 0.

Holds the validated triple (M, C, K), evaluates the quadratic pencil
K(lambda) = lambda^2 M + lambda C + K and the shifted damping 2 mu M + C,
and assembles the phase-space operators acting on y = [K^{1/2} x; M^{1/2} x'].
"""

from __future__ import annotations

import json
import logging
import os
from collections.abc import Mapping
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Union
import numpy as np
import scipy.io
import scipy.linalg
import scipy.sparse

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

import decaycert.linalg as dcl
from decaycert.exceptions import (
    DimensionMismatchError,
    ManifestError,
    NotPDError,
    PencilNotPDError,
    ZeroShiftError,
)

logger = logging.getLogger(__name__)

MATRIX_NAMES = ("M", "C", "K")
SYSTEM_KINDS = ("generic", "modal", "partially_overdamped")


@dataclass(frozen=True, eq=False)
class SecondOrderSystem:
    """Damped second-order system with symmetric positive definite coefficients.

    Inputs are validated and symmetrized on construction; the stored arrays
    are read-only.

    Attributes:
        m (np.ndarray): Mass matrix.
        c (np.ndarray): Damping matrix.
        k (np.ndarray): Stiffness matrix.
        dim (int): Number of degrees of freedom.
    """

    m: np.ndarray
    c: np.ndarray
    k: np.ndarray
    dim: int = field(init=False)

    def __post_init__(self):
        """Validate shapes, symmetry and definiteness.

        Raises:
            NotSymmetricError: If a matrix is not symmetric.
            DimensionMismatchError: If the matrices differ in shape.
            NotPDError: If a matrix is not positive definite (names it).
        """
        mats = {}
        for name, value in zip(MATRIX_NAMES, (self.m, self.c, self.k)):
            mats[name] = dcl.as_symmetric(value, name=name)
        shapes = {name: arr.shape for name, arr in mats.items()}
        if len(set(shapes.values())) != 1:
            raise DimensionMismatchError(f"matrix shapes differ: {shapes}")
        for name, arr in mats.items():
            if not dcl.is_positive_definite(arr):
                raise NotPDError(f"{name} is not positive definite", name)
            arr.setflags(write=False)
        object.__setattr__(self, "m", mats["M"])
        object.__setattr__(self, "c", mats["C"])
        object.__setattr__(self, "k", mats["K"])
        object.__setattr__(self, "dim", mats["M"].shape[0])

    def __repr__(self):
        """Short printable description."""
        return f"SecondOrderSystem(dim={self.dim})"

    @cached_property
    def m_sqrt(self) -> np.ndarray:
        """M^{1/2}."""
        return dcl.sym_sqrt(self.m)

    @cached_property
    def m_inv_sqrt(self) -> np.ndarray:
        """M^{-1/2}, from a solve against M^{1/2}."""
        return dcl.inv_sym_sqrt(self.m)

    @cached_property
    def k_sqrt(self) -> np.ndarray:
        """K^{1/2}."""
        return dcl.sym_sqrt(self.k)

    @cached_property
    def k_inv_sqrt(self) -> np.ndarray:
        """K^{-1/2}."""
        return dcl.inv_sym_sqrt(self.k)

    @cached_property
    def norms(self) -> dict:
        """Spectral norms of M, C and K (their largest eigenvalues)."""
        return {
            name: float(dcl.sym_eigen(arr).values[-1])
            for name, arr in zip(MATRIX_NAMES, (self.m, self.c, self.k))
        }


@dataclass(frozen=True, eq=False)
class QuadraticPencilValue:
    """Value of K(lambda) = lambda^2 M + lambda C + K at a real shift.

    Attributes:
        shift (float): The lambda at which the pencil was evaluated.
        value (np.ndarray): The symmetric matrix K(lambda).
        pd (bool): Whether K(lambda) is numerically positive definite.
    """

    shift: float
    value: np.ndarray
    pd: bool

    def form(self, x) -> float:
        """Return x^T K(lambda) x."""
        x = np.asarray(x, dtype=float)
        return float(x @ self.value @ x)


@dataclass(frozen=True, eq=False)
class PhaseOperator:
    """Phase-space generator.

    Attributes:
        a (np.ndarray): Matrix of size 2 * dim.
        kind (str): "original" or "shifted".
        mu (float): Shift used for the shifted kind, 0.0 for the original.
    """

    a: np.ndarray
    kind: str = "original"
    mu: float = 0.0

    def symmetric_part(self) -> np.ndarray:
        """Return (a + a^T) / 2."""
        return (self.a + self.a.T) / 2


def pencil_scale(sys: SecondOrderSystem, shift: float) -> float:
    """Return mu^2 ||M|| + |mu| ||C|| + ||K||, the reference size of K(mu)."""
    norms = sys.norms
    return shift**2 * norms["M"] + abs(shift) * norms["C"] + norms["K"]


def pencil_at(
    sys: SecondOrderSystem, shift: float, *, tol: float = dcl.TOL_PD
) -> QuadraticPencilValue:
    """Evaluate the quadratic pencil K(shift) and its definiteness.

    Pivots of the Cholesky factor are compared against `tol` times
    `pencil_scale(sys, shift)`, so a pencil that nearly vanishes is reported
    as not definite.

    Args:
        sys (SecondOrderSystem): System.
        shift (float): Real shift lambda.
        tol (float: optional): Relative pivot threshold. Default 1e-12.

    Returns:
        QuadraticPencilValue: Pencil value and definiteness flag.
    """
    shift = float(shift)
    value = shift**2 * sys.m + shift * sys.c + sys.k
    value = (value + value.T) / 2
    pd = dcl.is_positive_definite(value, tol=tol, scale=pencil_scale(sys, shift))
    value.setflags(write=False)
    return QuadraticPencilValue(shift=shift, value=value, pd=pd)


def shifted_damping(sys: SecondOrderSystem, mu: float) -> np.ndarray:
    """Return C(mu) = 2 mu M + C."""
    return 2.0 * float(mu) * sys.m + sys.c


def phase_operator(sys: SecondOrderSystem) -> PhaseOperator:
    """Assemble the dissipative phase-space operator of the system.

    Returns:
        PhaseOperator: [[0, K^{1/2} M^{-1/2}], [-M^{-1/2} K^{1/2}, -M^{-1/2} C M^{-1/2}]].

    Examples:
        >>> from decaycert.system import SecondOrderSystem, phase_operator
        >>> phase_operator(SecondOrderSystem([[1.0]], [[1.0]], [[4.0]])).a
        array([[ 0.,  2.],
               [-2., -1.]])
    """
    return PhaseOperator(a=_assemble(sys, sys.k_sqrt, sys.c), kind="original")


def shifted_phase_operator(sys: SecondOrderSystem, mu: float) -> PhaseOperator:
    """Assemble the phase-space operator of the shifted system.

    After the substitution x = e^{mu t} z the system reads
    M z'' + C(mu) z' + K(mu) z = 0, so the operator uses K(mu)^{1/2} in the
    off-diagonal blocks and C(mu) in the damping block.

    Args:
        sys (SecondOrderSystem): System.
        mu (float): Shift with K(mu) positive definite.

    Returns:
        PhaseOperator: Shifted operator.

    Raises:
        PencilNotPDError: If K(mu) is not positive definite.
    """
    pencil = pencil_at(sys, mu)
    if not pencil.pd:
        raise PencilNotPDError(float(mu))
    kmu_sqrt = dcl.sym_sqrt(pencil.value)
    a = _assemble(sys, kmu_sqrt, shifted_damping(sys, mu))
    return PhaseOperator(a=a, kind="shifted", mu=float(mu))


def _assemble(sys: SecondOrderSystem, stiff_sqrt, damping) -> np.ndarray:
    """Build the 2x2 block phase matrix."""
    mh = sys.m_inv_sqrt
    top_right = stiff_sqrt @ mh
    return np.block(
        [
            [np.zeros((sys.dim, sys.dim)), top_right],
            [-top_right.T, -(mh @ damping @ mh)],
        ]
    )


def resolvent_block(sys: SecondOrderSystem, lam: float) -> np.ndarray:
    """Return (A - lam I)^{-1} from the block formula built on K(lam)^{-1}.

    Args:
        sys (SecondOrderSystem): System.
        lam (float): Nonzero real shift with K(lam) positive definite.

    Returns:
        np.ndarray: Resolvent matrix of size 2 * dim.

    Raises:
        ZeroShiftError: If `lam` is zero.
        PencilNotPDError: If K(lam) is not positive definite.
    """
    lam = float(lam)
    if lam == 0.0:
        raise ZeroShiftError("the block resolvent formula needs lambda != 0")
    pencil = pencil_at(sys, lam)
    if not pencil.pd:
        raise PencilNotPDError(lam)
    factor = scipy.linalg.cho_factor(pencil.value)
    kh, mh = sys.k_sqrt, sys.m_sqrt
    kinv_kh = scipy.linalg.cho_solve(factor, kh)
    kinv_mh = scipy.linalg.cho_solve(factor, mh)
    eye = np.eye(sys.dim)
    return np.block(
        [
            [-eye / lam + (kh @ kinv_kh) / lam, -(kh @ kinv_mh)],
            [mh @ kinv_kh, -lam * (mh @ kinv_mh)],
        ]
    )


def phase_state(sys: SecondOrderSystem, x, xdot) -> np.ndarray:
    """Return the energy coordinates y = [K^{1/2} x; M^{1/2} x']."""
    x = np.asarray(x, dtype=float)
    xdot = np.asarray(xdot, dtype=float)
    if x.shape != (sys.dim,) or xdot.shape != (sys.dim,):
        raise DimensionMismatchError(f"state vectors must have shape ({sys.dim},)")
    return np.concatenate([sys.k_sqrt @ x, sys.m_sqrt @ xdot])


def total_energy(sys: SecondOrderSystem, x, xdot) -> float:
    """Return the total energy (x^T K x + x'^T M x') / 2 = ||y||^2 / 2."""
    y = phase_state(sys, x, xdot)
    return float(y @ y) / 2


def load_system(source: Union[str, os.PathLike, Mapping]) -> SecondOrderSystem:
    """Load and validate a system from a manifest file or a mapping.

    The manifest is a TOML document with the top-level keys `dim`
    (optional), `M`, `C` and `K`::

        # comment
        dim = 2
        M = [[1, 0], [0, 1]]   # inline rows
        C = [2, 4]             # a flat list is a diagonal
        K = "stiffness.mtx"    # MatrixMarket file, relative to the manifest

    Args:
        source (str, os.PathLike or Mapping): Manifest path, or mapping with
            keys "M", "C", "K" (and optionally "dim") whose values are
            matrices, inline lists or MatrixMarket paths.

    Returns:
        SecondOrderSystem: Validated system.

    Raises:
        ManifestError: If the manifest is malformed or incomplete.
        DimensionMismatchError: If shapes disagree with each other or `dim`.
        NotSymmetricError: If a matrix is not symmetric.
        NotPDError: If a matrix is not positive definite (names it).
    """
    if isinstance(source, Mapping):
        entries, base = dict(source), os.getcwd()
    elif isinstance(source, (str, os.PathLike)):
        entries = _parse_manifest(source)
        base = os.path.dirname(os.path.abspath(source))
    else:
        raise TypeError(f"{source!r}, is not a manifest path or mapping")
    missing = [name for name in MATRIX_NAMES if name not in entries]
    if missing:
        raise ManifestError(f"manifest is missing {', '.join(missing)}")
    mats = [_resolve_matrix(entries[name], name, base) for name in MATRIX_NAMES]
    dim = entries.get("dim")
    if dim is not None:
        for name, arr in zip(MATRIX_NAMES, mats):
            if arr.shape != (int(dim), int(dim)):
                raise DimensionMismatchError(
                    f"{name} has shape {arr.shape}, manifest declares dim = {dim}"
                )
    system = SecondOrderSystem(*mats)
    logger.debug("loaded %r", system)
    return system


def _parse_manifest(path) -> dict:
    """Read a TOML manifest and check its keys."""
    with open(path, "rb") as fh:
        try:
            entries = tomllib.load(fh)
        except tomllib.TOMLDecodeError as ex:
            raise ManifestError(f"{path}: {ex}") from ex
    unknown = sorted(set(entries) - {"dim", *MATRIX_NAMES})
    if unknown:
        raise ManifestError(f"{path}: unknown keys {unknown}")
    dim = entries.get("dim")
    if dim is not None and (isinstance(dim, bool) or not isinstance(dim, int)):
        raise ManifestError(f"{path}: dim must be an integer, got {dim!r}")
    for name in MATRIX_NAMES:
        if name in entries and not isinstance(entries[name], (str, list)):
            raise ManifestError(f"{path}: {name} must be a list or a file name")
    return entries


def _resolve_matrix(value, name: str, base: str) -> np.ndarray:
    """Turn a manifest value (array, inline list text or path) into an array."""
    if isinstance(value, str):
        text = value.strip()
        if text.startswith("["):
            try:
                value = json.loads(text)
            except json.JSONDecodeError as ex:
                raise ManifestError(f"{name}: cannot parse inline matrix") from ex
        else:
            path = os.path.join(base, text.strip("\"'"))
            try:
                value = scipy.io.mmread(path)
            except (OSError, ValueError) as ex:
                raise ManifestError(f"{name}: cannot read MatrixMarket {path}") from ex
    if scipy.sparse.issparse(value):
        value = value.toarray()
    arr = np.array(value, dtype=float)
    if arr.ndim == 1:
        arr = np.diag(arr)
    return arr


def write_system(sys: SecondOrderSystem, directory, name: str) -> str:
    """Write a system as a manifest plus three MatrixMarket files.

    Args:
        sys (SecondOrderSystem): System to write.
        directory (str or os.PathLike): Output directory (created if needed).
        name (str): Stem for the manifest and matrix files.

    Returns:
        str: Path of the written manifest.
    """
    os.makedirs(directory, exist_ok=True)
    lines = [f"# {name}: generated by decaycert", f"dim = {sys.dim}"]
    for key, arr in zip(MATRIX_NAMES, (sys.m, sys.c, sys.k)):
        fname = f"{name}_{key}.mtx"
        scipy.io.mmwrite(os.path.join(directory, fname), np.array(arr), precision=17)
        lines.append(f'{key} = "{fname}"')
    manifest = os.path.join(directory, f"{name}.toml")
    with open(manifest, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    return manifest


def random_spd(dim: int, rng: np.random.Generator, low=0.5, high=2.0) -> np.ndarray:
    """Return a random SPD matrix with eigenvalues drawn from [low, high]."""
    q = scipy.linalg.qr(rng.standard_normal((dim, dim)))[0]
    a = (q * rng.uniform(low, high, size=dim)) @ q.T
    return (a + a.T) / 2


def random_system(
    dim: int, rng: Optional[np.random.Generator] = None, *, kind: str = "generic"
) -> SecondOrderSystem:
    """Draw a random system, the example generator behind tests and demos.

    Args:
        dim (int): Number of degrees of freedom.
        rng (np.random.Generator: optional): Random generator.
        kind (str: optional): "generic" (independent M, C, K), "modal" (C and
            K share mass-normalized eigenvectors) or "partially_overdamped"
            (one heavily damped direction forces gamma > gamma_0).

    Returns:
        SecondOrderSystem: Random system.

    Raises:
        ValueError: If `dim` < 1 or `kind` is unknown.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if kind not in SYSTEM_KINDS:
        raise ValueError(f"kind must be one of {SYSTEM_KINDS}, got {kind!r}")
    rng = np.random.default_rng() if rng is None else rng
    m = random_spd(dim, rng)
    if kind == "generic":
        return SecondOrderSystem(m, random_spd(dim, rng), random_spd(dim, rng))
    if kind == "modal":
        mh = dcl.sym_sqrt(m)
        q = scipy.linalg.qr(rng.standard_normal((dim, dim)))[0]
        k_modal = (q * rng.uniform(0.5, 2.0, size=dim) ** 2) @ q.T
        c_modal = (q * rng.uniform(0.2, 4.0, size=dim)) @ q.T
        return SecondOrderSystem(m, mh @ c_modal @ mh, mh @ k_modal @ mh)
    heavy = rng.standard_normal(dim)
    heavy /= np.linalg.norm(heavy)
    c = random_spd(dim, rng, 2.0, 4.0) + 100.0 * np.outer(heavy, heavy)
    return SecondOrderSystem(m, c, random_spd(dim, rng))
