"""Decay-Cert command line.

Subcommands: gamma, bound, envelope, compare, verify, demo-2x2, demo-wave.
Results go to stdout (or --output), diagnostics to stderr. Exit codes are
0 on success, 2 on invalid input, 3 when no decay bound exists and 4 when a
certificate fails verification.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass
from typing import Optional

import decaycert.envelope as dce
import decaycert.oracle as dco
import decaycert.spectral as dcs
import decaycert.transform as dct
import decaycert.wave as dcw
from decaycert import __version__, curves, grids
from decaycert.exceptions import DecayCertError, NoDecayBoundError
from decaycert.reports import CertificateProfile, SystemProfile, WaveProfile
from decaycert.system import load_system

logger = logging.getLogger(__name__)

COMMANDS = ("gamma", "bound", "envelope", "compare", "verify", "demo-2x2", "demo-wave")
SYSTEM_COMMANDS = ("gamma", "bound", "envelope", "compare", "verify")
SEED_ENV = "DECAY_CERT_SEED"

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NO_BOUND = 3
EXIT_VERIFY_FAILED = 4


@dataclass(frozen=True)
class RunConfig:
    """Validated settings of one command-line run.

    Attributes:
        command (str): One of COMMANDS.
        system_path (str or None): Manifest path for system commands.
        n_mu (int): Number of shifts in the envelope grid.
        t_max (float): Last time of the output grid.
        t_points (int): Number of output times.
        mu_override (float or None): Shift for bound/verify/demo-wave.
        seed (int): Seed for sampled quantities.
        output_path (str or None): File for CSV or report output.
        cond_mode (str): "exact" or "lemma".
        with_oracle (bool): Add ||e^{At}|| to the envelope output.
        k (float): Frequency of the 2x2 demo.
        d (float): Damping of the 2x2 demo.
        n (int): Interior nodes of the wave demo.
        length (float): Interval length of the wave demo.
        damping (str): Damping specification of the wave demo.
    """

    command: str
    system_path: Optional[str] = None
    n_mu: int = grids.DEFAULT_N_MU
    t_max: float = 10.0
    t_points: int = 200
    mu_override: Optional[float] = None
    seed: int = dcs.DEFAULT_SEED
    output_path: Optional[str] = None
    cond_mode: str = "exact"
    with_oracle: bool = False
    k: float = 1.0
    d: float = 1.0
    n: int = dcw.DEFAULT_N
    length: float = dcw.DEFAULT_LENGTH
    damping: str = "const:1"

    def __post_init__(self):
        """Check invariants.

        Raises:
            ValueError: If a setting is out of range or missing.
        """
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.t_max <= 0:
            raise ValueError(f"t_max must be positive, got {self.t_max}")
        if self.t_points < 2:
            raise ValueError(f"t_points must be >= 2, got {self.t_points}")
        if self.n_mu < 1:
            raise ValueError(f"n_mu must be >= 1, got {self.n_mu}")
        if self.cond_mode not in dct.COND_MODES:
            raise ValueError(f"cond_mode must be one of {dct.COND_MODES}")
        if self.command in SYSTEM_COMMANDS and not self.system_path:
            raise ValueError(f"{self.command} needs --system")


def _emit(text: str, path: Optional[str]):
    """Write result text to `path` or stdout."""
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _default_mu(gamma: float) -> float:
    return gamma / 2


def _run_gamma(config: RunConfig) -> int:
    result = dcs.compute_gamma(load_system(config.system_path))
    lines = [
        f"gamma0 = {result.gamma0:.17g}",
        f"gamma = {result.gamma:.17g}",
        f"path = {result.path}",
        f"iterations = {result.bisection_iterations}",
    ]
    _emit("\n".join(lines) + "\n", config.output_path)
    return EXIT_OK


def _run_bound(config: RunConfig) -> int:
    sys_ = load_system(config.system_path)
    gamma = dcs.compute_gamma(sys_).gamma
    mu = _default_mu(gamma) if config.mu_override is None else config.mu_override
    cert = dct.certificate_at(sys_, mu, config.cond_mode, gamma=gamma)
    lines = [
        f"beta = {cert.beta:.17g}",
        f"c_beta = {cert.c_beta:.17g}",
        f"cond_mode = {cert.cond_mode}",
    ]
    _emit("\n".join(lines) + "\n", config.output_path)
    return EXIT_OK


def _run_envelope(config: RunConfig) -> int:
    sys_ = load_system(config.system_path)
    curve = dce.envelope(
        sys_,
        config.n_mu,
        grids.time_grid(config.t_max, config.t_points),
        config.with_oracle,
        cond_mode=config.cond_mode,
    )
    _emit(curves.write_csv(curve.to_frame()), config.output_path)
    return EXIT_OK


def _run_compare(config: RunConfig) -> int:
    sys_ = load_system(config.system_path)
    name = os.path.basename(config.system_path)
    _emit(str(SystemProfile(sys_, name=name, seed=config.seed)), config.output_path)
    return EXIT_OK


def _run_verify(config: RunConfig) -> int:
    sys_ = load_system(config.system_path)
    gamma = dcs.compute_gamma(sys_).gamma
    mu = _default_mu(gamma) if config.mu_override is None else config.mu_override
    cert = dct.certificate_at(sys_, mu, config.cond_mode, gamma=gamma)
    t_grid = grids.log_time_grid(config.t_max, config.t_points)
    profile = CertificateProfile(sys_, cert, t_grid)
    _emit(str(profile), config.output_path)
    print(f"max_violation = {profile.max_violation:.17g}", file=sys.stderr)
    return EXIT_OK if profile.passed else EXIT_VERIFY_FAILED


def _run_demo_2x2(config: RunConfig) -> int:
    frame = dco.demo_2x2_frame(
        config.k,
        config.d,
        config.n_mu,
        grids.time_grid(config.t_max, config.t_points),
        cond_mode=config.cond_mode,
    )
    _emit(curves.write_csv(frame), config.output_path)
    return EXIT_OK


def _run_demo_wave(config: RunConfig) -> int:
    disc = dcw.discretize(config.n, config.length, config.damping)
    if config.mu_override is None:
        mu = _default_mu(dcs.compute_gamma(disc.system).gamma)
    else:
        mu = config.mu_override
    components = dcw.wave_bound(disc, mu)
    cond = dct.build_transform(disc.system, mu).cond_exact
    _emit(str(WaveProfile(components, cond_exact=cond)), config.output_path)
    return EXIT_OK


_DISPATCH = {
    "gamma": _run_gamma,
    "bound": _run_bound,
    "envelope": _run_envelope,
    "compare": _run_compare,
    "verify": _run_verify,
    "demo-2x2": _run_demo_2x2,
    "demo-wave": _run_demo_wave,
}


def run(config: RunConfig) -> int:
    """Run one command and return its exit status.

    Errors are reported as one line on stderr.

    Args:
        config (RunConfig): Validated settings.

    Returns:
        int: 0 success, 2 invalid input, 3 no decay bound, 4 verification failure.
    """
    logger.debug("run %s", config)
    try:
        return _DISPATCH[config.command](config)
    except NoDecayBoundError as ex:
        print(f"decay-cert: no decay bound: {ex}", file=sys.stderr)
        return EXIT_NO_BOUND
    except (DecayCertError, ValueError, TypeError, OSError) as ex:
        print(f"decay-cert: {config.command}: {ex}", file=sys.stderr)
        return EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    """Return the argument parser."""
    parser = argparse.ArgumentParser(
        prog="decay-cert",
        description="Certified exponential decay bounds for M x'' + C x' + K x = 0.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="log at DEBUG level")
    common.add_argument("-o", "--output", dest="output_path", help="write results here")
    common.add_argument("--t-max", type=float, default=10.0)
    common.add_argument("--t-points", type=int, default=200)
    common.add_argument("--seed", type=int, default=dcs.DEFAULT_SEED)
    common.add_argument("--cond-mode", choices=dct.COND_MODES, default="exact")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name in SYSTEM_COMMANDS:
        sub = subparsers.add_parser(name, parents=[common])
        sub.add_argument("--system", dest="system_path", required=True,
                         help="manifest file")
        if name in ("bound", "verify"):
            sub.add_argument("--mu", dest="mu_override", type=float)
        if name == "envelope":
            sub.add_argument("--n-mu", type=int, default=grids.DEFAULT_N_MU)
            sub.add_argument("--oracle", dest="with_oracle", action="store_true",
                             help="add the oracle_norm column")
    demo = subparsers.add_parser("demo-2x2", parents=[common])
    demo.add_argument("--k", type=float, default=1.0)
    demo.add_argument("--d", type=float, default=1.0)
    demo.add_argument("--n-mu", type=int, default=4)
    wave = subparsers.add_parser("demo-wave", parents=[common])
    wave.add_argument("--n", type=int, default=dcw.DEFAULT_N)
    wave.add_argument("--length", type=float, default=dcw.DEFAULT_LENGTH)
    wave.add_argument("--damping", default="const:1")
    wave.add_argument("--mu", dest="mu_override", type=float)
    return parser


def main(argv=None) -> int:
    """Entry point of the decay-cert command.

    Args:
        argv (list: optional): Arguments without the program name.

    Returns:
        int: Exit status.
    """
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    options = {key: value for key, value in vars(args).items() if key != "verbose"}
    seed = os.environ.get(SEED_ENV)
    try:
        if seed is not None:
            options["seed"] = int(seed)
        config = RunConfig(**options)
    except ValueError as ex:
        print(f"decay-cert: {ex}", file=sys.stderr)
        return EXIT_INVALID
    return run(config)
