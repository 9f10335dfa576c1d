"""Decay-Cert reports.

Profiles collect the numbers of an analysis and render them as text tables
(tabulate) or as styled HTML tables for notebooks.
"""

from __future__ import annotations

import bs4
import numpy as np
from tabulate import tabulate

import decaycert.envelope as dce
import decaycert.linalg as dcl
import decaycert.oracle as dco
import decaycert.spectral as dcs
from decaycert.curves import slack_stats
from decaycert.exceptions import NoDecayBoundError
from decaycert.system import SecondOrderSystem, phase_operator
from decaycert.transform import DecayCertificate
from decaycert.wave import WaveBoundComponents


class _Profile:
    """Shared rendering of profile tables."""

    _format = "simple"
    _numeric_tables = ()

    def _create_tables(self, table_fmt: str) -> list:
        raise NotImplementedError

    def __repr__(self):
        """Printable version of profile."""
        output = ["".join([x, "\n\n"]) for x in self._create_tables(self._format)]
        return "".join(output).strip() + "\n"

    def _repr_html_(self):
        """HTML representation of profile."""
        tables = [_format_html_table(t) for t in self._create_tables("html")]
        for idx in self._numeric_tables:
            if idx < len(tables):
                tables[idx] = _decimal_align_col(tables[idx], 1)
        output = "".join([table + "<br>" for table in tables])
        return output[:-4]  # remove last <br>

    def save(self, path: str):
        """Save profile to provided path.

        Args:
            path (str): Where to save profile.
        """
        with open(path, "w+", encoding="utf-8") as fh:
            fh.write(str(self))


class SystemProfile(_Profile):
    """Spectral profile of a second-order system.

    Attributes:
        name (str): Name of the system if provided. Default value is "".
        dim (int): Degrees of freedom.
        extremes (dict): Lowest and highest eigenvalue of M, C and K.
        gamma0 (float): -inf x^T C x / (2 x^T M x).
        gamma (float or None): Spectral-shift abscissa, None if no bound exists.
        path (str): How gamma was obtained.
        bisection_iterations (int): Bisection steps taken.
        gamma_b (float): Comparison abscissa.
        spectral_abscissa (float): max Re of the eigenvalues of A.
        partially_overdamped (bool): Whether gamma > gamma0.
        modal (bool): Whether the system is modally damped.
        sampled_sup (float): Largest Re p_+(x) over random unit vectors.
    """

    _numeric_tables = (1,)

    def __init__(
        self,
        sys: SecondOrderSystem,
        *,
        name: str = "",
        fmt: str = "simple",
        n_samples: int = 2000,
        seed: int = dcs.DEFAULT_SEED,
    ):
        """Initialize SystemProfile.

        Args:
            sys (SecondOrderSystem): System to profile.
            name (str: optional): Name to assign to profile.
            fmt (str: optional): Printed table format. See
                https://github.com/astanin/python-tabulate for options.
            n_samples (int: optional): Random vectors for the numerical range.
            seed (int: optional): Seed for the sampled vectors.

        Raises:
            TypeError: If input is not a SecondOrderSystem.
        """
        if not isinstance(sys, SecondOrderSystem):
            raise TypeError(f"{sys}, is not SecondOrderSystem")
        self.name = name
        self._format = fmt
        self.dim = sys.dim
        self.extremes = {
            label: (float(values[0]), float(values[-1]))
            for label, values in (
                ("Mass", dcl.sym_eigen(sys.m).values),
                ("Damping", dcl.sym_eigen(sys.c).values),
                ("Stiffness", dcl.sym_eigen(sys.k).values),
            )
        }
        self.gamma0 = dcs.gamma_zero(sys)
        self.gamma_b = dce.batkai_bound(sys)
        self.spectral_abscissa = dcl.spectral_abscissa(phase_operator(sys).a)
        self.modal = dce.modal_decompose(sys) is not None
        samples = dcs.sample_numerical_range(sys, n_samples, seed)
        self.sampled_sup = float(np.max(samples.real))
        try:
            report = dce.classify(sys)
        except NoDecayBoundError:
            self.gamma, self.path, self.bisection_iterations = None, "halted_zero_damping_gap", 0
            self.partially_overdamped, self.smaller = False, "n/a"
            return
        self.gamma = report.gamma
        self.path = report.path
        self.bisection_iterations = report.bisection_iterations
        self.partially_overdamped = report.partially_overdamped
        self.smaller = report.smaller

    def _create_tables(self, table_fmt: str) -> list:
        """Create SystemProfile summary tables."""
        info = [("Dimension", self.dim), ("Modally Damped", self.modal)]
        if self.name:
            info.insert(0, ("System Name", self.name))
        info_table = tabulate(info, headers=["System Info", ""], tablefmt=table_fmt)
        extremes_table = tabulate(
            [(label, low, high) for label, (low, high) in self.extremes.items()],
            headers=["Matrix", "Lowest Eigenvalue", "Highest Eigenvalue"],
            tablefmt=table_fmt,
            floatfmt=".6g",
        )
        gamma = "n/a" if self.gamma is None else f"{self.gamma:.12g}"
        shift = [
            ("gamma0", f"{self.gamma0:.12g}"),
            ("gamma", gamma),
            ("Path", self.path),
            ("Bisection Steps", self.bisection_iterations),
            ("gamma_b", f"{self.gamma_b:.12g}"),
            ("Smaller Abscissa", self.smaller),
            ("Spectral Abscissa", f"{self.spectral_abscissa:.12g}"),
            ("Sampled sup Re p+", f"{self.sampled_sup:.12g}"),
            ("Partially Overdamped", self.partially_overdamped),
        ]
        shift_table = tabulate(shift, headers=["Spectral Shift", ""], tablefmt=table_fmt)
        return [info_table, extremes_table, shift_table]


class CertificateProfile(_Profile):
    """Verification profile of a decay certificate.

    Attributes:
        certificate (DecayCertificate): Certificate checked.
        max_violation (float): Largest ||e^{At}|| - c_beta e^{beta t} on the grid.
        passed (bool): Whether the violation is within 1e-9.
        stats (dict): Distribution statistics of the slack curve.
    """

    _numeric_tables = (1,)

    def __init__(
        self,
        sys: SecondOrderSystem,
        cert: DecayCertificate,
        t_grid,
        *,
        fmt: str = "simple",
    ):
        """Initialize CertificateProfile.

        Args:
            sys (SecondOrderSystem): System the certificate belongs to.
            cert (DecayCertificate): Certificate to verify.
            t_grid (array_like): Times to verify on.
            fmt (str: optional): Printed table format.

        Raises:
            TypeError: If `cert` is not a DecayCertificate.
        """
        if not isinstance(cert, DecayCertificate):
            raise TypeError(f"{cert}, is not DecayCertificate")
        self._format = fmt
        self.certificate = cert
        report = dco.verify_certificate(sys, cert, t_grid)
        self.max_violation = report.max_violation
        self.passed = report.passed
        self.stats = slack_stats(report.slack_curve)

    def _create_tables(self, table_fmt: str) -> list:
        """Create CertificateProfile summary tables."""
        cert = self.certificate
        info = [
            ("beta", f"{cert.beta:.12g}"),
            ("C_beta", f"{cert.c_beta:.12g}"),
            ("Condition Mode", cert.cond_mode),
            ("Max Violation", f"{self.max_violation:.6e}"),
            ("Passed", self.passed),
        ]
        if cert.notes:
            info.append(("Notes", cert.notes))
        info_table = tabulate(info, headers=["Certificate", ""], tablefmt=table_fmt)
        stats_table = tabulate(
            list(self.stats.items()),
            headers=["Slack Statistic", "Value"],
            tablefmt=table_fmt,
            floatfmt=".6e",
        )
        return [info_table, stats_table]


class WaveProfile(_Profile):
    """Profile of the wave-demo bound at one shift.

    Attributes:
        components (WaveBoundComponents): Eigenvalues and bounds.
        cond_exact (float or None): Condition number from the matrix route.
    """

    _numeric_tables = (0,)

    def __init__(
        self,
        components: WaveBoundComponents,
        *,
        cond_exact: float = None,
        fmt: str = "simple",
    ):
        """Initialize WaveProfile.

        Raises:
            TypeError: If `components` is not WaveBoundComponents.
        """
        if not isinstance(components, WaveBoundComponents):
            raise TypeError(f"{components}, is not WaveBoundComponents")
        self.components = components
        self.cond_exact = cond_exact
        self._format = fmt

    def _create_tables(self, table_fmt: str) -> list:
        """Create WaveProfile summary table."""
        comp = self.components
        rows = [
            ("mu", comp.mu),
            ("lambda1", comp.lambda1),
            ("lambda2", comp.lambda2),
            ("lambda3", comp.lambda3),
            ("C_mu (displayed bound)", comp.c_mu_bound),
            ("C_mu (block norms)", comp.c_mu_rigorous),
        ]
        if self.cond_exact is not None:
            rows.append(("cond L(mu) (matrix route)", self.cond_exact))
        return [
            tabulate(rows, headers=["Wave Bound", "Value"], tablefmt=table_fmt,
                     floatfmt=".10g")
        ]


def _format_html_table(table: str, align: str = "left", font: str = "monospace") -> str:
    """Add additional formatting to HTML table prepared by tabulate."""
    soup = bs4.BeautifulSoup(table, "html.parser")
    for row in soup.find_all("tr"):
        tags = row.find_all(["th", "td"])  # row in thead will have 'th'
        for tag in tags:
            tag["style"] = f"font-family: {font}, monospace; text-align: {align};"
    return str(soup)


def _decimal_align_col(table: str, col: int):
    """Create decimal-aligned numbers in column of HTML table."""
    soup = bs4.BeautifulSoup(table, "html.parser")
    for row in soup.find_all("tr"):
        tags = row.find_all("td")
        if len(tags) > col and tags[col].string:
            tags[col].string = tags[col].string.replace(" ", "\u2007")  # figure space
    return str(soup)
