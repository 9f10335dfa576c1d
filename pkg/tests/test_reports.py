"""Tests for profile classes in reports.py."""

import os
import tempfile
import bs4
import pytest
import decaycert.reports as dcr
from decaycert import grids
from decaycert.spectral import compute_gamma
from decaycert.system import load_system
from decaycert.transform import certificate_at
from decaycert.wave import discretize, wave_bound

TEST_DATA_DIR = "tests/test_data"  # needed
HTML_STYLE = "font-family: monospace, monospace; text-align: left;"


def _tables(profile) -> list:
    # fmt: off
    soup = bs4.BeautifulSoup(profile._repr_html_(), "html.parser")  # pylint: disable=W0212
    # fmt: on
    return soup.find_all("table")


def test_system_profile_text(two_mass_sys):
    """Text profile names the system and lists the abscissas."""
    profile = dcr.SystemProfile(two_mass_sys, name="two_mass", n_samples=200)
    text = str(profile)
    assert "two_mass" in text
    assert "gamma0" in text
    assert "Spectral Abscissa" in text
    assert profile.sampled_sup <= profile.gamma + 1e-9


def test_system_profile_save(critical_sys):
    """Saved profile matches its printed form."""
    profile = dcr.SystemProfile(critical_sys, n_samples=50)
    with tempfile.TemporaryDirectory() as tmp:
        test_file = os.path.join(tmp, "temp.txt")
        profile.save(test_file)
        with open(test_file, encoding="utf-8") as fh:
            assert fh.read() == str(profile)
    assert profile.path == "gamma_equals_gamma0"
    assert "System Name" not in str(profile)


def test_system_profile_invalid(non_system_invalid):
    """SystemProfile only accepts SecondOrderSystem."""
    for invalid in non_system_invalid:
        with pytest.raises(TypeError):
            dcr.SystemProfile(invalid)


def test_system_profile_html(two_mass_sys):
    """HTML representation has three styled tables."""
    tables = _tables(dcr.SystemProfile(two_mass_sys, n_samples=50))
    assert len(tables) == 3
    assert tables[0].find("td")["style"] == HTML_STYLE
    assert len(tables[1].find_all("tr")) == 4  # M, C, K + head row


def test_system_profile_halted():
    """A system without a damping gap has no gamma."""
    sys = load_system(os.path.join(TEST_DATA_DIR, "no_damping_gap.toml"))
    profile = dcr.SystemProfile(sys, n_samples=50)
    assert profile.gamma is None
    assert profile.path == "halted_zero_damping_gap"
    assert "n/a" in str(profile)


def test_certificate_profile(two_mass_sys):
    """Profile of a valid certificate passes with 12 slack statistics."""
    cert = certificate_at(two_mass_sys, compute_gamma(two_mass_sys).gamma / 2)
    profile = dcr.CertificateProfile(two_mass_sys, cert, grids.log_time_grid(50.0, 60))
    assert profile.passed
    assert len(profile.stats) == 12
    assert "C_beta" in str(profile)
    tables = _tables(profile)
    assert len(tables) == 2
    assert len(tables[1].find_all("tr")) == 13  # 12 stats + head row


def test_certificate_profile_invalid(two_mass_sys):
    """CertificateProfile only accepts DecayCertificate."""
    for invalid in [None, 1.0, (0.0, 1.0), {"beta": 0.0, "c_beta": 1.0}]:
        with pytest.raises(TypeError):
            dcr.CertificateProfile(two_mass_sys, invalid, [0.0, 1.0])


def test_wave_profile():
    """Wave profile lists eigenvalues, bounds and the matrix-route condition."""
    comp = wave_bound(discretize(20), -0.2)
    profile = dcr.WaveProfile(comp, cond_exact=2.5)
    assert "Wave Bound" in str(profile)
    tables = _tables(profile)
    assert len(tables) == 1
    assert len(tables[0].find_all("tr")) == 8  # 7 rows + head row
    assert len(_tables(dcr.WaveProfile(comp))[0].find_all("tr")) == 7
    with pytest.raises(TypeError):
        dcr.WaveProfile({"mu": -0.2})
