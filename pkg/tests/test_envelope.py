"""Tests for envelope.py."""

import inspect
import numpy as np
import pytest
import decaycert
import decaycert.envelope as dce
from decaycert import grids
from decaycert.oracle import ClosedForm2x2, closed_form_norm, norm_curve
from decaycert.linalg import gen_sym_eigen_highest, gen_sym_eigen_lowest
from decaycert.spectral import compute_gamma
from decaycert.system import SecondOrderSystem, random_spd, random_system
from decaycert.transform import certificate_at
from .utils import assert_dominates, single_mode


def test_envelope_module_import():
    """The envelope submodule is not shadowed by a package attribute."""
    assert inspect.ismodule(dce)
    assert decaycert.envelope is dce
    assert callable(dce.envelope)


def test_envelope_dominates_norm(generic_systems, overdamped_systems):
    """The envelope bounds ||e^{At}|| from above."""
    for sys in [*generic_systems, *overdamped_systems]:
        curve = dce.envelope(sys, n_mu=8, with_oracle=True)
        assert len(curve.bound) == len(curve.t_grid) == 200
        assert_dominates(curve.bound, curve.oracle_norm)
        assert np.all(curve.bound <= 1.0 + 1e-12)
        assert curve.bound[0] == pytest.approx(1.0)


def test_envelope_best_mu(two_mass_sys):
    """Minimizing shifts come from the grid and move left as t grows."""
    curve = dce.envelope(two_mass_sys, n_mu=6, t_grid=grids.time_grid(200.0, 101))
    assert set(curve.best_mu) <= set(curve.mus)
    assert curve.best_mu[0] == 0.0
    assert curve.best_mu[-1] < 0.0
    assert np.all(np.diff(curve.best_mu) <= 0)


def test_envelope_nested_grids(two_mass_sys):
    """Refining the shift grid never raises the envelope."""
    t_grid = grids.time_grid(100.0, 51)
    coarse = dce.envelope(two_mass_sys, n_mu=5, t_grid=t_grid)
    fine = dce.envelope(two_mass_sys, n_mu=17, t_grid=t_grid)
    assert np.all(fine.bound <= coarse.bound * (1 + 1e-9))


def test_envelope_explicit_shifts(overdamped_mode):
    """With one explicit shift the envelope is that certificate's curve."""
    gamma = compute_gamma(overdamped_mode).gamma
    t_grid = grids.time_grid(10.0, 11)
    curve = dce.envelope(overdamped_mode, t_grid=t_grid, mus=[gamma / 2])
    cert = certificate_at(overdamped_mode, gamma / 2)
    assert np.allclose(curve.bound, cert.bound(t_grid), rtol=1e-14)
    assert curve.oracle_norm is None


def test_envelope_frame(underdamped_mode):
    """Frame columns follow the oracle flag."""
    t_grid = grids.time_grid(5.0, 6)
    frame = dce.envelope(underdamped_mode, 4, t_grid).to_frame()
    assert list(frame.columns) == ["t", "bound", "best_mu"]
    frame = dce.envelope(underdamped_mode, 4, t_grid, with_oracle=True).to_frame()
    assert list(frame.columns) == ["t", "bound", "best_mu", "oracle_norm"]
    assert len(frame) == 6


def test_envelope_lemma_mode(two_mass_sys):
    """Lemma constants give a larger but still valid envelope."""
    t_grid = grids.log_time_grid(100.0, 40)
    exact = dce.envelope(two_mass_sys, 6, t_grid, with_oracle=True)
    lemma = dce.envelope(two_mass_sys, 6, t_grid, cond_mode="lemma")
    assert np.all(lemma.bound >= exact.bound * (1 - 1e-12))
    assert_dominates(lemma.bound, exact.oracle_norm)


@pytest.mark.parametrize(
    "k, d", [(1.0, 1.0), (1.0, 0.5), (2.0, 1.0), (0.5, 3.0), (1.0, 2.0)]
)
def test_batkai_single_mode(k, d):
    """gamma_b of a single mode is max{-k^2 / (d + 2 k), -d/2}."""
    expected = max(-(k**2) / (d + 2 * k), -d / 2)
    assert dce.batkai_bound(single_mode(k, d)) == pytest.approx(expected, rel=1e-12)


def test_classify_single_modes():
    """Below the crossover d = sqrt(3) - 1 both abscissas agree."""
    report = dce.classify(single_mode(1.0, 0.5))
    assert report.smaller == "equal"
    assert report.gamma == report.gamma_b
    assert not report.partially_overdamped
    report = dce.classify(single_mode(1.0, 1.0))
    assert report.smaller == "gamma"
    assert report.gamma == pytest.approx(-0.5)
    assert report.gamma_b == pytest.approx(-1 / 3)


def test_batkai_crossover():
    """gamma_b leaves gamma at d = (sqrt(3) - 1) k."""
    for k in (1.0, 2.0):
        crossover = (np.sqrt(3) - 1) * k
        for d in np.arange(0.60 * k, 0.90 * k, 1e-3):
            if abs(d - crossover) < 1e-3 * k:
                continue
            sys = single_mode(k, d)
            gap = dce.batkai_bound(sys) - compute_gamma(sys).gamma
            if d < crossover:
                assert abs(gap) <= 1e-12
            else:
                assert gap > 0


def test_batkai_underdamped_systems():
    """gamma never exceeds gamma_b when every Rayleigh quotient is underdamped."""
    rng = np.random.default_rng(17)
    for dim in (2, 3, 4, 5, 6):
        m, k = random_spd(dim, rng), random_spd(dim, rng)
        c = random_spd(dim, rng)
        c *= 0.9 * 2 * np.sqrt(gen_sym_eigen_lowest(k, m)) / gen_sym_eigen_highest(c, m)
        sys = SecondOrderSystem(m, c, k)
        xs = np.random.default_rng(dim).standard_normal((10_000, dim))
        mm, cc, kk = (np.einsum("ij,jk,ik->i", xs, mat, xs) for mat in (m, c, k))
        assert np.max(cc**2 - 4 * mm * kk) < 0
        assert compute_gamma(sys).gamma <= dce.batkai_bound(sys) + 1e-10


def test_classify_overdamped(overdamped_mode, overdamped_systems):
    """Partially overdamped systems have gamma at the spectral abscissa."""
    report = dce.classify(overdamped_mode)
    assert report.partially_overdamped
    assert report.path == "bisected"
    assert report.spectral_abscissa == pytest.approx((-3 + np.sqrt(5)) / 2)
    for sys in overdamped_systems:
        report = dce.classify(sys)
        assert report.partially_overdamped
        assert abs(report.gamma - report.spectral_abscissa) <= 1e-6


def test_classify_random_overdamped():
    """gamma is the spectral abscissa whenever it lies above gamma0."""
    rng = np.random.default_rng(43)
    for dim in (2, 3, 4, 5, 6, 2, 3, 4, 5, 6):
        report = dce.classify(random_system(dim, rng, kind="partially_overdamped"))
        assert report.partially_overdamped
        assert report.gamma > report.gamma0
        assert abs(report.gamma - report.spectral_abscissa) <= 1e-6


def test_mode_gamma():
    """Type of a single mode in the three regimes."""
    assert dce.mode_gamma(1.0, 1.0) == pytest.approx(-0.5)
    assert dce.mode_gamma(1.0, 2.0) == pytest.approx(-1.0)
    assert dce.mode_gamma(1.0, 3.0) == pytest.approx((-3 + np.sqrt(5)) / 2)
    assert dce.mode_gamma(1.0, 1e8) == pytest.approx(-1e-8, rel=1e-10)


def test_modal_decompose(modal_sys, diagonal_sys, generic_systems):
    """Modally damped systems split into modes, generic ones do not."""
    modes = sorted(dce.modal_decompose(diagonal_sys), key=lambda mode: mode[1])
    assert np.allclose(modes, [(2.0, 0.5), (1.0, 1.0), (1.0, 3.0)])
    modes = dce.modal_decompose(modal_sys)
    assert len(modes) == modal_sys.dim
    gamma = compute_gamma(modal_sys).gamma
    assert max(dce.mode_gamma(k, d) for k, d in modes) == pytest.approx(gamma, abs=1e-8)
    for sys in generic_systems:
        assert dce.modal_decompose(sys) is None


def test_modal_envelope_matches_generic(modal_sys):
    """Mode-wise and full constructions give the same envelope."""
    modes = dce.modal_decompose(modal_sys)
    gamma = compute_gamma(modal_sys).gamma
    mus = grids.mu_grid(gamma, 5)
    t_grid = grids.time_grid(20.0, 41)
    generic = dce.envelope(modal_sys, t_grid=t_grid, with_oracle=True, mus=mus)
    modal = dce.modal_envelope(modes, t_grid, with_oracle=True, mus=mus)
    assert np.allclose(modal.bound, generic.bound, rtol=1e-7)
    assert np.allclose(modal.oracle_norm, generic.oracle_norm, rtol=1e-8, atol=1e-12)
    assert_dominates(modal.bound, modal.oracle_norm)


def test_modal_envelope_default_grid(diagonal_sys):
    """Default grid is placed against the largest mode type."""
    curve = dce.modal_envelope(dce.modal_decompose(diagonal_sys))
    assert curve.gamma == pytest.approx(-0.25)
    assert len(curve.mus) == grids.DEFAULT_N_MU
    assert curve.mus[-1] == 0.0
    with pytest.raises(ValueError):
        dce.modal_envelope([])


def test_modal_random_systems():
    """Random modal systems: gamma is the largest mode type, envelopes agree."""
    rng = np.random.default_rng(59)
    t_grid = grids.time_grid(20.0, 21)
    for dim in (2, 3, 4, 5, 6, 2, 3, 4, 5, 6):
        sys = random_system(dim, rng, kind="modal")
        modes = dce.modal_decompose(sys)
        assert modes is not None
        gamma = compute_gamma(sys).gamma
        assert max(dce.mode_gamma(k, d) for k, d in modes) == pytest.approx(gamma, abs=1e-8)
        mus = grids.mu_grid(gamma, 4)
        generic = dce.envelope(sys, t_grid=t_grid, mus=mus)
        modal = dce.modal_envelope(modes, t_grid, mus=mus)
        assert np.max(np.abs(modal.bound - generic.bound)) <= 1e-6 * np.max(generic.bound)


def test_asymptotic_certificate():
    """The -d/2 certificate tightens as k/d grows."""
    loose = dce.asymptotic_certificate(10.0, 1.0)
    tight = dce.asymptotic_certificate(100.0, 1.0)
    assert loose.beta == -0.5
    assert 1.0 - 1e-12 <= tight.c_beta < loose.c_beta < 1.1
    cf = ClosedForm2x2(10.0, 1.0)
    t_grid = grids.time_grid(30.0, 301)
    norms = [closed_form_norm(cf, t) for t in t_grid]
    assert_dominates(loose.bound(t_grid), norms)
    with pytest.raises(ValueError):
        dce.asymptotic_certificate(1.0, 3.0)


def test_envelope_two_mass_oracle(two_mass_sys):
    """Oracle column equals the norm curve on the same grid."""
    t_grid = grids.time_grid(10.0, 21)
    curve = dce.envelope(two_mass_sys, 4, t_grid, with_oracle=True)
    assert np.allclose(curve.oracle_norm, norm_curve(two_mass_sys, t_grid).norms)
