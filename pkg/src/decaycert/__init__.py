"""Decay-Cert certifies exponential decay of damped second-order systems."""

from __future__ import annotations

__version__ = "0.1.0"

# pylint: disable=wrong-import-position
from decaycert.system import SecondOrderSystem, load_system, random_system
from decaycert.spectral import compute_gamma, gamma_zero
from decaycert.transform import build_transform, certificate_at
from decaycert.envelope import batkai_bound, classify, modal_envelope
from decaycert.oracle import norm_curve, verify_certificate
from decaycert.wave import discretize, wave_bound
from decaycert.reports import CertificateProfile, SystemProfile, WaveProfile

__all__ = [
    "SecondOrderSystem",
    "load_system",
    "random_system",
    "compute_gamma",
    "gamma_zero",
    "build_transform",
    "certificate_at",
    "modal_envelope",
    "batkai_bound",
    "classify",
    "norm_curve",
    "verify_certificate",
    "discretize",
    "wave_bound",
    "SystemProfile",
    "CertificateProfile",
    "WaveProfile",
]
