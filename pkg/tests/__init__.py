"""Tests package for Decay-Cert."""
