"""Tests for the decay-cert command line in cli.py."""

import os
import pandas as pd
import pytest
import decaycert.cli as dccli
import decaycert.oracle as dco

TEST_DATA_DIR = "tests/test_data"  # needed
CRITICAL = os.path.join(TEST_DATA_DIR, "critical.toml")
TWO_MASS = os.path.join(TEST_DATA_DIR, "two_mass.toml")
NO_GAP = os.path.join(TEST_DATA_DIR, "no_damping_gap.toml")


def _values(text: str) -> dict:
    pairs = [line.split(" = ", 1) for line in text.splitlines() if " = " in line]
    return dict(pairs)


def test_gamma(capsys):
    """gamma prints both abscissas and the path taken."""
    assert dccli.main(["gamma", "--system", CRITICAL]) == dccli.EXIT_OK
    values = _values(capsys.readouterr().out)
    assert values["path"] == "gamma_equals_gamma0"
    assert float(values["gamma0"]) == pytest.approx(-1.0)
    assert float(values["gamma"]) == pytest.approx(-1.0)
    assert values["iterations"] == "0"


def test_bound(capsys):
    """bound at mu = 0 gives the trivial certificate."""
    assert dccli.main(["bound", "--system", TWO_MASS, "--mu", "0"]) == dccli.EXIT_OK
    values = _values(capsys.readouterr().out)
    assert float(values["beta"]) == 0.0
    assert float(values["c_beta"]) == pytest.approx(1.0, abs=1e-12)
    assert values["cond_mode"] == "exact"


def test_bound_default_shift(capsys):
    """Without --mu the certificate is taken halfway to gamma."""
    assert dccli.main(["bound", "--system", TWO_MASS, "--cond-mode", "lemma"]) == 0
    values = _values(capsys.readouterr().out)
    assert float(values["beta"]) < 0.0
    assert float(values["c_beta"]) >= 1.0 - 1e-12
    assert values["cond_mode"] == "lemma"


def test_envelope_to_file(tmp_path):
    """envelope writes a CSV with the oracle column on request."""
    path = tmp_path / "envelope.csv"
    argv = ["envelope", "--system", TWO_MASS, "--n-mu", "4", "--t-points", "25",
            "--oracle", "-o", str(path)]
    assert dccli.main(argv) == dccli.EXIT_OK
    frame = pd.read_csv(path)
    assert list(frame.columns) == ["t", "bound", "best_mu", "oracle_norm"]
    assert len(frame) == 25
    assert (frame["bound"] >= frame["oracle_norm"] - 1e-9).all()


def test_compare(capsys):
    """compare prints the system profile under the manifest name."""
    assert dccli.main(["compare", "--system", TWO_MASS]) == dccli.EXIT_OK
    out = capsys.readouterr().out
    assert "two_mass.toml" in out
    assert "gamma_b" in out


def test_verify(capsys):
    """verify passes for a real certificate and reports the violation."""
    argv = ["verify", "--system", TWO_MASS, "--t-max", "50", "--t-points", "40"]
    assert dccli.main(argv) == dccli.EXIT_OK
    captured = capsys.readouterr()
    assert "Slack Statistic" in captured.out
    assert "max_violation = " in captured.err


def test_verify_failure(monkeypatch):
    """A failed verification has its own exit status."""
    monkeypatch.setattr(dco, "TOL_VIOLATION", -1.0)
    argv = ["verify", "--system", TWO_MASS, "--t-max", "20", "--t-points", "20"]
    assert dccli.main(argv) == dccli.EXIT_VERIFY_FAILED


def test_demo_2x2(capsys):
    """demo-2x2 writes the envelope, the norm and one column per shift."""
    argv = ["demo-2x2", "--k", "1", "--d", "1", "--t-points", "11"]
    assert dccli.main(argv) == dccli.EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("t,bound,norm,mu=")
    assert len(lines[0].split(",")) == 7
    assert len(lines) == 12


def test_demo_wave(capsys):
    """demo-wave prints the wave bound table."""
    assert dccli.main(["demo-wave", "--n", "20", "--mu", "-0.2"]) == dccli.EXIT_OK
    out = capsys.readouterr().out
    assert "Wave Bound" in out
    assert "matrix route" in out


def test_invalid_input(capsys):
    """Unreadable manifests and out-of-range shifts exit with 2."""
    missing = os.path.join(TEST_DATA_DIR, "missing.toml")
    assert dccli.main(["gamma", "--system", missing]) == dccli.EXIT_INVALID
    assert dccli.main(["bound", "--system", TWO_MASS, "--mu", "0.5"]) == dccli.EXIT_INVALID
    assert dccli.main(["demo-2x2", "--d", "0"]) == dccli.EXIT_INVALID
    assert dccli.main(["envelope", "--system", TWO_MASS, "--t-max", "0"]) == 2
    assert capsys.readouterr().err.startswith("decay-cert: ")


def test_no_decay_bound(capsys):
    """A vanishing damping gap exits with 3."""
    assert dccli.main(["gamma", "--system", NO_GAP]) == dccli.EXIT_NO_BOUND
    assert "no decay bound" in capsys.readouterr().err


def test_seed_from_environment(monkeypatch):
    """The seed can be set from the environment but must be an integer."""
    monkeypatch.setenv(dccli.SEED_ENV, "abc")
    assert dccli.main(["compare", "--system", TWO_MASS]) == dccli.EXIT_INVALID
    monkeypatch.setenv(dccli.SEED_ENV, "5")
    assert dccli.main(["compare", "--system", TWO_MASS]) == dccli.EXIT_OK


def test_parser_errors():
    """argparse rejects unknown commands and missing manifests."""
    with pytest.raises(SystemExit):
        dccli.main(["unknown"])
    with pytest.raises(SystemExit):
        dccli.main(["gamma"])
    with pytest.raises(SystemExit):
        dccli.main(["envelope", "--system", TWO_MASS, "--cond-mode", "loose"])
    for command in ("gamma", "bound", "compare", "verify"):
        with pytest.raises(SystemExit):
            dccli.main([command, "--system", TWO_MASS, "--n-mu", "4"])


def test_run_config_invalid():
    """RunConfig checks its settings."""
    invalid_configs = [
        {"command": "plot"},
        {"command": "gamma"},
        {"command": "gamma", "system_path": CRITICAL, "t_max": -1.0},
        {"command": "gamma", "system_path": CRITICAL, "t_points": 1},
        {"command": "gamma", "system_path": CRITICAL, "n_mu": 0},
        {"command": "gamma", "system_path": CRITICAL, "cond_mode": "loose"},
    ]
    for options in invalid_configs:
        with pytest.raises(ValueError):
            dccli.RunConfig(**options)
    assert dccli.RunConfig("demo-2x2").system_path is None
