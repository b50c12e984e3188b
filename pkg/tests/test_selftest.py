import io

import pytest

from riclab import core_math, selftest
from riclab.selftest import matches_printed


def test_matches_printed():
    assert matches_printed(core_math.RHO0, "0.0615")
    assert matches_printed(core_math.GAMMA0, "4.329")
    assert not matches_printed(0.0621, "0.0615")


@pytest.mark.parametrize("name", ["constant-chain", "kappa-gamma", "rates", "stirling", "spectra", "solver"])
def test_suite_passes(name):
    checks = selftest.SUITES[name]()
    assert checks and all(c.passed for c in checks), [c for c in checks if not c.passed]


def test_run_reports_table():
    buf = io.StringIO()
    assert selftest.run(["borned1"], out=buf)
    lines = buf.getvalue().splitlines()
    assert lines[0].split() == ["suite", "checks", "failed", "status"]
    assert lines[1].split() == ["borned1", "2", "0", "PASS"]


def test_run_rejects_unknown_suite():
    with pytest.raises(KeyError):
        selftest.run(["nope"], out=io.StringIO())


def test_mutated_constant_is_caught(monkeypatch):
    monkeypatch.setattr(core_math, "RHO0", core_math.RHO0 * (1 + 1e-6))
    buf = io.StringIO()
    assert not selftest.run(["constant-chain"], out=buf)
    assert "FAILED [constant-chain] rho0 matches 50-digit value" in buf.getvalue()
