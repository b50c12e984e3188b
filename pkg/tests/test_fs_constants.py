import math
import warnings

import numpy as np
import pytest

from riclab.errors import DomainError
from riclab.fs_constants import (DEFAULT, FsConstants, c_fs_from_c_rad, d1_bound, fs_moderate_bound, fs_tail_bound,
                                 log_d1_bound, path_bound, to_linear, trace_bound_delta, v_rad,
                                 verify_constant_chain)
from riclab.rates import rate_ds, rate_fs


def test_d1_bound_values():
    assert d1_bound(1) == pytest.approx(8.31)
    assert d1_bound(2) == pytest.approx(1264.5275420772772, rel=1e-13)
    vals = [d1_bound(s) for s in range(1, 40)]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    # the two evaluation paths meet at the switch
    assert math.log(d1_bound(20)) == pytest.approx(log_d1_bound(20), rel=1e-13)
    with pytest.raises(DomainError):
        d1_bound(0)


def test_path_bound_values():
    # ln(160.4 * 54 * exp(13.3 * 2 / sqrt 54)), 50-digit value
    assert path_bound(1, 54, 54) == pytest.approx(12.686456250776274, rel=1e-13)
    with pytest.raises(DomainError):
        path_bound(1, 60, 54)
    with pytest.raises(DomainError):
        path_bound(0, 54, 54)


def test_path_bound_doubling():
    m, n_cols = 100, 400
    for n in (10, 50, 200):
        diff = path_bound(2 * n, m, n_cols) - path_bound(n, m, n_cols)
        lead = n * 0.5 * math.log(m * n_cols)
        extra = diff - lead - math.log(2)
        expected = DEFAULT.c_sigma * (1 + math.sqrt(m / n_cols)) * (2 ** 1.5 - 1) * n ** 1.5 / math.sqrt(m)
        assert extra == pytest.approx(expected, rel=1e-10)


def test_trace_bound_values():
    assert trace_bound_delta(1, 54, 108) == pytest.approx(2434.6896302561, rel=1e-12)
    vals = [trace_bound_delta(m, 54, 108) for m in range(1, 30)]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    with pytest.raises(DomainError):
        trace_bound_delta(1, 54, 54)
    with pytest.raises(DomainError):
        trace_bound_delta(1, 53, 108)


def test_evaluators_finite_at_large_sizes():
    assert math.isfinite(trace_bound_delta(10 ** 4, 10 ** 4 - 1, 10 ** 4))
    assert math.isfinite(path_bound(10 ** 4, 10 ** 4, 10 ** 4))
    assert math.isfinite(log_d1_bound(10 ** 4))
    assert to_linear(1e4) is None


def test_fs_tail_bound_example():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        with pytest.raises(UserWarning):
            fs_tail_bound(54, 540, 5.0)
    bound, log_bound = fs_tail_bound(54, 540, 5.0, warn=False)
    assert -540 * rate_fs(0.1, 5.0, 837) == pytest.approx(-0.12041685810953899, rel=1e-12)
    assert log_bound == pytest.approx(5.4526740868098988, rel=1e-12)
    assert bound == pytest.approx(math.exp(log_bound)) and bound > 1.0


def test_fs_tail_bound_small_eps_limit():
    # prefactor W0 -> c0 exp(0), so the bound tends to c0 M / (1 - rho)
    for c0 in (1.0, 2.0):
        bound, _ = fs_tail_bound(54, 540, 1e-14, c0=c0, warn=False)
        assert bound == pytest.approx(c0 * 54 / 0.9, rel=1e-5)


def test_fs_tail_exponential_factor_decreasing():
    eps = np.geomspace(1e-3, 50, 50)
    factors = [math.exp(-540 * rate_fs(0.1, e, 837)) for e in eps]
    assert np.all(np.diff(factors) < 0)


def test_fs_domain_errors():
    with pytest.raises(DomainError):
        fs_tail_bound(54, 54, 1.0, warn=False)
    with pytest.raises(DomainError):
        fs_tail_bound(40, 540, 1.0, warn=False)
    with pytest.raises(DomainError):
        fs_tail_bound(54, 540, 0.0, warn=False)
    with pytest.raises(DomainError):
        fs_tail_bound(54, 540, 1.0, c0=0.0, warn=False)


def test_fs_exponent_weaker_than_ds():
    assert 1000 * rate_fs(0.1, 0.3, 837) <= 1000 * rate_ds(0.1, 0.3)


def test_moderate_bound():
    # -216 * 0.25^(1/4) * 0.4^(3/2) / (3300 * 1.5^2)
    assert fs_moderate_bound(54, 216, 0.4, 3300.0) == pytest.approx(-0.0052039400203631469, rel=1e-12)
    with pytest.raises(DomainError):
        fs_moderate_bound(54, 216, 0.4, 3242.0)
    with pytest.raises(DomainError):
        fs_moderate_bound(54, 216, 0.5, 3300.0)


def test_derived_constants():
    assert c_fs_from_c_rad() == pytest.approx(837.0559457109184, rel=1e-12)
    assert abs(c_fs_from_c_rad() - 837) / 837 < 1e-4
    assert v_rad() == pytest.approx(3242.0, rel=1e-3)


def test_constant_chain_report():
    rep = verify_constant_chain()
    assert rep["passed"]
    assert len(rep["relations"]) == 7
    (err,) = rep["errata"]
    assert err["detected"]
    assert err["lhs"] == pytest.approx(355.7 * 53.8 ** 2)
    assert rep["constants"]["c_rad"] == 830415.0


def test_constant_chain_detects_a_bad_constant():
    rep = verify_constant_chain(FsConstants(c_rad=900000.0))
    assert not rep["passed"]
