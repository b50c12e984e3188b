import math

import mpmath
import pytest
from hypothesis import given, strategies as st

from riclab.errors import DomainError, OutOfRangeError
from riclab.rates import (GrowthPoint, RateKind, RateModel, rate_ds, rate_ds_inv, rate_fs, rate_fs_inv,
                          rate_lr, rate_lr_inv, rate_lr_min, rate_tw, rate_tw_inv, t_zero, union_level)

rhobars = st.floats(min_value=1e-6, max_value=0.95)


def test_ds_values():
    assert rate_ds(0.3, 0.0) == 0.0
    assert rate_ds(0.1, 0.2) == pytest.approx(0.02, rel=1e-15)
    assert rate_ds_inv(0.3, 0.0) == 0.0
    assert rate_ds_inv(0.3, 0.196078) == pytest.approx(0.626224, abs=1e-5)
    assert rate_ds_inv(0.3, 2.0) == 2.0


def test_lr_values():
    assert rate_lr(0.04, 0.0, 1.0) == 0.0
    # linear branch: t > 0.2 * 1.44
    assert rate_lr(0.04, 1.0, 1.0) == pytest.approx(0.2 / 1.44, rel=1e-14)
    # t <= 0.2 * 0.64: power branch of the smallest-eigenvalue rate
    assert rate_lr_min(0.04, 0.1, 1.0) == pytest.approx(0.027621358640099512672, rel=1e-13)


def test_lr_continuous_at_breakpoint():
    for rb in (0.01, 0.04, 0.3):
        edge = 1 + math.sqrt(rb)
        tb = math.sqrt(rb) * edge ** 2
        assert rate_lr(rb, tb * (1 - 1e-12)) == pytest.approx(rate_lr(rb, tb * (1 + 1e-12)), rel=1e-9)


def test_fs_values():
    assert rate_fs(0.04, 0.0, 837) == 0.0
    w = rate_fs(0.04, 0.4, 837)
    assert w == pytest.approx(1.9151828002991497e-05, rel=1e-13)
    assert rate_fs_inv(0.04, 0.0, 837) == 0.0
    assert rate_fs_inv(0.04, w, 837) == pytest.approx(0.4, abs=1e-6)
    # the rounded value 1.915e-5 inverts to 0.39996, not 0.4 +- 1e-6
    assert rate_fs_inv(0.04, 1.915e-5, 837) == pytest.approx(0.4, abs=1e-4)


def test_fs_inverse_overflow():
    with pytest.raises(OutOfRangeError):
        rate_fs_inv(0.04, 1.0, 837)


def test_tw_branches():
    rb = 0.04
    e2 = 1.44
    assert rate_tw(rb, 0.0) == 0.0
    assert rate_tw(rb, 0.1) == pytest.approx(rb ** 0.25 * 0.1 ** 1.5 / e2)
    assert rate_tw(rb, 0.5) == pytest.approx(0.25 / e2)
    assert rate_tw(rb, 3.0) == pytest.approx(3.0 / e2)


@pytest.mark.parametrize("fn", [rate_lr, rate_lr_min, rate_fs, rate_tw])
def test_domain_errors(fn):
    with pytest.raises(DomainError):
        fn(0.0, 0.1)
    with pytest.raises(DomainError):
        fn(1.0, 0.1)
    with pytest.raises(DomainError):
        fn(0.5, -0.1)


@pytest.mark.parametrize("kind", list(RateKind))
@given(rb=rhobars, t=st.floats(min_value=1e-8, max_value=20.0))
def test_inverse_of_rate(kind, rb, t):
    model = RateModel(kind)
    u = model.rate(rb, t)
    if u == 0.0:
        return
    assert model.inverse(rb, u) == pytest.approx(t, rel=1e-9)


@pytest.mark.parametrize("kind", list(RateKind))
@given(rb=rhobars, t1=st.floats(min_value=0.0, max_value=20.0), t2=st.floats(min_value=0.0, max_value=20.0))
def test_rates_nondecreasing(kind, rb, t1, t2):
    model = RateModel(kind)
    lo, hi = sorted((t1, t2))
    assert model.rate(rb, lo) <= model.rate(rb, hi)


@given(rb=rhobars, t=st.floats(min_value=0.0, max_value=50.0))
def test_lr_dominance(rb, t):
    assert rate_lr(rb, t) <= rate_lr_min(rb, t)


def test_lr_inverse_scales_with_constant():
    assert rate_lr_inv(0.04, 0.01, 2.0) > rate_lr_inv(0.04, 0.01, 1.0)
    assert rate_tw_inv(0.04, 0.01, 2.0) > rate_tw_inv(0.04, 0.01, 1.0)


def test_model_validation_and_flags():
    assert RateModel("ds").kind is RateKind.DS
    assert RateModel(RateKind.LR).kind is RateKind.LR
    assert not RateModel("TW").guaranteed
    assert RateModel("FS").guaranteed
    assert not RateModel("FS", c_fs=900.0).guaranteed
    with pytest.raises(ValueError):
        RateModel("XX")
    with pytest.raises(DomainError):
        RateModel("LR", c_lr=0.0)


def test_growth_point():
    pt = GrowthPoint.from_rho(0.5, 0.02)
    assert pt.rhobar == 0.04 and pt.rho == 0.02 and pt.in_theorem_domain
    assert not GrowthPoint(0.5, 0.2).in_theorem_domain
    assert GrowthPoint(0.5, 0.04).sizes(100) == {"n": 100, "p": 200, "s": 2, "r": 4}
    with pytest.raises(DomainError):
        GrowthPoint(1.0, 0.1)
    with pytest.raises(DomainError):
        GrowthPoint(0.5, 0.0)


def test_t_zero_ds():
    pt = GrowthPoint(0.5, 0.04)
    assert union_level(pt) == pytest.approx(0.19607822655946396, rel=1e-14)
    # 50-digit value of sqrt(2 H(0.02)/0.5)
    assert t_zero(RateModel("DS"), pt) == pytest.approx(0.62622396402479514378, rel=1e-14)


def test_t_zero_fs_is_huge_and_matches_mpmath():
    mp = mpmath.mp.clone()
    mp.dps = 50
    pt = GrowthPoint(0.5, 0.04)
    level = -mp.mpf("0.02") * mp.log(mp.mpf("0.02")) - mp.mpf("0.98") * mp.log(mp.mpf("0.98"))
    arg = mp.mpf(837) ** (mp.mpf(2) / 3) * mp.mpf("1.2") ** (mp.mpf(4) / 3) * (level / mp.mpf("0.5")) ** (
        mp.mpf(2) / 3) / mp.mpf("0.04") ** (mp.mpf(2) / 3)
    expected = 2 * mp.mpf("0.2") * mp.expm1(arg)
    got = t_zero(RateModel("FS"), pt)
    assert got == pytest.approx(float(expected), rel=1e-12)
    assert got > 1e100
    # monotone in the level: larger delta means a smaller union level here
    assert t_zero(RateModel("FS"), GrowthPoint(0.9, 0.04)) < got


def test_t_zero_out_of_range():
    with pytest.raises(OutOfRangeError):
        t_zero(RateModel("FS", c_fs=1e4), GrowthPoint(0.5, 0.04))
