import math

import pytest
from hypothesis import given, strategies as st

from riclab import oracles
from riclab.core_math import (CONSTANTS, GAMMA0, RHO0, TAU0, binomial_envelope_theta,
                              binomial_log_bound_check, log_binomial, shannon_entropy, stirling_theta)
from riclab.errors import DomainError


def test_constants_against_50_digit_values():
    ref = oracles.mp_constants()
    assert RHO0 == pytest.approx(float(ref["rho0"]), rel=1e-15)
    assert TAU0 == pytest.approx(float(ref["tau0"]), rel=1e-15)
    assert GAMMA0 == pytest.approx(float(ref["gamma0"]), rel=1e-15)
    assert CONSTANTS.sqrt_2rho0 == pytest.approx(0.3508, abs=5e-5)


def test_gamma0_is_the_symmetric_threshold_ratio():
    assert (1 + TAU0) / (1 - TAU0) == pytest.approx(GAMMA0, rel=1e-14)


@pytest.mark.parametrize("t, expected", [
    (0.5, math.log(2)),
    (0.02, 0.098039113279731980612),  # 50-digit mpmath value
])
def test_entropy_values(t, expected):
    assert shannon_entropy(t) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("t", [0.0, 1.0, -0.1, 1.5, float("nan")])
def test_entropy_domain(t):
    with pytest.raises(DomainError):
        shannon_entropy(t)


@given(st.floats(min_value=1e-9, max_value=1 - 1e-9))
def test_entropy_symmetric_and_bounded(t):
    h = shannon_entropy(t)
    assert 0.0 < h <= math.log(2) + 1e-15
    assert h == pytest.approx(shannon_entropy(1.0 - t), rel=1e-6, abs=1e-12)


@pytest.mark.parametrize("p, r, expected", [
    (2, 0, 0.0),
    (4, 2, math.log(6)),
    (200, 4, 17.985039120357107196),  # ln 64684950
])
def test_log_binomial_values(p, r, expected):
    assert log_binomial(p, r) == pytest.approx(expected, abs=1e-12)


@given(st.integers(min_value=0, max_value=3000), st.data())
def test_log_binomial_matches_exact_integer(p, data):
    r = data.draw(st.integers(min_value=0, max_value=p))
    expected = oracles.exact_log_binomial(p, r)
    assert log_binomial(p, r) == pytest.approx(expected, rel=1e-12, abs=1e-12)


def test_log_binomial_domain():
    with pytest.raises(DomainError):
        log_binomial(3, 4)


def test_envelope_theta_value_and_limit():
    # 50-digit value; tends to e^{1/4}/sqrt(2 pi) ~ 0.512
    assert binomial_envelope_theta(100, 2) == pytest.approx(0.5105313384160917, rel=1e-13)
    assert binomial_envelope_theta(10 ** 6, 5 * 10 ** 5) == pytest.approx(
        math.exp(0.25) / math.sqrt(2 * math.pi), rel=1e-4)
    assert math.comb(100, 2) <= binomial_envelope_theta(100, 2) * math.exp(100 * shannon_entropy(0.02))


@pytest.mark.parametrize("p, r", [(5, 5), (5, 0), (1, 1)])
def test_envelope_domain(p, r):
    with pytest.raises(DomainError):
        binomial_envelope_theta(p, r)


@pytest.mark.parametrize("z", [1e-3, 0.5, 1.0, 7.9, 8.0, 10.0, 1e3, 1e6])
def test_stirling_theta_matches_mpmath(z):
    assert stirling_theta(z) == pytest.approx(oracles.mp_stirling_theta(z), abs=1e-10)


def test_stirling_theta_at_one():
    # Gamma(2) = 1 and sqrt(2 pi)/e ~ 0.92214
    assert stirling_theta(1.0) == pytest.approx(0.9727376015439271, abs=1e-12)


@pytest.mark.parametrize("z", [0.0, -1.0])
def test_stirling_domain(z):
    with pytest.raises(DomainError):
        stirling_theta(z)


def test_borned1_first_pair():
    (lhs1, rhs1), (lhs2, rhs2) = binomial_log_bound_check(1, 1)
    assert lhs1 == pytest.approx(math.log(0.25), abs=1e-15)
    assert rhs1 == pytest.approx(4.3679, abs=1e-12)
    assert lhs1 <= rhs1 and lhs2 <= rhs2


def test_borned1_diagonal():
    for m in range(2, 51):
        (lhs1, rhs1), _ = binomial_log_bound_check(m, m)
        assert lhs1 == pytest.approx(math.log(m / 4 ** m), abs=1e-10)
        assert lhs1 <= rhs1


def test_borned1_domain():
    with pytest.raises(DomainError):
        binomial_log_bound_check(3, 4)
    with pytest.raises(DomainError):
        binomial_log_bound_check(2, 0)
