"""Scalar building blocks: entropy, binomial envelopes, Stirling, constants.

Everything here is a pure function of float/int arguments. Logarithms are
natural throughout, so entropies are in nats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

SQRT41 = math.sqrt(41.0)

#: Sparsity budget rho0 = (33 - 5*sqrt(41))/16 ~ 0.0615.
RHO0 = (33.0 - 5.0 * SQRT41) / 16.0
#: Symmetric RIP threshold tau0 = 4/sqrt(41) ~ 0.6247.
TAU0 = 4.0 / SQRT41
#: Threshold on gamma = (1+c_max)/(1-c_min): (4+sqrt(41))^2/25 ~ 4.329.
GAMMA0 = (4.0 + SQRT41) ** 2 / 25.0

# below this, lgamma differences lose digits to cancellation
_STIRLING_SERIES_CUTOFF = 8.0
_DIRECT_BINOMIAL_TERMS = 64


@dataclass(frozen=True)
class UniversalConstants:
    rho0: float = RHO0
    tau0: float = TAU0
    gamma0: float = GAMMA0

    @property
    def sqrt_2rho0(self) -> float:
        # printed as "sqrt(rho0) ~ 0.3508" in the source, which is sqrt(2*rho0)
        return math.sqrt(2.0 * self.rho0)


CONSTANTS = UniversalConstants()


def shannon_entropy(t: float) -> float:
    """Binary Shannon entropy ``-t ln t - (1-t) ln(1-t)`` in nats, for 0 < t < 1."""
    if not 0.0 < t < 1.0:
        raise DomainError(f"entropy needs 0 < t < 1, got {t!r}")
    return -t * math.log(t) - (1.0 - t) * math.log1p(-t)


def log_binomial(p: int, r: int) -> float:
    """Natural log of C(p, r).

    Small ``min(r, p-r)`` is summed term by term; otherwise log-gamma is used.
    """
    if r < 0 or p < 0 or r > p:
        raise DomainError(f"need 0 <= r <= p, got p={p}, r={r}")
    k = min(r, p - r)
    if k == 0:
        return 0.0
    if k <= _DIRECT_BINOMIAL_TERMS:
        return math.fsum(math.log((p - k + i) / i) for i in range(1, k + 1))
    return math.lgamma(p + 1) - math.lgamma(k + 1) - math.lgamma(p - k + 1)


def binomial_envelope_theta(p: int, r: int) -> float:
    """Prefactor Theta with C(p, r) <= Theta * exp(p * H(r/p)).

    Theta^2 = e^{1/2} / (2 pi [r (1 - r/p)]^{1/p}); it tends to
    e^{1/4}/sqrt(2 pi) ~ 0.512 for large p.
    """
    if not 1 <= r < p:
        raise DomainError(f"need 1 <= r < p, got p={p}, r={r}")
    base = r * (1.0 - r / p)
    log_theta_sq = 0.5 - math.log(2.0 * math.pi) - math.log(base) / p
    return math.exp(0.5 * log_theta_sq)


def stirling_theta(z: float) -> float:
    """The theta in Gamma(z+1) = sqrt(2 pi z) (z/e)^z exp(theta/(12 z)).

    Returns ``12 z ln[Gamma(z+1) / (sqrt(2 pi z) (z/e)^z)]``, which lies in (0, 1).
    For large z the log-gamma difference cancels catastrophically, so the
    asymptotic Stirling series is used there instead.
    """
    if not z > 0.0:
        raise DomainError(f"stirling_theta needs z > 0, got {z!r}")
    if z < _STIRLING_SERIES_CUTOFF:
        rest = math.lgamma(z + 1.0) - (0.5 * math.log(2.0 * math.pi * z) + z * math.log(z) - z)
        return 12.0 * z * rest
    w = 1.0 / (z * z)
    # 12 z * sum_k B_2k / (2k (2k-1) z^{2k-1}), k = 1..6
    return 1.0 + w * (-1.0 / 30.0 + w * (1.0 / 105.0 + w * (-1.0 / 140.0
        + w * (1.0 / 99.0 + w * (-691.0 * 12.0 / 360360.0)))))


def binomial_log_bound_check(m: int, n: int) -> tuple[tuple[float, float], tuple[float, float]]:
    """Both sides of the two central-binomial log bounds, for 1 <= n <= m.

    Returns ``((lhs1, rhs1), (lhs2, rhs2))`` with

        lhs1 = ln[n / 4^m * C(2m, m-n)],         rhs1 = 5 - 0.6321 n^2/m
        lhs2 = ln[(n+1/2) / 4^m * C(2m+1, m-n)], rhs2 = 2 - 0.6555 n^2/m

    The caller decides what to do with ``lhs <= rhs``.
    """
    if not 1 <= n <= m:
        raise DomainError(f"need 1 <= n <= m, got m={m}, n={n}")
    ln4m = 2 * m * math.log(2.0)
    lhs1 = math.log(n) + log_binomial(2 * m, m - n) - ln4m
    lhs2 = math.log(n + 0.5) + log_binomial(2 * m + 1, m - n) - ln4m
    ratio = n * n / m
    return (lhs1, 5.0 - 0.6321 * ratio), (lhs2, 2.0 - 0.6555 * ratio)
