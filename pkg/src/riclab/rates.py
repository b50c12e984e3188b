"""Deviation rate functions W(rhobar, t) and their closed-form inverses.

Four models are provided:

* ``TW``: the conjectured Tracy-Widom-shaped rate (three branches). It is a
  hypothesis evaluator only; no deviation inequality is claimed for it.
* ``DS``: t^2/2, the Gaussian concentration rate for extreme singular values.
* ``LR``: the Gaussian largest-eigenvalue rate, piecewise t^{3/2} / linear.
* ``FS``: the Rademacher rate rhobar [ln(1 + t/(2 sqrt rhobar))]^{3/2} / ....

The LR constant has no published numeric value. It defaults to 1, and that
default is a placeholder, not a proven constant.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .core_math import RHO0, shannon_entropy
from .errors import DomainError, OutOfRangeError


class RateKind(str, enum.Enum):
    TW = "TW"
    DS = "DS"
    LR = "LR"
    FS = "FS"


C_FS_MAX = 837.0


@dataclass(frozen=True)
class RateModel:
    """One deviation rate function together with its tunable constants."""

    kind: RateKind
    c_tw: float = 1.0
    c_lr: float = 1.0
    c_fs: float = C_FS_MAX

    def __post_init__(self):
        kind = self.kind.value if isinstance(self.kind, RateKind) else str(self.kind).upper()
        object.__setattr__(self, "kind", RateKind(kind))
        for name in ("c_tw", "c_lr", "c_fs"):
            value = getattr(self, name)
            if not (value > 0.0 and math.isfinite(value)):
                raise DomainError(f"{name} must be positive and finite, got {value!r}")

    @property
    def guaranteed(self) -> bool:
        """Whether a published deviation inequality backs this model."""
        if self.kind is RateKind.TW:
            return False
        if self.kind is RateKind.FS:
            return self.c_fs <= C_FS_MAX
        return True

    def rate(self, rhobar: float, t: float) -> float:
        if self.kind is RateKind.DS:
            return rate_ds(rhobar, t)
        if self.kind is RateKind.LR:
            return rate_lr(rhobar, t, self.c_lr)
        if self.kind is RateKind.FS:
            return rate_fs(rhobar, t, self.c_fs)
        return rate_tw(rhobar, t, self.c_tw)

    def inverse(self, rhobar: float, u: float) -> float:
        if self.kind is RateKind.DS:
            return rate_ds_inv(rhobar, u)
        if self.kind is RateKind.LR:
            return rate_lr_inv(rhobar, u, self.c_lr)
        if self.kind is RateKind.FS:
            return rate_fs_inv(rhobar, u, self.c_fs)
        return rate_tw_inv(rhobar, u, self.c_tw)


@dataclass(frozen=True)
class GrowthPoint:
    """Proportional-growth coordinates: delta = n/p and rhobar = r/n = 2 rho."""

    delta: float
    rhobar: float

    def __post_init__(self):
        if not 0.0 < self.delta < 1.0:
            raise DomainError(f"delta must lie in (0, 1), got {self.delta!r}")
        if not 0.0 < self.rhobar < 1.0:
            raise DomainError(f"rhobar must lie in (0, 1), got {self.rhobar!r}")

    @classmethod
    def from_rho(cls, delta: float, rho: float) -> "GrowthPoint":
        return cls(delta, 2.0 * rho)

    @property
    def rho(self) -> float:
        return 0.5 * self.rhobar

    @property
    def in_theorem_domain(self) -> bool:
        return self.rhobar < 2.0 * RHO0

    def sizes(self, n: int) -> dict:
        """Integer realization (n, p, s, r) at a given number of rows n."""
        p = max(n, int(round(n / self.delta)))
        r = int(math.floor(self.rhobar * n))
        return {"n": n, "p": p, "s": r // 2, "r": r}


def _check_rhobar(rhobar):
    if not 0.0 < rhobar < 1.0:
        raise DomainError(f"rhobar must lie in (0, 1), got {rhobar!r}")


def _check_nonneg(name, value):
    if not value >= 0.0:
        raise DomainError(f"{name} must be >= 0, got {value!r}")


def rate_ds(rhobar: float, t: float) -> float:
    _check_nonneg("t", t)
    return 0.5 * t * t


def rate_ds_inv(rhobar: float, u: float) -> float:
    _check_nonneg("u", u)
    return math.sqrt(2.0 * u)


def _lr_piecewise(rhobar, t, c_lr, edge):
    # edge = 1 + sqrt(rhobar) for the largest eigenvalue, 1 - sqrt(rhobar) for the smallest
    _check_rhobar(rhobar)
    _check_nonneg("t", t)
    sq = math.sqrt(rhobar)
    if t <= sq * edge * edge:
        return rhobar ** 0.25 * t ** 1.5 / (c_lr * edge ** 3)
    return sq * t / (c_lr * edge * edge)


def rate_lr(rhobar: float, t: float, c_lr: float = 1.0) -> float:
    """Largest-eigenvalue Gaussian rate (also used for both tails)."""
    return _lr_piecewise(rhobar, t, c_lr, 1.0 + math.sqrt(rhobar))


def rate_lr_min(rhobar: float, t: float, c_lr: float = 1.0) -> float:
    """Smallest-eigenvalue Gaussian rate; dominates :func:`rate_lr` pointwise."""
    return _lr_piecewise(rhobar, t, c_lr, 1.0 - math.sqrt(rhobar))


def rate_lr_inv(rhobar: float, u: float, c_lr: float = 1.0) -> float:
    _check_rhobar(rhobar)
    _check_nonneg("u", u)
    edge2 = (1.0 + math.sqrt(rhobar)) ** 2
    if u <= rhobar / c_lr:
        return c_lr ** (2.0 / 3.0) * edge2 / rhobar ** (1.0 / 6.0) * u ** (2.0 / 3.0)
    return c_lr * edge2 / math.sqrt(rhobar) * u


def rate_fs(rhobar: float, t: float, c_fs: float = C_FS_MAX) -> float:
    """Rademacher rate; the 3/2 power applies to the logarithm."""
    _check_rhobar(rhobar)
    _check_nonneg("t", t)
    sq = math.sqrt(rhobar)
    return rhobar * math.log1p(t / (2.0 * sq)) ** 1.5 / (c_fs * (1.0 + sq) ** 2)


def rate_fs_inv(rhobar: float, u: float, c_fs: float = C_FS_MAX) -> float:
    _check_rhobar(rhobar)
    _check_nonneg("u", u)
    sq = math.sqrt(rhobar)
    arg = c_fs ** (2.0 / 3.0) * (1.0 + sq) ** (4.0 / 3.0) / rhobar ** (2.0 / 3.0) * u ** (2.0 / 3.0)
    try:
        return 2.0 * sq * math.expm1(arg)
    except OverflowError:
        raise OutOfRangeError(f"FS inverse overflows at u={u!r}, rhobar={rhobar!r}") from None


def rate_tw(rhobar: float, t: float, c_tw: float = 1.0) -> float:
    """Conjectured three-branch rate: t^{3/2}, then t^2 above sqrt(rhobar), then t above 1."""
    _check_rhobar(rhobar)
    _check_nonneg("t", t)
    sq = math.sqrt(rhobar)
    edge2 = (1.0 + sq) ** 2
    if t <= sq:
        core = rhobar ** 0.25 * t ** 1.5
    elif t <= 1.0:
        core = t * t
    else:
        core = t
    return core / (c_tw * edge2)


def rate_tw_inv(rhobar: float, u: float, c_tw: float = 1.0) -> float:
    _check_rhobar(rhobar)
    _check_nonneg("u", u)
    edge2 = (1.0 + math.sqrt(rhobar)) ** 2
    scaled = c_tw * edge2 * u
    if scaled <= rhobar:
        return scaled ** (2.0 / 3.0) / rhobar ** (1.0 / 6.0)
    if scaled <= 1.0:
        return math.sqrt(scaled)
    return scaled


def union_level(point: GrowthPoint) -> float:
    """Combinatorial level H(rhobar * delta) / delta absorbed by the union bound."""
    return shannon_entropy(point.rhobar * point.delta) / point.delta


def t_zero(model: RateModel, point: GrowthPoint) -> float:
    """Deviation level t0 = W^{-1}(rhobar, H(rhobar delta)/delta).

    Raises :class:`OutOfRangeError` when the level cannot be represented.
    """
    t0 = model.inverse(point.rhobar, union_level(point))
    if not math.isfinite(t0):
        raise OutOfRangeError(f"t0 is not finite for {model.kind.value} at {point}")
    return t0
