"""RIC upper bounds, SRSR phase-transition thresholds and related constants.

Two routes turn a deviation rate W into bounds on the restricted isometry
constants of an n x p matrix with r = rhobar * n columns per support:

* ``eigen``: W controls the extreme eigenvalues of the r x r Gram matrix;
* ``singular``: W controls the extreme singular values of the n x r block.

The thresholds ``psi0_*`` give the smallest delta = n/p for which
gamma(2s) < GAMMA0 holds with overwhelming probability at sparsity
rho = s/n. Thresholds above 1 mean no admissible delta exists; they are
returned unclamped.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core_math import GAMMA0, RHO0, SQRT41, TAU0
from .errors import DegenerateError, DomainError, UnsupportedModelError
from .rates import GrowthPoint, RateKind, RateModel, t_zero, union_level

SQRT_2RHO0 = math.sqrt(2.0 * RHO0)


class Route(str, enum.Enum):
    EIGEN = "eigen"
    SINGULAR = "singular"


@dataclass(frozen=True)
class RicPair:
    """Asymmetric restricted isometry constants (c_min, c_max)."""

    c_min: float
    c_max: float

    def __post_init__(self):
        if not (self.c_min >= 0.0 and self.c_max >= 0.0):
            raise DomainError(f"RICs must be nonnegative, got {self}")

    @property
    def gamma(self) -> float:
        return gamma_of(self)


@dataclass(frozen=True)
class RicBoundReport:
    t0: float
    psi_min: float
    psi_max: float
    route: Route
    model: RateModel
    point: GrowthPoint

    @property
    def admissible(self) -> bool:
        return self.point.in_theorem_domain


def gamma_of(ric: RicPair) -> float:
    """gamma = (1 + c_max) / (1 - c_min)."""
    if ric.c_min >= 1.0:
        raise DegenerateError(f"gamma undefined for c_min={ric.c_min!r} >= 1")
    return (1.0 + ric.c_max) / (1.0 - ric.c_min)


def srsr_condition_holds(ric: RicPair) -> bool:
    """True iff c_min < 1 and gamma < (4 + sqrt 41)^2 / 25."""
    if ric.c_min >= 1.0:
        return False
    return gamma_of(ric) < GAMMA0


def srsr_b(ric: RicPair) -> float:
    """Upper bound b = (c_min + c_max) / (2 sqrt((1 - c_min)(1 + c_max))).

    It is the maximum over t in [-c_min, c_max] of
    sqrt((c_max - t)(c_min + t)) / (1 + t).
    """
    if ric.c_min >= 1.0:
        raise DegenerateError(f"b undefined for c_min={ric.c_min!r} >= 1")
    return (ric.c_min + ric.c_max) / (2.0 * math.sqrt((1.0 - ric.c_min) * (1.0 + ric.c_max)))


def srsr_kappa(ric: RicPair) -> float:
    """Null-space-property constant kappa = 4b / (4 - b); kappa < 1 gives SRSR."""
    b = srsr_b(ric)
    if b >= 4.0:
        raise DegenerateError(f"kappa undefined for b={b!r} >= 4")
    return 4.0 * b / (4.0 - b)


def psi_bounds_eigen(model: RateModel, point: GrowthPoint) -> RicBoundReport:
    t0 = t_zero(model, point)
    sq = math.sqrt(point.rhobar)
    return RicBoundReport(
        t0=t0,
        psi_min=sq * (2.0 - sq) + t0,
        psi_max=sq * (2.0 + sq) + t0,
        route=Route.EIGEN,
        model=model,
        point=point,
    )


def psi_bounds_singular(model: RateModel, point: GrowthPoint) -> RicBoundReport:
    t0 = t_zero(model, point)
    a = math.sqrt(point.rhobar) + t0
    # sigma_min >= 1 - a carries no information once a >= 1, leaving only c_min <= 1
    return RicBoundReport(
        t0=t0,
        psi_min=a * (2.0 - a) if a < 1.0 else 1.0,
        psi_max=a * (2.0 + a),
        route=Route.SINGULAR,
        model=model,
        point=point,
    )


def psi_bounds(model: RateModel, point: GrowthPoint, route: Route | str) -> RicBoundReport:
    if Route(route) is Route.EIGEN:
        return psi_bounds_eigen(model, point)
    return psi_bounds_singular(model, point)


def _check_rho(rho):
    if not 0.0 < rho < RHO0:
        raise DomainError(f"rho must lie in (0, rho0={RHO0:.6f}), got {rho!r}")


def t_star_eigen(rho: float) -> float:
    """Deviation budget 2 tau0 (sqrt rho - sqrt rho0)(sqrt rho - 1/(2 sqrt rho0))."""
    sr0 = math.sqrt(RHO0)
    sr = math.sqrt(rho)
    return 2.0 * TAU0 * (sr - sr0) * (sr - 1.0 / (2.0 * sr0))


def t_star_eigen_expanded(rho: float) -> float:
    """Same quantity as :func:`t_star_eigen`, written as (8/sqrt41) rho - 2 sqrt2 sqrt rho + 4/sqrt41."""
    return 8.0 / SQRT41 * rho - 2.0 * math.sqrt(2.0) * math.sqrt(rho) + 4.0 / SQRT41


def t_star_singular(rho: float) -> float:
    return SQRT_2RHO0 - math.sqrt(2.0 * rho)


def log_psi0_eigen(rho: float, model: RateModel) -> float:
    _check_rho(rho)
    w = model.rate(2.0 * rho, t_star_eigen(rho))
    return -math.log(2.0 * rho) + 1.0 - w / (2.0 * rho)


def log_psi0_singular(rho: float, model: RateModel) -> float:
    _check_rho(rho)
    w = model.rate(2.0 * rho, t_star_singular(rho))
    return -math.log(2.0 * rho) + 1.0 - w / (2.0 * rho)


def psi0_eigen(rho: float, model: RateModel) -> float:
    """Threshold on delta from eigenvalue deviations (may underflow to 0 for tiny rho)."""
    return math.exp(log_psi0_eigen(rho, model))


def psi0_singular(rho: float, model: RateModel) -> float:
    """Threshold on delta from singular-value deviations."""
    return math.exp(log_psi0_singular(rho, model))


def psi0(rho: float, model: RateModel, route: Route | str) -> float:
    if Route(route) is Route.EIGEN:
        return psi0_eigen(rho, model)
    return psi0_singular(rho, model)


def log_gaussian_srsr_curve(rho: float) -> float:
    _check_rho(rho)
    gap = math.sqrt((33.0 - 5.0 * SQRT41) / 8.0) - math.sqrt(2.0 * rho)
    return -math.log(2.0 * rho) + 1.0 - gap * gap / (4.0 * rho)


def gaussian_srsr_curve(rho: float) -> float:
    """Explicit Gaussian SRSR threshold on delta at sparsity rho = s/n.

    delta > exp[1 - (sqrt((33 - 5 sqrt 41)/8) - sqrt(2 rho))^2 / (4 rho)] / (2 rho)
    """
    return math.exp(log_gaussian_srsr_curve(rho))


def log_small_rho_condition(rho: float, model: RateModel) -> float:
    _check_rho(rho)
    lead = -math.log(2.0 * rho)
    if model.kind is RateKind.DS:
        return lead - RHO0 / (2.0 * rho)
    if model.kind is RateKind.LR:
        return lead - TAU0 / (model.c_lr * math.sqrt(2.0 * rho))
    if model.kind is RateKind.FS:
        return lead - abs(math.log(rho)) ** 1.5 / (2.0 ** 1.5 * model.c_fs)
    raise UnsupportedModelError("no small-rho condition is available for the TW model")


def small_rho_conditions(rho: float, model: RateModel) -> float:
    """Leading-order small-rho approximation of the threshold on delta."""
    return math.exp(log_small_rho_condition(rho, model))


def regime_a_psi_max(rhobar: float, delta: float, model: RateModel) -> float:
    """Leading-order Psi_max as rhobar -> 0 with delta fixed (o(.) terms dropped)."""
    if not 0.0 < rhobar < 1.0:
        raise DomainError(f"rhobar must lie in (0, 1), got {rhobar!r}")
    if not 0.0 < delta < 1.0:
        raise DomainError(f"delta must lie in (0, 1), got {delta!r}")
    sq = math.sqrt(rhobar)
    ell = abs(math.log(rhobar))
    if model.kind is RateKind.DS:
        return (2.0 * math.sqrt(2.0) * math.sqrt(rhobar * ell) + 2.0 * sq
                + math.sqrt(2.0) * (1.0 - math.log(delta)) * math.sqrt(rhobar / ell))
    if model.kind is RateKind.LR:
        c = model.c_lr
        return c * sq * ell + (2.0 + c * (1.0 - math.log(delta))) * sq
    if model.kind is RateKind.FS:
        return 2.0 * sq * math.exp(model.c_fs ** (2.0 / 3.0) * ell ** (2.0 / 3.0))
    raise UnsupportedModelError("no regime (a) asymptotic is available for the TW model")


def d2_exponent(model: RateModel, rhobar: float, delta: float, eps: float) -> float:
    """Exponent D2 = [W(rhobar, t0 + eps) - W(rhobar, t0)] / 2."""
    if not eps > 0.0:
        raise DomainError(f"eps must be > 0, got {eps!r}")
    point = GrowthPoint(delta, rhobar)
    t0 = t_zero(model, point)
    return 0.5 * (model.rate(rhobar, t0 + eps) - model.rate(rhobar, t0))


def phase_curve(model: RateModel, route: Route | str = Route.SINGULAR, points: int = 512,
                rho_min: float = 1e-6, rho_max: float | None = None) -> list[tuple[float, float, bool]]:
    """Thresholds on a logarithmic rho grid: rows of (rho, delta_threshold, admissible)."""
    if rho_max is None:
        rho_max = RHO0 * (1.0 - 1e-9)
    if points < 1 or not 0.0 < rho_min <= rho_max < RHO0:
        raise DomainError(f"bad grid: points={points}, rho in [{rho_min}, {rho_max}]")
    grid = np.geomspace(rho_min, rho_max, points) if points > 1 else np.array([rho_min])
    rows = []
    for rho in grid.tolist():
        thr = psi0(rho, model, route)
        rows.append((rho, thr, thr < 1.0))
    return rows
