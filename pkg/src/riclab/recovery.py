"""l1-minimization recovery with certified optimality, and SRSR error statistics.

:func:`l1_solve` solves

    minimize ||x||_1  subject to  ||y - M x||_2 <= eta

with ADMM, then polishes the iterate on its support. It certifies the result
with an explicit dual feasible point nu (||M^T nu||_inf <= 1). Weak duality
gives ``objective - dual_value >= objective - OPT``, so the reported gap is an
upper bound on suboptimality whatever the iteration did. eta = 0 is handled
as an equality-constrained problem (basis pursuit).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .errors import DegenerateError, DomainError
from .randmat import Ensemble, draw, empirical_ric_of_matrix, map_trials
from .ric_bounds import RicPair, gamma_of, srsr_condition_holds

EXACT_RTOL = 1e-6


class InfeasibleError(DomainError):
    """No x satisfies ||y - M x||_2 <= eta."""


@dataclass
class RecoveryInstance:
    matrix: np.ndarray
    y: np.ndarray
    eta: float = 0.0
    x0: np.ndarray | None = None
    s: int | None = None

    def __post_init__(self):
        self.matrix = np.atleast_2d(np.asarray(self.matrix, dtype=np.float64))
        self.y = np.asarray(self.y, dtype=np.float64).ravel()
        if self.matrix.shape[0] != self.y.size:
            raise DomainError(f"matrix has {self.matrix.shape[0]} rows but y has {self.y.size} entries")
        if not self.eta >= 0.0:
            raise DomainError(f"eta must be >= 0, got {self.eta!r}")
        if not (np.all(np.isfinite(self.matrix)) and np.all(np.isfinite(self.y))):
            raise DomainError("matrix and y must be finite")
        if self.x0 is not None:
            self.x0 = np.asarray(self.x0, dtype=np.float64).ravel()
            if self.x0.size != self.matrix.shape[1]:
                raise DomainError("x0 has the wrong length")


@dataclass
class RecoveryResult:
    x_hat: np.ndarray
    feasibility_residual: float
    objective: float
    optimality_gap: float
    iterations: int
    converged: bool = True
    dual: np.ndarray | None = field(default=None, repr=False)
    dual_value: float = -math.inf
    subgradient_residual: float = math.inf


def soft_threshold(v, thresh):
    return np.sign(v) * np.maximum(np.abs(v) - thresh, 0.0)


def _project_ball(v, radius):
    nrm = np.linalg.norm(v)
    return v if nrm <= radius else v * (radius / nrm)


class _Certifier:
    """Builds dual certificates and polished primal points for one instance."""

    def __init__(self, inst, tol_feas):
        self.a = inst.matrix
        self.y = inst.y
        self.eta = inst.eta
        self.tol_feas = tol_feas
        self.pinv = np.linalg.pinv(self.a)
        self.full_row_rank = np.linalg.matrix_rank(self.a) == self.a.shape[0]

    def residual(self, x):
        return max(0.0, float(np.linalg.norm(self.y - self.a @ x)) - self.eta)

    def dual_value(self, nu):
        """Return (scaled nu, dual objective) after scaling nu into the feasible set."""
        scale = max(1.0, float(np.max(np.abs(self.a.T @ nu))) if nu.size else 1.0)
        nu = nu / scale
        return nu, float(self.y @ nu) - self.eta * float(np.linalg.norm(nu))

    def restore_feasibility(self, x):
        r = self.y - self.a @ x
        nrm = float(np.linalg.norm(r))
        if nrm <= self.eta or not self.full_row_rank:
            return x
        return x + self.pinv @ (r * (1.0 - self.eta / nrm))

    def polish(self, z, nu_hint):
        """Re-solve on the support of z with signs fixed; returns (x, nu) or None."""
        p = self.a.shape[1]
        support = np.flatnonzero(z)
        if support.size == 0 or support.size > self.a.shape[0]:
            return None
        sub = self.a[:, support]
        sigma = np.sign(z[support])
        try:
            gram_chol = sla.cho_factor(sub.T @ sub)
        except np.linalg.LinAlgError:
            return None
        ginv_sigma = sla.cho_solve(gram_chol, sigma)
        x_ls = sla.cho_solve(gram_chol, sub.T @ self.y)
        if self.eta == 0.0:
            xs = x_ls
            base = sub @ ginv_sigma
            # certificates nu with sub^T nu = sigma: min-norm one, and the hint projected onto that set
            cands = [base]
            if nu_hint is not None:
                cands.append(nu_hint + sub @ sla.cho_solve(gram_chol, sigma - sub.T @ nu_hint))
        else:
            out = self.y - sub @ x_ls
            beta_sq = self.eta ** 2 - float(out @ out)
            q = float(sigma @ ginv_sigma)
            if beta_sq <= 0.0 or q <= 0.0:
                return None
            beta = math.sqrt(beta_sq)
            xs = x_ls - beta * ginv_sigma / math.sqrt(q)
            cands = [(self.y - sub @ xs) * math.sqrt(q) / beta]
        if np.any(np.sign(xs) != sigma):
            return None
        x = np.zeros(p)
        x[support] = xs
        best = max((self.dual_value(c) for c in cands), key=lambda t: t[1])
        return x, best[0]

    def subgradient_residual(self, x, nu):
        g = self.a.T @ nu
        on = x != 0
        res = np.where(on, np.abs(g - np.sign(x)), np.maximum(np.abs(g) - 1.0, 0.0))
        return float(res.max()) if res.size else 0.0


def l1_solve(inst: RecoveryInstance, tol_feas: float = 1e-8, tol_opt: float = 1e-6,
             max_iter: int = 50000, check_every: int = 25) -> RecoveryResult:
    """Solve min ||x||_1 s.t. ||y - M x||_2 <= eta with a certified gap.

    Stops as soon as a candidate is found with feasibility residual
    <= ``tol_feas`` and certified gap <= ``tol_opt``. Otherwise it returns the
    best candidate seen, with ``converged=False``.
    """
    a, y, eta = inst.matrix, inst.y, inst.eta
    n, p = a.shape
    cert = _Certifier(inst, tol_feas)

    dist = float(np.linalg.norm(y - a @ (cert.pinv @ y)))
    if dist > eta + tol_feas:
        raise InfeasibleError(f"dist(y, range(M)) = {dist:.3g} exceeds eta = {eta:.3g}")

    if float(np.linalg.norm(y)) <= eta:
        x = np.zeros(p)
        nu = np.zeros(n)
        return RecoveryResult(x, 0.0, 0.0, 0.0, 0, True, nu, 0.0, cert.subgradient_residual(x, nu))

    best = None

    def consider(x, nu, it):
        nonlocal best
        nu, dval = cert.dual_value(nu)
        obj = float(np.abs(x).sum())
        res = cert.residual(x)
        cand = RecoveryResult(x, res, obj, max(0.0, obj - dval), it, False, nu, dval,
                              cert.subgradient_residual(x, nu))
        ok = res <= tol_feas and cand.optimality_gap <= tol_opt
        cand.converged = ok
        if best is None or (ok and not best.converged) or (
                ok == best.converged and (res, cand.optimality_gap) < (best.feasibility_residual, best.optimality_gap)):
            best = cand
        return ok

    x_scale = max(float(np.max(np.abs(cert.pinv @ y))), np.finfo(float).tiny)
    pen = 1.0 / x_scale
    z = np.zeros(p)
    u = np.zeros(p)
    if eta == 0.0:
        x_ls = cert.pinv @ y

        def x_step(z, u, u2):
            v = z - u
            return v - cert.pinv @ (a @ v) + x_ls
    else:
        chol = sla.cho_factor(np.eye(n) + a @ a.T)

        def x_step(z, u, w):
            rhs = (z - u) + a.T @ (y + w)
            return rhs - a.T @ sla.cho_solve(chol, a @ rhs)
    w = np.zeros(n)   # eta > 0: holds z2 - u2, the target for M x - y
    z2 = np.zeros(n)
    u2 = np.zeros(n)

    for it in range(1, max_iter + 1):
        x = x_step(z, u, w)
        z_old = z
        z = soft_threshold(x + u, 1.0 / pen)
        u = u + x - z
        if eta > 0.0:
            ax = a @ x - y
            z2_old = z2
            z2 = _project_ball(ax + u2, eta)
            u2 = u2 + ax - z2
            w = z2 - u2
        if it % check_every == 0 or it == max_iter:
            if eta == 0.0:
                nu_hint = cert.pinv.T @ (pen * u)
            else:
                nu_hint = -pen * u2
            if consider(cert.restore_feasibility(x), nu_hint, it):
                break
            polished = cert.polish(z, nu_hint)
            if polished is not None and consider(polished[0], polished[1], it):
                break
            # residual balancing on the consensus constraint
            r_pri = np.linalg.norm(x - z)
            r_dual = pen * np.linalg.norm(z - z_old)
            if eta > 0.0:
                r_pri = math.hypot(r_pri, np.linalg.norm(ax - z2))
                r_dual = math.hypot(r_dual, pen * np.linalg.norm(a.T @ (z2 - z2_old)))
            if r_pri > 10.0 * r_dual:
                pen *= 2.0
                u /= 2.0
                u2 /= 2.0
                w = z2 - u2
            elif r_dual > 10.0 * r_pri:
                pen /= 2.0
                u *= 2.0
                u2 *= 2.0
                w = z2 - u2
    return best


def sigma_s(x, s: int) -> float:
    """Best s-term l1 approximation error: sum of the p - s smallest |x_i|."""
    x = np.abs(np.asarray(x, dtype=np.float64).ravel())
    if not 0 <= s <= x.size:
        raise DomainError(f"need 0 <= s <= p={x.size}, got s={s}")
    if s == x.size:
        return 0.0
    return float(np.sort(x)[: x.size - s].sum())


@dataclass(frozen=True)
class SrsrRatios:
    r1: float
    r2: float
    exact_recovery: bool


def is_exact(x0, x_hat, rtol: float = EXACT_RTOL) -> bool:
    x0 = np.asarray(x0, dtype=np.float64)
    return float(np.linalg.norm(x0 - x_hat)) <= rtol * max(1.0, float(np.linalg.norm(x0)))


def srsr_errors(x0, x_hat, s: int, eta: float, rtol: float = EXACT_RTOL) -> SrsrRatios:
    """Observed SRSR ratios.

    r1 = ||x0 - x_hat||_1 / (sigma_s(x0) + sqrt(s) eta) and
    r2 = ||x0 - x_hat||_2 / (sigma_s(x0)/sqrt(s) + eta). A zero denominator
    gives 0 when recovery is exact and +inf otherwise.
    """
    if s < 1:
        raise DomainError(f"s must be >= 1, got {s}")
    x0 = np.asarray(x0, dtype=np.float64).ravel()
    x_hat = np.asarray(x_hat, dtype=np.float64).ravel()
    diff = x0 - x_hat
    exact = is_exact(x0, x_hat, rtol)
    sig = sigma_s(x0, s)
    root_s = math.sqrt(s)

    def ratio(num, den):
        if den > 0.0:
            return num / den
        return 0.0 if exact else math.inf

    return SrsrRatios(
        r1=ratio(float(np.abs(diff).sum()), sig + root_s * eta),
        r2=ratio(float(np.linalg.norm(diff)), sig / root_s + eta),
        exact_recovery=exact,
    )


def srsr_experiment(ensemble: Ensemble, n: int, p: int, s: int, eta: float = 0.0,
                    noise_level: float = 0.0, trials: int = 10, signals_per_trial: int = 1,
                    ric_check: bool = False, matrix_factory=None, threads: int | None = None,
                    tol_feas: float = 1e-8, tol_opt: float = 1e-6, max_iter: int = 50000) -> dict:
    """Plant s-sparse signals in random M = X/sqrt(n) and recover them by l1 minimization.

    Trial i draws from stream i of ``ensemble``. With ``ric_check`` the exact
    RICs of order 2s are computed over all supports and the gamma condition is
    recorded next to each trial's recovery outcome. ``matrix_factory(rng)``
    overrides the random matrix (e.g. an identity).
    """
    if not (1 <= s <= p and n >= 1):
        raise DomainError(f"need n >= 1 and 1 <= s <= p, got n={n}, p={p}, s={s}")
    if trials < 1 or signals_per_trial < 1:
        raise DomainError("trials and signals_per_trial must be >= 1")

    def one(i):
        rng = ensemble.rng(i)
        if matrix_factory is None:
            mat = draw(rng, ensemble.kind, n, p) / math.sqrt(n)
        else:
            mat = np.asarray(matrix_factory(rng), dtype=np.float64)
        rec = {"trial": i}
        if ric_check:
            ric = empirical_ric_of_matrix(mat, min(2 * s, p), "exhaustive")
            pair = RicPair(ric.c_min_hat, ric.c_max_hat)
            try:
                rec["gamma"] = gamma_of(pair)
            except DegenerateError:
                rec["gamma"] = math.inf
            rec["c_min"], rec["c_max"] = ric.c_min_hat, ric.c_max_hat
            rec["condition_holds"] = srsr_condition_holds(pair)
        signals = []
        for _ in range(signals_per_trial):
            x0 = np.zeros(p)
            support = rng.choice(p, size=s, replace=False)
            amp = rng.standard_normal(s)
            x0[support] = amp + np.sign(amp) * 0.1  # keep entries away from 0
            e = noise_level * rng.standard_normal(n)
            rescaled = bool(np.linalg.norm(e) > eta)
            if rescaled:
                e = _project_ball(e, eta)
            res = l1_solve(RecoveryInstance(mat, mat @ x0 + e, eta), tol_feas, tol_opt, max_iter)
            ratios = srsr_errors(x0, res.x_hat, s, eta)
            signals.append({
                "exact": ratios.exact_recovery, "r1": ratios.r1, "r2": ratios.r2,
                "noise_rescaled": rescaled, "feasibility_residual": res.feasibility_residual,
                "optimality_gap": res.optimality_gap, "converged": res.converged,
            })
        rec["signals"] = signals
        return rec

    records = map_trials(one, trials, threads)
    flat = [sig for rec in records for sig in rec["signals"]]
    summary = {
        "n": n, "p": p, "s": s, "eta": eta, "noise_level": noise_level,
        "trials": trials, "signals_per_trial": signals_per_trial,
        "ensemble": ensemble.kind.value, "seed": ensemble.seed,
        "exact_recovery_rate": sum(f["exact"] for f in flat) / len(flat),
        "max_r1": max(f["r1"] for f in flat),
        "max_r2": max(f["r2"] for f in flat),
        "noise_rescaled": sum(f["noise_rescaled"] for f in flat),
        "all_converged": all(f["converged"] for f in flat),
    }
    if ric_check:
        passing = [rec for rec in records if rec["condition_holds"]]
        summary["condition_pass_trials"] = len(passing)
        summary["condition_pass_all_exact"] = all(sig["exact"] for rec in passing for sig in rec["signals"])
    summary["records"] = records
    return summary
