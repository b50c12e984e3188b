"""Oracle suites: every derived value re-checked against an independent computation.

Each suite returns a list of :class:`Check`. :func:`run` executes the selected
suites and prints one table row per suite plus the name of every failing
invariant.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass

import numpy as np

from . import core_math, oracles
from .errors import DegenerateError, OutOfRangeError
from .fs_constants import verify_constant_chain
from .randmat import empirical_ric_of_matrix, extreme_eigs
from .rates import RateKind, RateModel, rate_lr, rate_lr_min
from .recovery import RecoveryInstance, l1_solve, sigma_s
from .ric_bounds import (RicPair, gaussian_srsr_curve, phase_curve, psi0_singular, srsr_b,
                         srsr_kappa, t_star_eigen, t_star_eigen_expanded)


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


def _rel(a, b):
    return abs(a - b) / abs(b)


def matches_printed(value: float, printed: str) -> bool:
    """True when value is within half a unit of the last printed digit."""
    decimals = len(printed.split(".")[1]) if "." in printed else 0
    return abs(value - float(printed)) <= 0.5 * 10.0 ** -decimals


def suite_constant_chain() -> list[Check]:
    ref = oracles.mp_constants()
    # read through the module so a patched constant is seen
    got = {"rho0": core_math.RHO0, "tau0": core_math.TAU0, "gamma0": core_math.GAMMA0}
    printed = {"rho0": "0.0615", "tau0": "0.6247", "gamma0": "4.329"}
    checks = []
    for key, value in got.items():
        err = _rel(value, float(ref[key]))
        checks.append(Check(f"{key} matches 50-digit value", err < 1e-13, f"rel err {err:.2e}"))
        checks.append(Check(f"{key} agrees with printed {printed[key]}",
                            matches_printed(value, printed[key]), f"{value:.6g}"))
    tau, gam = got["tau0"], got["gamma0"]
    checks.append(Check("(1+tau0)/(1-tau0) = gamma0", _rel((1 + tau) / (1 - tau), gam) < 1e-13))
    chain = verify_constant_chain()
    for rel in chain["relations"]:
        checks.append(Check(rel["relation"], rel["passed"], f"rel err {rel['rel_error']:.2e}"))
    for err in chain["errata"]:
        checks.append(Check("erratum detected: " + err["relation"], err["detected"]))
    return checks


def suite_curve() -> list[Check]:
    rng = np.random.default_rng(20240601)
    ds = RateModel(RateKind.DS)
    rhos = rng.uniform(1e-4, core_math.RHO0 * (1 - 1e-9), 1000)
    worst = max(_rel(psi0_singular(r, ds), gaussian_srsr_curve(r)) for r in rhos)
    ref = float(oracles.mp_gaussian_curve(0.001))
    star = oracles.mp_curve_crossing()
    rows = phase_curve(ds, "singular", 2000, 1e-3, 0.01)
    flips = [(a[0], b[0]) for a, b in zip(rows, rows[1:]) if a[2] != b[2]]
    return [
        Check("psi0_singular(DS) == gaussian curve (1e-12)", worst < 1e-12, f"worst {worst:.2e}"),
        Check("curve(0.001) vs 50-digit oracle", _rel(gaussian_srsr_curve(0.001), ref) < 1e-12, f"{ref:.6e}"),
        Check("curve(0.001) within 2% of 9.14e-8", _rel(ref, 9.14e-8) < 0.02),
        Check("delta = 1 crossing in (0.0028, 0.0033)", 0.0028 < star < 0.0033, f"rho* = {star:.7f}"),
        Check("phase grid brackets the crossing",
              len(flips) == 1 and flips[0][0] <= star <= flips[0][1]),
        Check("t_* factored == expanded (1e-12)",
              max(abs(t_star_eigen(r) - t_star_eigen_expanded(r)) for r in rhos) < 1e-12),
    ]


def suite_kappa_gamma() -> list[Check]:
    gamma0 = float(oracles.mp_constants()["gamma0"])
    grid = np.linspace(0.0, 0.95, 200)
    pairs = [(a, b) for a in grid for b in np.linspace(0.0, 3.0, 200)]
    mismatch = 0
    for c_min, c_max in pairs:
        gamma_side = (1.0 + c_max) / (1.0 - c_min) < gamma0
        try:
            kappa_side = srsr_kappa(RicPair(c_min, c_max)) < 1.0
        except DegenerateError:
            kappa_side = False
        mismatch += gamma_side != kappa_side
    c = core_math.TAU0
    kappa_edge = srsr_kappa(RicPair(c, c))
    b_err = max(abs(srsr_b(RicPair(a, b)) - oracles.b_by_maximization(a, b))
                for a, b in [(0.1, 0.2), (0.3, 0.9), (0.5, 0.5), (0.05, 1.7), (0.9, 0.1)])
    return [
        Check("kappa < 1 <=> gamma < gamma0 on 200x200 grid", mismatch == 0, f"{mismatch} mismatches"),
        Check("kappa(tau0, tau0) = 1 +- 1e-12", abs(kappa_edge - 1.0) < 1e-12, f"{kappa_edge!r}"),
        Check("b closed form == numerical maximum", b_err < 1e-8, f"max err {b_err:.2e}"),
    ]


def suite_rates() -> list[Check]:
    models = [RateModel(k) for k in RateKind] + [RateModel(RateKind.LR, c_lr=2.5), RateModel(RateKind.TW, c_tw=0.3)]
    worst, skipped = 0.0, 0
    for model in models:
        for rb in np.geomspace(1e-4, 0.9, 25):
            for u in np.geomspace(1e-8, 10.0, 40):
                try:
                    t = model.inverse(rb, u)
                except OutOfRangeError:
                    skipped += 1
                    continue
                if not math.isfinite(t):
                    skipped += 1
                    continue
                worst = max(worst, _rel(model.rate(rb, t), u))
    dominated = all(rate_lr(rb, t) <= rate_lr_min(rb, t)
                    for rb in np.geomspace(1e-4, 0.9, 30) for t in np.geomspace(1e-6, 20.0, 60))
    return [
        Check("W(W^-1(u)) = u (1e-9 rel)", worst < 1e-9, f"worst {worst:.2e}, {skipped} overflowed"),
        Check("W_LR <= W_LR^min pointwise", dominated),
    ]


def suite_borned1(m_max: int = 500) -> list[Check]:
    bad, drift = [], 0.0
    for m in range(1, m_max + 1):
        for n in range(1, m + 1):
            (l1, r1), (l2, r2) = oracles.borned1_sides(m, n)
            if not (l1 <= r1 and l2 <= r2):
                bad.append((m, n))
            if n % 17 == 0 or n == m:
                (k1, _), (k2, _) = core_math.binomial_log_bound_check(m, n)
                drift = max(drift, abs(k1 - l1), abs(k2 - l2))
    return [
        Check(f"both inequalities for 1 <= n <= m <= {m_max}", not bad, f"violations {bad[:3]}"),
        Check("library lhs == exact-integer lhs (1e-9)", drift < 1e-9, f"max diff {drift:.2e}"),
    ]


def suite_stirling() -> list[Check]:
    zs = np.geomspace(1e-3, 1e6, 10000)
    vals = np.array([core_math.stirling_theta(z) for z in zs])
    sample = zs[::250]
    err = max(abs(core_math.stirling_theta(z) - oracles.mp_stirling_theta(z)) for z in sample)
    return [
        Check("theta in (0, 1) on 1e4 log-spaced z", bool(np.all((vals > 0) & (vals < 1))),
              f"range [{vals.min():.6g}, {vals.max():.12g}]"),
        Check("theta matches 50-digit log-gamma (1e-9)", err < 1e-9, f"max err {err:.2e}"),
    ]


def suite_envelope(p_max: int = 60) -> list[Check]:
    bad = [(p, r) for p in range(2, p_max + 1) for r in range(1, p) if not oracles.envelope_holds(p, r)]
    return [Check(f"C(p,r) <= Theta e^(pH(r/p)) for 1 <= r < p <= {p_max}", not bad, f"violations {bad[:3]}")]


def suite_solver(instances: int = 12) -> list[Check]:
    rng = np.random.default_rng(7)
    worst_obj, worst_res, worst_gap = 0.0, 0.0, 0.0
    for i in range(instances):
        n, p = [(4, 8), (5, 10), (6, 12), (8, 14)][i % 4]
        mat = rng.standard_normal((n, p)) / math.sqrt(n)
        x0 = np.zeros(p)
        x0[rng.choice(p, 1 + i % 3, replace=False)] = rng.standard_normal(1 + i % 3)
        y = mat @ x0 if i % 2 == 0 else rng.standard_normal(n)
        res = l1_solve(RecoveryInstance(mat, y))
        worst_obj = max(worst_obj, abs(res.objective - oracles.bp_vertex_objective(mat, y)))
        worst_res = max(worst_res, res.feasibility_residual)
        worst_gap = max(worst_gap, res.optimality_gap)
    return [
        Check("objective == vertex enumeration (1e-6)", worst_obj < 1e-6, f"max diff {worst_obj:.2e}"),
        Check("feasibility residual <= 1e-8", worst_res <= 1e-8, f"max {worst_res:.2e}"),
        Check("certified gap <= 1e-6", worst_gap <= 1e-6, f"max {worst_gap:.2e}"),
    ]


def suite_spectra() -> list[Check]:
    rng = np.random.default_rng(11)
    eig_err = 0.0
    for _ in range(20):
        k = int(rng.integers(2, 5))
        a = rng.standard_normal((k, k))
        sym = (a + a.T) / 2
        lo, hi = extreme_eigs(sym)
        olo, ohi = oracles.charpoly_extremes(sym)
        eig_err = max(eig_err, abs(lo - olo), abs(hi - ohi))
    ric_err = 0.0
    for _ in range(3):
        mat = rng.standard_normal((8, 10)) / math.sqrt(8)
        got = empirical_ric_of_matrix(mat, 3)
        ref = oracles.ric_bruteforce(mat, 3)
        ric_err = max(ric_err, abs(got.c_min_hat - ref[0]), abs(got.c_max_hat - ref[1]))
    sig_err = 0.0
    for _ in range(30):
        p = int(rng.integers(1, 13))
        x = rng.standard_normal(p)
        s = int(rng.integers(0, p + 1))
        sig_err = max(sig_err, abs(sigma_s(x, s) - oracles.sigma_s_bruteforce(x, s)))
    return [
        Check("extreme eigenvalues == characteristic-polynomial roots", eig_err < 1e-10, f"max err {eig_err:.2e}"),
        Check("batched exhaustive RIC == per-support loop", ric_err < 1e-12, f"max err {ric_err:.2e}"),
        Check("sigma_s == exhaustive support search", sig_err < 1e-12, f"max err {sig_err:.2e}"),
    ]


SUITES = {
    "constant-chain": suite_constant_chain,
    "curve": suite_curve,
    "kappa-gamma": suite_kappa_gamma,
    "rates": suite_rates,
    "borned1": suite_borned1,
    "stirling": suite_stirling,
    "envelope": suite_envelope,
    "solver": suite_solver,
    "spectra": suite_spectra,
}


def run(names=None, out=None) -> bool:
    """Run the named suites (all by default); return True iff every check passed."""
    out = out or sys.stdout
    names = list(SUITES) if not names else list(names)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise KeyError(f"unknown suite(s): {', '.join(unknown)}")
    ok_all = True
    out.write(f"{'suite':<16}{'checks':>8}{'failed':>8}  status\n")
    failures = []
    for name in names:
        checks = SUITES[name]()
        failed = [c for c in checks if not c.passed]
        ok_all &= not failed
        out.write(f"{name:<16}{len(checks):>8}{len(failed):>8}  {'PASS' if not failed else 'FAIL'}\n")
        failures += [(name, c) for c in failed]
    for name, c in failures:
        out.write(f"FAILED [{name}] {c.name}: {c.detail}\n")
    return ok_all
