"""Independent reference computations used by the self-test and the test suite.

None of these call the production code paths they check. They use exact
integers, 50-digit mpmath arithmetic or brute-force enumeration, and trade
speed for obviousness.
"""

from __future__ import annotations

import itertools
import math

import mpmath
import numpy as np
from scipy import optimize

DIGITS = 50


def _mp():
    ctx = mpmath.mp.clone()
    ctx.dps = DIGITS
    return ctx


def mp_constants() -> dict:
    """rho0, tau0, gamma0 and sqrt(2 rho0) to 50 digits, as mpf values."""
    mp = _mp()
    s41 = mp.sqrt(41)
    rho0 = (33 - 5 * s41) / 16
    return {
        "rho0": rho0,
        "tau0": 4 / s41,
        "gamma0": (4 + s41) ** 2 / 25,
        "sqrt_2rho0": mp.sqrt(2 * rho0),
    }


def mp_gaussian_curve(rho) -> mpmath.mpf:
    mp = _mp()
    rho = mp.mpf(rho)
    gap = mp.sqrt((33 - 5 * mp.sqrt(41)) / 8) - mp.sqrt(2 * rho)
    return mp.exp(1 - gap ** 2 / (4 * rho)) / (2 * rho)


def mp_curve_crossing(lo=0.0028, hi=0.0033) -> float:
    """rho* where the Gaussian curve equals 1, by bisection in 50 digits."""
    mp = _mp()
    a, b = mp.mpf(lo), mp.mpf(hi)
    if not (mp_gaussian_curve(a) < 1 < mp_gaussian_curve(b)):
        raise ValueError("crossing not bracketed")
    for _ in range(200):
        mid = (a + b) / 2
        if mp_gaussian_curve(mid) < 1:
            a = mid
        else:
            b = mid
    return float((a + b) / 2)


def mp_stirling_theta(z) -> float:
    mp = _mp()
    z = mp.mpf(z)
    rest = mp.loggamma(z + 1) - (mp.log(2 * mp.pi * z) / 2 + z * mp.log(z) - z)
    return float(12 * z * rest)


def exact_log_binomial(p: int, r: int) -> float:
    """ln C(p, r) from the exact integer (math.log handles big ints)."""
    return math.log(math.comb(p, r))


def borned1_sides(m: int, n: int) -> tuple[tuple[float, float], tuple[float, float]]:
    """Both central-binomial log inequalities from exact integer binomials."""
    ln4m = 2 * m * math.log(2)
    lhs1 = math.log(n * math.comb(2 * m, m - n)) - ln4m
    lhs2 = math.log((2 * n + 1) * math.comb(2 * m + 1, m - n)) - math.log(2) - ln4m
    return (lhs1, 5 - 0.6321 * n * n / m), (lhs2, 2 - 0.6555 * n * n / m)


def envelope_holds(p: int, r: int) -> bool:
    """C(p, r) <= Theta * exp(p H(r/p)), checked in 50-digit arithmetic."""
    mp = _mp()
    q = mp.mpf(r) / p
    entropy = -q * mp.log(q) - (1 - q) * mp.log(1 - q)
    theta = mp.sqrt(mp.exp(mp.mpf(1) / 2) / (2 * mp.pi * (r * (1 - q)) ** (mp.mpf(1) / p)))
    return mp.mpf(math.comb(p, r)) <= theta * mp.exp(p * entropy)


def b_by_maximization(c_min: float, c_max: float) -> float:
    """max over t in [-c_min, c_max] of sqrt((c_max - t)(c_min + t)) / (1 + t), numerically."""
    if c_min + c_max == 0.0:
        return 0.0

    def neg(t):
        return -math.sqrt(max(0.0, (c_max - t) * (c_min + t))) / (1.0 + t)

    res = optimize.minimize_scalar(neg, bounds=(-c_min, c_max), method="bounded",
                                   options={"xatol": 1e-13})
    return -float(res.fun)


def sigma_s_bruteforce(x, s: int) -> float:
    x = np.asarray(x, dtype=np.float64)
    p = x.size
    best = math.inf
    for keep in itertools.combinations(range(p), s):
        rest = np.ones(p, dtype=bool)
        rest[list(keep)] = False
        best = min(best, float(np.abs(x[rest]).sum()))
    return best


def bp_vertex_objective(mat, y, cond_limit: float = 1e10) -> float:
    """Basis pursuit optimum min ||x||_1 s.t. M x = y by enumerating basic solutions.

    For a full-row-rank n x p matrix the optimum is attained at a basic
    feasible point x_S = M_S^{-1} y over some n-column support S.
    """
    a = np.asarray(mat, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n, p = a.shape
    supports = np.array(list(itertools.combinations(range(p), n)), dtype=np.intp)
    blocks = a[:, supports].transpose(1, 0, 2)
    conds = np.linalg.cond(blocks)
    ok = conds < cond_limit
    sols = np.linalg.solve(blocks[ok], np.broadcast_to(y, (int(ok.sum()), n))[..., None])[..., 0]
    return float(np.abs(sols).sum(axis=1).min())


def ric_bruteforce(mat, r: int) -> tuple[float, float]:
    """(c_min, c_max) by a plain loop over supports with one eigvalsh per support."""
    a = np.asarray(mat, dtype=np.float64)
    lo, hi = math.inf, -math.inf
    for support in itertools.combinations(range(a.shape[1]), r):
        sub = a[:, support]
        w = np.linalg.eigvalsh(sub.T @ sub)
        lo, hi = min(lo, w[0]), max(hi, w[-1])
    return max(0.0, 1.0 - lo), max(0.0, hi - 1.0)


def charpoly_extremes(sym) -> tuple[float, float]:
    """Extreme eigenvalues of a small symmetric matrix from its characteristic polynomial.

    Coefficients come from the Faddeev-LeVerrier recursion in 50 digits and
    roots from mpmath.polyroots.
    """
    mp = _mp()
    a = mp.matrix(np.asarray(sym, dtype=np.float64).tolist())
    k = a.rows
    coeffs = [mp.mpf(1)]
    m_prev = mp.zeros(k, k)
    eye = mp.eye(k)
    for j in range(1, k + 1):
        m_cur = a * m_prev + coeffs[-1] * eye
        am = a * m_cur
        c = -sum(am[i, i] for i in range(k)) / j
        coeffs.append(c)
        m_prev = m_cur
    roots = mp.polyroots(coeffs, maxsteps=200, extraprec=200)
    real = sorted(float(mp.re(z)) for z in roots)
    return real[0], real[-1]
