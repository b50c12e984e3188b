"""Seeded random matrices, extreme spectra, Monte Carlo deviations, empirical RICs.

Reproducibility contract: trial ``i`` of a run seeded with ``seed`` draws
from the stream ``SeedSequence([seed, i])``. Reductions are order-free, so
results do not depend on how many worker threads run the trials. The
``RICLAB_THREADS`` environment variable caps the number of threads.
"""

from __future__ import annotations

import enum
import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .core_math import log_binomial
from .errors import BudgetExceededError, DomainError
from .fs_constants import M_MIN, FsConstants, fs_tail_bound, to_linear
from .rates import RateKind, RateModel

EXHAUSTIVE_BUDGET = 10 ** 7
_CHUNK = 1 << 15


class EnsembleKind(str, enum.Enum):
    GAUSSIAN = "gaussian"
    RADEMACHER = "rademacher"


class Tail(str, enum.Enum):
    LARGEST = "largest"
    SMALLEST = "smallest"
    EITHER = "either"


class Form(str, enum.Enum):
    EIGEN = "eigen"
    SINGULAR = "singular"


@dataclass(frozen=True)
class Ensemble:
    kind: EnsembleKind
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", EnsembleKind(self.kind))
        if not 0 <= self.seed < 2 ** 64:
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    def rng(self, stream: int = 0) -> np.random.Generator:
        return np.random.default_rng(np.random.SeedSequence([self.seed, stream]))


def thread_count(threads: int | None = None) -> int:
    if threads is None:
        env = os.environ.get("RICLAB_THREADS")
        if env is None:
            return 1
        try:
            threads = int(env)
        except ValueError:
            raise DomainError(f"RICLAB_THREADS must be a positive integer, got {env!r}") from None
    if threads < 1:
        raise DomainError(f"thread count must be positive, got {threads}")
    return threads


def map_trials(fn, trials: int, threads: int | None = None) -> list:
    """``[fn(i) for i in range(trials)]``, possibly spread over threads."""
    workers = min(thread_count(threads), max(trials, 1))
    if workers == 1:
        return [fn(i) for i in range(trials)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(trials)))


def draw(rng: np.random.Generator, kind: EnsembleKind, rows: int, cols: int) -> np.ndarray:
    if kind is EnsembleKind.GAUSSIAN:
        return rng.standard_normal((rows, cols))
    return rng.integers(0, 2, size=(rows, cols)).astype(np.float64) * 2.0 - 1.0


def sample_matrix(ensemble: Ensemble, rows: int, cols: int, stream: int = 0) -> np.ndarray:
    """Unscaled matrix of iid N(0,1) or +/-1 entries from the given stream."""
    if rows < 1 or cols < 1:
        raise DomainError(f"rows and cols must be >= 1, got {rows}x{cols}")
    return draw(ensemble.rng(stream), ensemble.kind, rows, cols)


def _check_finite(a):
    if not np.all(np.isfinite(a)):
        raise DomainError("matrix has non-finite entries")


def extreme_eigs(cov) -> tuple[float, float]:
    """(lambda_min, lambda_max) of a symmetric matrix."""
    a = np.asarray(cov, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {a.shape}")
    _check_finite(a)
    scale = max(np.max(np.abs(a)), np.finfo(float).tiny)
    if np.max(np.abs(a - a.T)) > 1e-12 * scale:
        raise DomainError("matrix is not symmetric")
    w = np.linalg.eigvalsh(a)
    return float(w[0]), float(w[-1])


def extreme_singulars(mat) -> tuple[float, float]:
    """(sigma_min, sigma_max) over the min(rows, cols) singular values."""
    a = np.atleast_2d(np.asarray(mat, dtype=np.float64))
    _check_finite(a)
    s = np.linalg.svd(a, compute_uv=False)
    return float(s[-1]), float(s[0])


def mp_edges(rhobar: float) -> tuple[float, float]:
    """Marchenko-Pastur bulk edges ((1 - sqrt rhobar)^2, (1 + sqrt rhobar)^2)."""
    if not 0.0 < rhobar < 1.0:
        raise DomainError(f"rhobar must lie in (0, 1), got {rhobar!r}")
    sq = math.sqrt(rhobar)
    return (1.0 - sq) ** 2, (1.0 + sq) ** 2


@dataclass
class DeviationEstimate:
    trials: int
    hits: int
    p_hat: float
    ci_low: float
    ci_high: float
    theory_bound: float | None
    t: float
    rhobar: float
    n: int
    tail: str
    r: int = 0
    form: str = "eigen"
    ensemble: str = "gaussian"
    seed: int = 0
    model: str | None = None
    theory_log_bound: float | None = None
    vacuous: bool | None = None


def deviation_samples(ensemble: Ensemble, n: int, rhobar: float, trials: int,
                      form: Form | str = Form.EIGEN, threads: int | None = None) -> np.ndarray:
    """Per-trial (upper, lower) deviations from the bulk edges, shape (trials, 2).

    ``eigen`` uses C = X X^T / n against (1 +/- sqrt rhobar)^2; ``singular`` uses
    sigma(X)/sqrt(n) against 1 +/- sqrt rhobar. X is r x n with r = floor(rhobar n).
    """
    form = Form(form)
    r = int(math.floor(rhobar * n))
    if r < 1:
        raise DomainError(f"r = floor(rhobar * n) must be >= 1, got r={r}")
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    lo_edge, hi_edge = mp_edges(rhobar)
    sq = math.sqrt(rhobar)

    def one(i):
        x = sample_matrix(ensemble, r, n, stream=i)
        s = np.linalg.svd(x, compute_uv=False) / math.sqrt(n)
        if form is Form.SINGULAR:
            return s[0] - (1.0 + sq), (1.0 - sq) - s[-1]
        return s[0] ** 2 - hi_edge, lo_edge - s[-1] ** 2

    return np.array(map_trials(one, trials, threads), dtype=np.float64).reshape(trials, 2)


def tail_hits(samples: np.ndarray, t: float, tail: Tail | str) -> int:
    tail = Tail(tail)
    if tail is Tail.LARGEST:
        dev = samples[:, 0]
    elif tail is Tail.SMALLEST:
        dev = samples[:, 1]
    else:
        dev = samples.max(axis=1)
    return int(np.count_nonzero(dev >= t))


def wilson_interval(hits: int, trials: int) -> tuple[float, float]:
    ci = stats.binomtest(hits, trials).proportion_ci(confidence_level=0.95, method="wilson")
    return float(ci.low), float(ci.high)


def theory_tail_bound(model: RateModel | None, n: int, rhobar: float, t: float, tail: Tail | str,
                      c0: float = 1.0) -> tuple[float | None, float | None]:
    """(bound, log_bound) on the tail probability, where one is computable.

    DS: 2 exp(-n t^2/2) (covers both tails at once).
    FS: the explicit Rademacher bound with M = r, N = n (M >= 54), doubled for ``either``.
    Other models have an unknown prefactor c(rhobar), so no bound is returned.
    """
    if model is None:
        return None, None
    if model.kind is RateKind.DS:
        log_b = math.log(2.0) - n * model.rate(rhobar, t)
        return math.exp(log_b), log_b
    if model.kind is RateKind.FS:
        r = int(math.floor(rhobar * n))
        if r < M_MIN or r >= n:
            return None, None
        _, log_b = fs_tail_bound(r, n, t, c0=c0, consts=FsConstants(c_fs=model.c_fs), warn=False)
        if Tail(tail) is Tail.EITHER:
            log_b += math.log(2.0)
        linear = to_linear(log_b)
        return (math.inf if linear is None else linear), log_b
    return None, None


def mc_deviation(ensemble: Ensemble, n: int, rhobar: float, t: float, trials: int,
                 tail: Tail | str = Tail.EITHER, model: RateModel | None = None,
                 form: Form | str | None = None, c0: float = 1.0,
                 threads: int | None = None) -> DeviationEstimate:
    """Monte Carlo estimate of P(deviation from the bulk edge >= t)."""
    if not t > 0.0:
        raise DomainError(f"t must be > 0, got {t!r}")
    if form is None:
        form = Form.SINGULAR if model is not None and model.kind is RateKind.DS else Form.EIGEN
    form = Form(form)
    tail = Tail(tail)
    samples = deviation_samples(ensemble, n, rhobar, trials, form, threads)
    hits = tail_hits(samples, t, tail)
    lo, hi = wilson_interval(hits, trials)
    bound, log_bound = theory_tail_bound(model, n, rhobar, t, tail, c0)
    return DeviationEstimate(
        trials=trials, hits=hits, p_hat=hits / trials, ci_low=min(lo, hits / trials), ci_high=max(hi, hits / trials),
        theory_bound=bound, t=t, rhobar=rhobar, n=n, tail=tail.value,
        r=int(math.floor(rhobar * n)), form=form.value, ensemble=ensemble.kind.value, seed=ensemble.seed,
        model=None if model is None else model.kind.value.lower(), theory_log_bound=log_bound,
        vacuous=None if bound is None else bound >= 1.0,
    )


@dataclass
class EmpiricalRic:
    n: int
    p: int
    r: int
    c_min_hat: float
    c_max_hat: float
    subsets_evaluated: int
    exhaustive: bool
    lambda_min: float = math.nan
    lambda_max: float = math.nan

    @property
    def lower_bounds_only(self) -> bool:
        """Sampled supports only bound the true RICs from below."""
        return not self.exhaustive


def _support_spectra(gram, supports):
    sub = gram[supports[:, :, None], supports[:, None, :]]
    w = np.linalg.eigvalsh(sub)
    return float(w[:, 0].min()), float(w[:, -1].max())


def empirical_ric_of_matrix(mat, r: int, mode: str = "exhaustive", k: int | None = None,
                            rng: np.random.Generator | None = None) -> EmpiricalRic:
    """Empirical RICs of an already scaled n x p matrix over r-column supports.

    ``exhaustive`` visits all C(p, r) supports; ``sampled`` draws ``k`` uniform
    supports (with replacement across draws) and so gives lower bounds.
    """
    a = np.asarray(mat, dtype=np.float64)
    n, p = a.shape
    if not 1 <= r <= p:
        raise DomainError(f"need 1 <= r <= p, got r={r}, p={p}")
    _check_finite(a)
    gram = a.T @ a
    lam_min, lam_max = math.inf, -math.inf
    if mode == "exhaustive":
        total = math.comb(p, r)
        if total > EXHAUSTIVE_BUDGET:
            raise BudgetExceededError(f"C({p},{r}) = {total} supports exceeds budget {EXHAUSTIVE_BUDGET}")
        combos = itertools.combinations(range(p), r)
        while True:
            chunk = np.fromiter(itertools.chain.from_iterable(itertools.islice(combos, _CHUNK)),
                                dtype=np.intp)
            if chunk.size == 0:
                break
            lo, hi = _support_spectra(gram, chunk.reshape(-1, r))
            lam_min, lam_max = min(lam_min, lo), max(lam_max, hi)
        evaluated = total
    elif mode == "sampled":
        if k is None or k < 1:
            raise DomainError("sampled mode needs k >= 1")
        if rng is None:
            rng = np.random.default_rng(0)
        done = 0
        while done < k:
            m = min(_CHUNK, k - done)
            supports = np.argsort(rng.random((m, p)), axis=1)[:, :r]
            lo, hi = _support_spectra(gram, supports)
            lam_min, lam_max = min(lam_min, lo), max(lam_max, hi)
            done += m
        evaluated = k
    else:
        raise DomainError(f"unknown mode {mode!r}")
    return EmpiricalRic(
        n=n, p=p, r=r,
        c_min_hat=max(0.0, 1.0 - lam_min),
        c_max_hat=max(0.0, lam_max - 1.0),
        subsets_evaluated=evaluated,
        exhaustive=mode == "exhaustive" and evaluated == math.comb(p, r),
        lambda_min=lam_min, lambda_max=lam_max,
    )


def empirical_ric(ensemble: Ensemble, n: int, p: int, r: int, mode: str = "exhaustive",
                  k: int | None = None, stream: int = 0) -> EmpiricalRic:
    """Empirical RICs of M = X / sqrt(n), X an n x p draw from ``ensemble``."""
    if not 1 <= r <= p:
        raise DomainError(f"need 1 <= r <= p, got r={r}, p={p}")
    if mode == "exhaustive" and log_binomial(p, r) > math.log(EXHAUSTIVE_BUDGET):
        raise BudgetExceededError(f"C({p},{r}) supports exceeds budget {EXHAUSTIVE_BUDGET}")
    mat = sample_matrix(ensemble, n, p, stream) / math.sqrt(n)
    # separate stream for support sampling so the matrix is identical across modes
    rng = np.random.default_rng(np.random.SeedSequence([ensemble.seed, stream, 1]))
    return empirical_ric_of_matrix(mat, r, mode, k, rng)
