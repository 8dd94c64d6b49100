"""Mixing and hitting times, distances to uniform, and parameter scans.

Total variation follows the unhalved convention ``||A - B|| = sum_x |A(x) - B(x)|``
so values lie in [0, 2].  Hellinger distance is normalized,
``H(A, B)^2 = 1 - sum_x sqrt(A(x) B(x))``, which makes ``1 - H^2`` multiplicative
over product distributions.  Logarithms in ``t = d n log n`` are natural.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln, logsumexp, xlog1py

from .dynamics import (
    DEFAULT_REGIME_TOL,
    Regime,
    RegimeError,
    WalkParams,
    gamma,
    prob1,
)
from .states import CubeDistribution

__all__ = [
    "MixingTime",
    "HittingTime",
    "Table",
    "mixing_times",
    "hitting_times",
    "first_zero",
    "hellinger_single",
    "hellinger_product",
    "hellinger_enumerate",
    "tv_exact",
    "tv_enumerate",
    "tv_bounds",
    "threshold_constant",
    "mixing_threshold_scan",
    "classify_threshold",
    "zeno_scan",
    "product_distribution",
    "hit_local_max_residual",
    "MIXING_ROOT_TOL",
    "BOUNDED_BELOW_EPS",
]

MIXING_ROOT_TOL = 1e-10
_PHASE_TOL = 1e-8
BOUNDED_BELOW_EPS = 0.01


@dataclass(frozen=True)
class MixingTime:
    c: int
    t: float


@dataclass(frozen=True)
class HittingTime:
    c: int
    t: float
    p_hit: float


@dataclass
class Table:
    """Column-oriented result of a scan; rows are tuples in column order."""

    columns: tuple
    rows: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [row[i] for row in self.rows]

    def records(self) -> list[dict]:
        return [dict(zip(self.columns, row)) for row in self.rows]


def _require_underdamped(params: WalkParams, what: str, tol: float) -> float:
    if params.regime(tol) is not Regime.UNDERDAMPED:
        raise RegimeError(
            f"no such {what} exist unless p < 4k (got p={params.p:g}, 4k={4 * params.k:g})"
        )
    return math.sqrt(params.beta_squared)


def mixing_times(params: WalkParams, c_max: int, tol: float = DEFAULT_REGIME_TOL) -> list[MixingTime]:
    """Times at which every coordinate is exactly uniform, for branches c = 1..c_max.

    Candidates come from both solution families of the squared (half-angle)
    equation, ``t = n (2 pi m -/+ theta) / beta`` with
    ``theta = arccos(p^2 / 8k^2 - 1) = 2 atan2(beta, p)``.  Only candidates with
    ``|gamma(t)| <= 1e-10`` survive; the '+' family is extraneous whenever p > 0.
    Late branches have an envelope below that tolerance, so candidates must also
    zero the unit-amplitude factor ``(beta cos x + p sin x) / 4k`` with
    ``x = beta t / 2n``.
    """
    if c_max < 1:
        raise ValueError("c_max must be at least 1")
    beta = _require_underdamped(params, "mixing times", tol)
    n = params.n
    theta = 2.0 * math.atan2(beta, params.p)
    candidates = []
    for m in range(0, c_max + 1):
        for sign in (-1.0, 1.0):
            t = n * (2.0 * math.pi * m + sign * theta) / beta
            if t > 0:
                candidates.append(t)
    candidates.sort()
    roots: list[float] = []
    for t in candidates:
        if abs(gamma(params, t)) > MIXING_ROOT_TOL:
            continue
        x = beta * t / (2.0 * n)
        if abs(beta * math.cos(x) + params.p * math.sin(x)) > _PHASE_TOL * 4.0 * params.k:
            continue
        if roots and abs(t - roots[-1]) <= 1e-9 * max(1.0, t):
            continue
        roots.append(t)
    return [MixingTime(c, t) for c, t in enumerate(roots[:c_max], start=1)]


def hitting_times(params: WalkParams, c_max: int, tol: float = DEFAULT_REGIME_TOL) -> list[HittingTime]:
    """Local maxima of P[1] for branches c = 0..c_max and the chance of a full hit there."""
    if c_max < 0:
        raise ValueError("c_max must be non-negative")
    beta = _require_underdamped(params, "hitting times", tol)
    n, p = params.n, params.p
    out = []
    for c in range(c_max + 1):
        t = 2.0 * math.pi * n * (2 * c + 1) / beta
        per_qubit = 0.5 + 0.5 * math.exp(-p * math.pi * (2 * c + 1) / beta)
        out.append(HittingTime(c, t, per_qubit**n))
    return out


def first_zero(params: WalkParams, t_lo: float, t_hi: float, xtol: float = 1e-13, max_iter: int = 200) -> float:
    """Bisection for a zero of gamma on a bracket where it changes sign."""
    g_lo, g_hi = gamma(params, t_lo), gamma(params, t_hi)
    if g_lo == 0.0:
        return t_lo
    if g_hi == 0.0:
        return t_hi
    if (g_lo > 0) == (g_hi > 0):
        raise ValueError(f"gamma does not change sign on [{t_lo}, {t_hi}]")
    for _ in range(max_iter):
        mid = 0.5 * (t_lo + t_hi)
        g_mid = gamma(params, mid)
        if g_mid == 0.0:
            return mid
        if (g_mid > 0) == (g_lo > 0):
            t_lo, g_lo = mid, g_mid
        else:
            t_hi = mid
        if t_hi - t_lo <= xtol * max(1.0, abs(mid)):
            break
    return 0.5 * (t_lo + t_hi)


def _check_gamma(g: float) -> float:
    if not -0.5 <= g <= 0.5:
        raise ValueError(f"gamma must lie in [-1/2, 1/2], got {g}")
    return float(g)


def _log_bhattacharyya(g: float) -> float:
    # log(1/2 sqrt(1+2g) + 1/2 sqrt(1-2g)), written as log1p to keep small-g accuracy
    u = 2 * g / (math.sqrt(1 + 2 * g) + 1)
    v = -2 * g / (math.sqrt(1 - 2 * g) + 1)
    return math.log1p(0.5 * (u + v))


def hellinger_single(g: float) -> float:
    """H(P, U) for P = (1/2 + g, 1/2 - g) against the uniform bit."""
    g = _check_gamma(g)
    return math.sqrt(max(0.0, -math.expm1(_log_bhattacharyya(g))))


def hellinger_product(g: float, n: int) -> float:
    """H(P^n, U^n) via ``1 - H(P^n, U^n)^2 = (1 - H(P, U)^2)^n`` in log space."""
    g = _check_gamma(g)
    if n < 1:
        raise ValueError("n must be positive")
    return math.sqrt(max(0.0, -math.expm1(n * _log_bhattacharyya(g))))


def hellinger_enumerate(p_full: np.ndarray, q_full: np.ndarray) -> float:
    """Hellinger distance between two explicit distributions."""
    bc = float(np.sum(np.sqrt(np.asarray(p_full) * np.asarray(q_full))))
    return math.sqrt(max(0.0, 1.0 - bc))


def tv_enumerate(p_full: np.ndarray, q_full: np.ndarray) -> float:
    return float(np.sum(np.abs(np.asarray(p_full) - np.asarray(q_full))))


def tv_exact(g: float, n: int) -> float:
    """||P^n - U^n|| summed over Hamming weights in O(n).

    Weight w carries uniform mass ``b_w = C(n, w) 2^-n`` and
    ``P^n``-mass ``b_w exp(L_w)`` with ``L_w = (n-w) log(1+2g) + w log(1-2g)``,
    so each group contributes ``b_w |expm1(L_w)|``.
    """
    g = _check_gamma(g)
    if n < 1:
        raise ValueError("n must be positive")
    if g == 0.0:
        return 0.0
    w = np.arange(n + 1, dtype=float)
    log_b = gammaln(n + 1) - gammaln(w + 1) - gammaln(n - w + 1)
    log_b -= logsumexp(log_b)
    with np.errstate(divide="ignore"):
        log_ratio = xlog1py(n - w, 2 * g) + xlog1py(w, -2 * g)
        # log |expm1(L)| without overflow for large positive L
        pos = log_ratio > 0
        log_excess = np.empty_like(log_ratio)
        log_excess[pos] = log_ratio[pos] + np.log(-np.expm1(-log_ratio[pos]))
        log_excess[~pos] = np.log(-np.expm1(log_ratio[~pos]))
    total = float(np.sum(np.exp(log_b + log_excess)))
    return min(total, 2.0)


def tv_bounds(g: float, n: int) -> tuple[float, float]:
    """Bounds ``(lower, upper)`` on ``tv_exact(g, n)`` from the Hellinger sandwich
    ``||A - B|| <= 2 h <= 2 ||A - B||^(1/2)``.

    The sandwich holds for the unnormalized distance ``h^2 = sum (sqrt A - sqrt B)^2
    = 2 H^2``, so ``lower = h^2 = 2 H^2`` and ``upper = 2 h = 2 sqrt(2) H`` with H
    the normalized :func:`hellinger_product`.
    """
    h_sq = 2.0 * hellinger_product(g, n) ** 2
    return h_sq, 2.0 * math.sqrt(h_sq)


def threshold_constant(params: WalkParams, tol: float = DEFAULT_REGIME_TOL) -> float:
    """``1 / (p - alpha)``, the critical d in ``t = d n ln n``; equals 1/4k at p = 4k."""
    regime = params.regime(tol)
    if regime is Regime.UNDERDAMPED:
        raise RegimeError(f"threshold scan needs p >= 4k (got p={params.p:g}, 4k={4 * params.k:g})")
    if regime is Regime.CRITICAL:
        return 1.0 / (4.0 * params.k)
    alpha = math.sqrt(-params.beta_squared)
    return (params.p + alpha) / (16.0 * params.k**2)


def _threshold_row(params: WalkParams, d: float, n: int, d_star: float):
    local = params.with_n(n)
    t = d * n * math.log(n)
    g = gamma(local, t)
    return (d, n, t, g, tv_exact(g, n), hellinger_product(g, n), d > d_star)


def mixing_threshold_scan(
    params: WalkParams,
    d_values,
    n_values,
    workers: int | None = None,
    tol: float = DEFAULT_REGIME_TOL,
) -> Table:
    """Total variation to uniform at ``t = d n ln n`` over a (d, n) grid.

    ``params.n`` is ignored; each row uses its own dimension.  Rows come back
    ordered by d, then n, in the order given, regardless of ``workers``.
    """
    d_star = threshold_constant(params, tol)
    for n in n_values:
        if int(n) != n or n < 2:
            raise ValueError(f"scan dimensions must be integers >= 2, got {n!r}")
    grid = [(float(d), int(n)) for d in d_values for n in n_values]
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda dn: _threshold_row(params, dn[0], dn[1], d_star), grid))
    else:
        rows = [_threshold_row(params, d, n, d_star) for d, n in grid]
    return Table(
        columns=("d", "n", "t", "gamma", "tv", "hellinger", "above_threshold"),
        rows=rows,
        meta={
            "k": params.k,
            "p": params.p,
            "regime": params.regime(tol).value,
            "threshold_d": d_star,
        },
    )


def classify_threshold(table: Table, eps: float = BOUNDED_BELOW_EPS) -> dict[float, str]:
    """Label each scanned d as 'decaying' (TV strictly decreasing in n),
    'bounded' (min TV >= eps and not strictly decreasing) or 'inconclusive'."""
    out = {}
    by_d: dict[float, list] = {}
    for row in table.records():
        by_d.setdefault(row["d"], []).append((row["n"], row["tv"]))
    for d, pairs in by_d.items():
        tvs = [tv for _, tv in sorted(pairs)]
        decreasing = all(b < a for a, b in zip(tvs, tvs[1:]))
        if decreasing:
            out[d] = "decaying"
        elif min(tvs) >= eps:
            out[d] = "bounded"
        else:
            out[d] = "inconclusive"
    return out


def zeno_scan(k: float, n: int, t: float, p_values) -> Table:
    """gamma(t) and the mixing-time scale ``n ln n / (p - alpha)`` for strong decoherence."""
    rows = []
    for p in p_values:
        if not p > 4 * k:
            raise RegimeError(f"zeno scan needs every p > 4k, got p={p:g} with 4k={4 * k:g}")
        params = WalkParams(n=n, k=k, p=p)
        alpha = math.sqrt(-params.beta_squared)
        slow = 16.0 * k * k / (p + alpha)
        bound = n * math.log(n) / slow if n > 1 else 0.0
        rows.append((float(p), gamma(params, t), p / alpha, bound))
    return Table(
        columns=("p", "gamma", "p_over_alpha", "mixing_bound"),
        rows=rows,
        meta={"k": k, "n": n, "t": t},
    )


def product_distribution(g: float, n: int) -> np.ndarray:
    return CubeDistribution.product(n, g).to_full()


def hit_local_max_residual(params: WalkParams, t: float) -> tuple[float, float]:
    """Central first and second differences of P[1] at t with step 1e-6 t."""
    h = 1e-6 * t
    lo, mid, hi = prob1(params, t - h), prob1(params, t), prob1(params, t + h)
    return (hi - lo) / (2 * h), (hi - 2 * mid + lo) / (h * h)
