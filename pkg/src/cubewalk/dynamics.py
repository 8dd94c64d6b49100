"""Single-qubit closed-form dynamics of the decohering hypercube walk.

Every coordinate of the n-cube evolves as an independent qubit with energy
``k/n`` that is measured in the computational basis at rate ``p/n``.  The
marginal of one coordinate is ``P[0] = 1/2 + gamma(t)``, ``P[1] = 1/2 - gamma(t)``
with

    gamma(t) = 1/2 exp(-p t / 2n) [cos(beta t / 2n) + (p / beta) sin(beta t / 2n)],
    beta = sqrt(16 k^2 - p^2).

``gamma`` below evaluates this in a form that stays finite and accurate for
p < 4k, p = 4k and p > 4k, and for arbitrarily large t.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, replace

import numpy as np

__all__ = [
    "WalkParams",
    "Regime",
    "DampingConstants",
    "Spectrum4",
    "RegimeError",
    "damping_constants",
    "gamma",
    "prob0",
    "prob1",
    "probabilities",
    "gamma_overdamped_terms",
    "spectrum",
    "DEFAULT_REGIME_TOL",
]

DEFAULT_REGIME_TOL = 1e-12

# |beta t / 2n| below this uses the series for cos and sinc
_SERIES_CUTOFF = 1e-4


class RegimeError(ValueError):
    """Raised when an operation is requested outside the damping regime it is defined for."""


class Regime(str, enum.Enum):
    UNDERDAMPED = "underdamped"
    CRITICAL = "critical"
    OVERDAMPED = "overdamped"


@dataclass(frozen=True)
class WalkParams:
    """Hypercube dimension ``n``, total energy ``k`` and decoherence rate ``p``."""

    n: int
    k: float
    p: float

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        if not (math.isfinite(self.k) and self.k > 0):
            raise ValueError(f"k must be a finite positive real, got {self.k!r}")
        if not (math.isfinite(self.p) and self.p >= 0):
            raise ValueError(f"p must be a finite non-negative real, got {self.p!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "k", float(self.k))
        object.__setattr__(self, "p", float(self.p))

    def with_n(self, n: int) -> "WalkParams":
        return replace(self, n=n)

    @property
    def beta_squared(self) -> float:
        # factored to keep the sign and relative accuracy near p = 4k
        return (4.0 * self.k - self.p) * (4.0 * self.k + self.p)

    def regime(self, tol: float = DEFAULT_REGIME_TOL) -> Regime:
        four_k = 4.0 * self.k
        if abs(self.p - four_k) <= tol * four_k:
            return Regime.CRITICAL
        return Regime.UNDERDAMPED if self.p < four_k else Regime.OVERDAMPED


@dataclass(frozen=True)
class DampingConstants:
    alpha: complex
    beta: complex
    regime: Regime


def damping_constants(params: WalkParams, tol: float = DEFAULT_REGIME_TOL) -> DampingConstants:
    """Return ``alpha = sqrt(p^2 - 16k^2)``, ``beta = -i alpha`` and the regime.

    At critical damping both constants are stored as exactly zero.
    """
    regime = params.regime(tol)
    if regime is Regime.CRITICAL:
        return DampingConstants(0j, 0j, regime)
    alpha = cmath.sqrt(complex(-params.beta_squared))
    return DampingConstants(alpha, -1j * alpha, regime)


def _as_array(t):
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0) or not np.all(np.isfinite(arr)):
        raise ValueError("t must be finite and non-negative")
    return arr


def gamma(params: WalkParams, t):
    """Signed deviation of the single-coordinate marginal from 1/2.

    Accepts a scalar or an array of times.  The bracket is written as
    ``cos(x) + a * sinc(x)`` with ``x = beta t / 2n`` and ``a = p t / 2n``, which
    is analytic in ``beta^2`` and therefore continuous through p = 4k.  For
    p > 4k the hyperbolic form is evaluated with the decay folded into the
    growing exponential, so nothing overflows at large t.
    """
    t_arr = _as_array(t)
    tau = t_arr / (2.0 * params.n)
    a = params.p * tau
    x2 = params.beta_squared * tau * tau  # x^2, negative when overdamped
    out = np.empty_like(tau)

    small = np.abs(x2) < _SERIES_CUTOFF**2
    under = ~small & (x2 > 0)
    over = ~small & (x2 < 0)

    if np.any(small):
        s = x2[small]
        c = 1.0 - s / 2.0 + s * s / 24.0
        sinc = 1.0 - s / 6.0 + s * s / 120.0
        out[small] = 0.5 * np.exp(-a[small]) * (c + a[small] * sinc)
    if np.any(under):
        x = np.sqrt(x2[under])
        au = a[under]
        out[under] = 0.5 * np.exp(-au) * (np.cos(x) + au * np.sin(x) / x)
    if np.any(over):
        y = np.sqrt(-x2[over])
        ao = a[over]
        grow = np.exp(y - ao)
        shrink = np.exp(-y - ao)
        # e^{-a} sinh(y) / y == e^{y-a} (1 - e^{-2y}) / 2y
        out[over] = 0.25 * (grow + shrink) + ao * grow * (-np.expm1(-2.0 * y)) / (4.0 * y)

    if out.ndim == 0:
        return float(out)
    return out


def probabilities(params: WalkParams, t):
    """Return ``(prob0, prob1)`` from a single gamma evaluation.

    The larger of the two is formed as ``1/2 + |gamma|`` and the other as its
    complement, which is exact in floating point, so the pair sums to one.
    """
    g = gamma(params, t)
    big = 0.5 + np.abs(g)
    small = 1.0 - big
    p0 = np.where(np.asarray(g) >= 0, big, small)
    p1 = np.where(np.asarray(g) >= 0, small, big)
    if np.ndim(g) == 0:
        return float(p0), float(p1)
    return p0, p1


def prob0(params: WalkParams, t):
    return probabilities(params, t)[0]


def prob1(params: WalkParams, t):
    return probabilities(params, t)[1]


def gamma_overdamped_terms(params: WalkParams, t, tol: float = DEFAULT_REGIME_TOL):
    """Split the overdamped gamma into its two exponential modes.

    Returns ``(dominant, subdominant)`` with

        dominant    = 1/4 (1 + p/alpha) exp(-(p - alpha) t / 2n)
        subdominant = 1/4 (1 - p/alpha) exp(-(p + alpha) t / 2n)

    so that ``dominant + subdominant == gamma(params, t)``.
    """
    if params.regime(tol) is not Regime.OVERDAMPED:
        raise RegimeError(f"overdamped terms need p > 4k, got p={params.p}, 4k={4 * params.k}")
    t_arr = _as_array(t)
    p, k, n = params.p, params.k, params.n
    alpha = math.sqrt(-params.beta_squared)
    slow = 16.0 * k * k / (p + alpha)  # p - alpha without cancellation
    one_minus = -16.0 * k * k / (alpha * (p + alpha))  # 1 - p/alpha
    dominant = 0.25 * (1.0 + p / alpha) * np.exp(-slow * t_arr / (2 * n))
    subdominant = 0.25 * one_minus * np.exp(-(p + alpha) * t_arr / (2 * n))
    if dominant.ndim == 0:
        return float(dominant), float(subdominant)
    return dominant, subdominant


@dataclass(frozen=True)
class Spectrum4:
    """Rates of the 4x4 generator and the initial state |0><0| in its eigenbasis.

    ``eigenvalues`` are per unit time: ``[0, -p/n, (-p - alpha)/2n, (-p + alpha)/2n]``.
    """

    eigenvalues: tuple
    diagonal_rho0: tuple

    def gamma(self, t: float) -> float:
        """Recombine the two decaying modes into gamma (the other two carry no bias)."""
        _, _, lam3, lam4 = self.eigenvalues
        _, _, c3, c4 = self.diagonal_rho0
        return float((-(c3 * cmath.exp(lam3 * t) + c4 * cmath.exp(lam4 * t))).real)


def spectrum(params: WalkParams, tol: float = DEFAULT_REGIME_TOL) -> Spectrum4:
    consts = damping_constants(params, tol)
    if consts.regime is Regime.CRITICAL:
        raise RegimeError("spectral coordinates are singular at p = 4k; use gamma() for the limit")
    p, n, alpha = params.p, params.n, consts.alpha
    eig = (0j, complex(-p / n), (-p - alpha) / (2 * n), (-p + alpha) / (2 * n))
    rho0 = (0.5 + 0j, 0j, 0.25 * (-1 + p / alpha), 0.25 * (-1 - p / alpha))
    return Spectrum4(eig, rho0)
