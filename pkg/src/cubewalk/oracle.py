"""Brute-force superoperator route, independent of the closed forms in ``dynamics``.

The generator of the decohering walk acting on row-stacked density matrices
(see ``cubewalk.linalg``) is

    L = i(1 (x) H - H (x) 1) - p 1 (x) 1 + p P,
    P = (1/n) sum_i [Pi0^i (x) Pi0^i + Pi1^i (x) Pi1^i],

and ``S_t = expm(L t)``.  For a single coordinate this collapses to the 4x4
matrix returned by :func:`build_exponent_single`; :func:`evolve_full` builds
the un-factored 4^n generator so the tensor-product decomposition can be
checked rather than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .dynamics import WalkParams
from .linalg import expm as _expm
from .linalg import unvec, vec
from .states import DensityState

__all__ = [
    "SuperoperatorExponent",
    "exponent_literal",
    "exponent_from_operators",
    "build_exponent_single",
    "build_exponent_full",
    "expm",
    "evolve_single",
    "evolve_full",
    "MAX_FULL_N",
]

MAX_FULL_N = 4

_I2 = np.eye(2, dtype=np.complex128)
_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
_PI0 = np.array([[1, 0], [0, 0]], dtype=np.complex128)
_PI1 = np.array([[0, 0], [0, 1]], dtype=np.complex128)


@dataclass(frozen=True, eq=False)
class SuperoperatorExponent:
    """Generator of the superoperator per unit time; ``expm(entries * t)`` is S_t."""

    entries: np.ndarray
    params: WalkParams

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def exponent_literal(params: WalkParams) -> np.ndarray:
    """The 4x4 generator written out entry by entry."""
    k, p, n = params.k, params.p, params.n
    ik = 1j * k
    return (
        np.array(
            [
                [0, ik, -ik, 0],
                [ik, -p, 0, -ik],
                [-ik, 0, -p, ik],
                [0, -ik, ik, 0],
            ],
            dtype=np.complex128,
        )
        / n
    )


def exponent_from_operators(params: WalkParams) -> np.ndarray:
    """The same generator assembled from Kronecker products of one-qubit operators."""
    k, p, n = params.k, params.p, params.n
    h_scaled = k * _X  # n * sigma_x, where sigma_x carries k/n
    gen = 1j * (np.kron(_I2, h_scaled) - np.kron(h_scaled, _I2))
    gen = gen - p * np.kron(_I2, _I2) + p * (np.kron(_PI1, _PI1) + np.kron(_PI0, _PI0))
    return gen / n


def build_exponent_single(params: WalkParams) -> SuperoperatorExponent:
    literal = exponent_literal(params)
    assembled = exponent_from_operators(params)
    err = np.max(np.abs(literal - assembled))
    if err > 1e-15:
        raise RuntimeError(f"4x4 generator constructions disagree by {err:.3e}")
    return SuperoperatorExponent(literal, params)


def _embed(op: np.ndarray, site: int, n: int) -> np.ndarray:
    factors = [_I2] * n
    factors[site] = op
    return reduce(np.kron, factors)


def build_exponent_full(params: WalkParams) -> SuperoperatorExponent:
    """The 4^n x 4^n generator from the un-factored sum over coordinates."""
    n = params.n
    if n > MAX_FULL_N:
        raise ValueError(f"full superoperator limited to n <= {MAX_FULL_N}, got n={n}")
    dim = 2**n
    sigma_x = (params.k / n) * _X
    h = sum(_embed(sigma_x, j, n) for j in range(n))
    ident = np.eye(dim, dtype=np.complex128)
    measure = np.zeros((dim * dim, dim * dim), dtype=np.complex128)
    for i in range(n):
        for proj in (_PI0, _PI1):
            big = _embed(proj, i, n)
            measure += np.kron(big, big)
    measure /= n
    gen = 1j * (np.kron(ident, h) - np.kron(h, ident))
    gen = gen - params.p * np.eye(dim * dim) + params.p * measure
    return SuperoperatorExponent(gen, params)


def expm(exponent: SuperoperatorExponent, t: float) -> np.ndarray:
    """S_t for the given generator."""
    if not np.isfinite(t) or t < 0:
        raise ValueError(f"t must be finite and non-negative, got {t}")
    return _expm(exponent.entries * t)


def evolve_single(params: WalkParams, t: float, rho0: DensityState) -> DensityState:
    if rho0.dim != 2:
        raise ValueError(f"single-coordinate evolution needs a 2x2 state, got dim {rho0.dim}")
    s_t = expm(build_exponent_single(params), t)
    return DensityState(unvec(s_t @ vec(rho0.entries)))


def evolve_full(params: WalkParams, t: float, rho0: DensityState) -> DensityState:
    if params.n > MAX_FULL_N:
        raise ValueError(f"full evolution limited to n <= {MAX_FULL_N}, got n={params.n}")
    if rho0.dim != 2**params.n:
        raise ValueError(f"state dimension {rho0.dim} does not match n={params.n}")
    s_t = expm(build_exponent_full(params), t)
    return DensityState(unvec(s_t @ vec(rho0.entries)))
