"""Dense linear algebra helpers: matrix exponential and density-matrix vectorization.

Vectorization convention: ``vec`` stacks *rows* (numpy's C order), so that

    vec(X @ rho @ Y) == kron(X, Y.T) @ vec(rho).

With this convention the generator ``i(1 (x) H - H (x) 1)`` evolves
``rho -> U rho U^dagger`` for ``U = exp(-iHt)`` whenever H is real symmetric.
"""

from __future__ import annotations

import numpy as np

__all__ = ["expm", "vec", "unvec"]

# Higham (2005) degree-13 Pade coefficients and its 1-norm bound
_PADE13 = (
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
)
_THETA13 = 5.371920351148152


def expm(a: np.ndarray) -> np.ndarray:
    """Matrix exponential by scaling and squaring around a [13/13] Pade core.

    The matrix is scaled by ``2**-s`` until its 1-norm is at most theta_13,
    the rational approximant is formed from even powers, and the result is
    squared ``s`` times.
    """
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expm needs a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("expm: matrix has non-finite entries")
    a = a.astype(np.complex128 if np.iscomplexobj(a) else np.float64)
    dim = a.shape[0]
    norm = np.linalg.norm(a, 1)
    if norm == 0.0:
        return np.eye(dim, dtype=a.dtype)
    s = 0
    if norm > _THETA13:
        s = int(np.ceil(np.log2(norm / _THETA13)))
    a = a / (2.0**s)

    b = _PADE13
    ident = np.eye(dim, dtype=a.dtype)
    a2 = a @ a
    a4 = a2 @ a2
    a6 = a4 @ a2
    u = a @ (a6 @ (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident)
    v = a6 @ (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident
    r = np.linalg.solve(v - u, v + u)
    for _ in range(s):
        r = r @ r
    return r


def vec(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho).reshape(-1)


def unvec(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v)
    d = int(round(np.sqrt(v.size)))
    if d * d != v.size:
        raise ValueError(f"vector of length {v.size} is not a vectorized square matrix")
    return v.reshape(d, d)
