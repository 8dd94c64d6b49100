"""State containers: density matrices and distributions over {0,1}^n."""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

__all__ = ["DensityState", "CubeDistribution"]


@dataclass(frozen=True, eq=False)
class DensityState:
    """A d x d density matrix.  Construction checks the physical invariants."""

    entries: np.ndarray
    tol: float = 1e-10

    def __post_init__(self):
        m = np.array(self.entries, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)
        self.check(self.tol)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def check(self, tol: float) -> None:
        m = self.entries
        if np.max(np.abs(m - m.conj().T)) > tol:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > tol:
            raise ValueError(f"density matrix trace is {np.trace(m)}, expected 1")
        if np.min(np.linalg.eigvalsh(0.5 * (m + m.conj().T))) < -tol:
            raise ValueError("density matrix is not positive semidefinite")

    @classmethod
    def pure(cls, psi, tol: float = 1e-10) -> "DensityState":
        psi = np.asarray(psi, dtype=np.complex128)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()), tol)

    @classmethod
    def basis(cls, bits: str, tol: float = 1e-10) -> "DensityState":
        """``basis("01")`` is |01><01|; the first character is the most significant qubit."""
        d = 2 ** len(bits)
        m = np.zeros((d, d), dtype=np.complex128)
        idx = int(bits, 2)
        m[idx, idx] = 1.0
        return cls(m, tol)

    def kron(self, other: "DensityState") -> "DensityState":
        return DensityState(np.kron(self.entries, other.entries), max(self.tol, other.tol))

    def diagonal(self) -> np.ndarray:
        return self.entries.diagonal().real.copy()


@dataclass(frozen=True, eq=False)
class CubeDistribution:
    """A distribution over n-bit strings, either as a product of identical
    marginals ``P(0) = 1/2 + gamma`` or as an explicit vector of length 2^n.

    Outcome indices read the bit string with coordinate 0 as the most
    significant bit, matching ``np.kron`` ordering.
    """

    n: int
    gamma: float | None = None
    probabilities: np.ndarray | None = None

    def __post_init__(self):
        if (self.gamma is None) == (self.probabilities is None):
            raise ValueError("give exactly one of gamma (product form) or probabilities (full form)")
        if self.gamma is not None:
            if not -0.5 <= self.gamma <= 0.5:
                raise ValueError(f"gamma must lie in [-1/2, 1/2], got {self.gamma}")
        else:
            probs = np.asarray(self.probabilities, dtype=float)
            if probs.shape != (2**self.n,):
                raise ValueError(f"expected {2**self.n} probabilities, got shape {probs.shape}")
            if np.any(probs < 0) or abs(probs.sum() - 1.0) > 1e-12:
                raise ValueError("probabilities must be non-negative and sum to 1")
            object.__setattr__(self, "probabilities", probs)

    @classmethod
    def product(cls, n: int, gamma: float) -> "CubeDistribution":
        return cls(n=n, gamma=float(gamma))

    @classmethod
    def uniform(cls, n: int) -> "CubeDistribution":
        return cls(n=n, gamma=0.0)

    @property
    def is_product(self) -> bool:
        return self.gamma is not None

    def to_full(self) -> np.ndarray:
        if not self.is_product:
            return self.probabilities
        if self.n > 24:
            raise ValueError("refusing to enumerate more than 2^24 outcomes")
        single = np.array([0.5 + self.gamma, 0.5 - self.gamma])
        return reduce(np.kron, [single] * self.n)

    def marginal_prob1(self) -> np.ndarray:
        """P(x_i = 1) for each coordinate i."""
        if self.is_product:
            return np.full(self.n, 0.5 - self.gamma)
        probs = self.probabilities.reshape((2,) * self.n)
        return np.array(
            [probs.sum(axis=tuple(j for j in range(self.n) if j != i))[1] for i in range(self.n)]
        )
