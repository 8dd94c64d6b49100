"""Monte Carlo unraveling of the measurement model.

Each trajectory is a pure product state evolved under ``exp(-iHt)``.  Measurement
events arrive as a Poisson process of total rate p; each event picks one of the
n coordinates uniformly and projects it onto |0> or |1>.  At ``t_final`` the
whole register is read out.  Averaged over trajectories this reproduces the
density-matrix evolution, so the empirical outcome frequencies are an
independent check on the superoperator and the closed forms.

Trajectories are simulated in fixed-size blocks, vectorized over the block.
Block ``b`` draws from ``SeedSequence(seed, spawn_key=(b,))``, so the counts
depend only on ``(seed, num_trajectories)`` and not on how many workers run.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dynamics import WalkParams, prob1
from .states import CubeDistribution

__all__ = [
    "TrajectoryConfig",
    "TrajectoryResult",
    "run_trajectories",
    "ConvergenceStudy",
    "convergence_study",
    "MAX_TRAJECTORY_N",
    "BLOCK_SIZE",
]

MAX_TRAJECTORY_N = 20
BLOCK_SIZE = 4096


@dataclass(frozen=True)
class TrajectoryConfig:
    params: WalkParams
    t_final: float
    num_trajectories: int
    seed: int = 0

    def __post_init__(self):
        if self.num_trajectories < 1:
            raise ValueError("num_trajectories must be at least 1")
        if not (math.isfinite(self.t_final) and self.t_final >= 0):
            raise ValueError(f"t_final must be finite and non-negative, got {self.t_final}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.params.n > MAX_TRAJECTORY_N:
            raise ValueError(f"trajectory simulation limited to n <= {MAX_TRAJECTORY_N}")


@dataclass(frozen=True, eq=False)
class TrajectoryResult:
    config: TrajectoryConfig
    counts: np.ndarray

    @property
    def num_trajectories(self) -> int:
        return self.config.num_trajectories

    @property
    def frequencies(self) -> np.ndarray:
        return self.counts / self.num_trajectories

    @property
    def stderr(self) -> np.ndarray:
        """Binomial standard error of each outcome frequency."""
        f = self.frequencies
        return np.sqrt(f * (1 - f) / self.num_trajectories)

    @property
    def distribution(self) -> CubeDistribution:
        return CubeDistribution(n=self.config.params.n, probabilities=self.frequencies)

    def marginal_prob1(self) -> np.ndarray:
        return self.distribution.marginal_prob1()

    def marginal_stderr(self) -> np.ndarray:
        m = self.marginal_prob1()
        return np.sqrt(m * (1 - m) / self.num_trajectories)


def _rotate(psi: np.ndarray, rows: np.ndarray, angle: np.ndarray) -> None:
    """Apply exp(-i angle X) to every coordinate of the selected trajectories."""
    c = np.cos(angle)[:, None]
    s = np.sin(angle)[:, None]
    a0 = psi[rows, :, 0]
    a1 = psi[rows, :, 1]
    psi[rows, :, 0] = c * a0 - 1j * s * a1
    psi[rows, :, 1] = c * a1 - 1j * s * a0


def _simulate_block(params: WalkParams, t_final: float, size: int, rng: np.random.Generator) -> np.ndarray:
    n, k, p = params.n, params.k, params.p
    omega = k / n
    psi = np.zeros((size, n, 2), dtype=np.complex128)
    psi[:, :, 0] = 1.0
    clock = np.zeros(size)

    if p > 0:
        active = np.arange(size)
        while active.size:
            dt = rng.exponential(1.0 / p, active.size)
            t_next = clock[active] + dt
            done = t_next >= t_final
            fin = active[done]
            _rotate(psi, fin, omega * (t_final - clock[fin]))
            clock[fin] = t_final

            go = active[~done]
            _rotate(psi, go, omega * dt[~done])
            clock[go] = t_next[~done]
            site = rng.integers(0, n, go.size)
            p_one = np.abs(psi[go, site, 1]) ** 2
            one = rng.random(go.size) < p_one
            psi[go, site, 0] = np.where(one, 0.0, 1.0)
            psi[go, site, 1] = np.where(one, 1.0, 0.0)
            active = go
    else:
        _rotate(psi, np.arange(size), np.full(size, omega * t_final))

    bits = rng.random((size, n)) < np.abs(psi[:, :, 1]) ** 2
    weights = 1 << np.arange(n - 1, -1, -1)
    index = bits.astype(np.int64) @ weights
    return np.bincount(index, minlength=2**n)


def run_trajectories(config: TrajectoryConfig, workers: int | None = None) -> TrajectoryResult:
    """Empirical outcome counts over ``config.num_trajectories`` unravelings."""
    total = config.num_trajectories
    blocks = [(b, min(BLOCK_SIZE, total - b * BLOCK_SIZE)) for b in range(-(-total // BLOCK_SIZE))]

    def one(block):
        b, size = block
        rng = np.random.default_rng(np.random.SeedSequence(config.seed, spawn_key=(b,)))
        return _simulate_block(config.params, config.t_final, size, rng)

    if workers and workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(one, blocks))
    else:
        parts = [one(blk) for blk in blocks]
    counts = np.sum(parts, axis=0)
    return TrajectoryResult(config, counts)


@dataclass(frozen=True)
class ConvergenceStudy:
    sizes: tuple
    rms_error: tuple
    slope: float


def convergence_study(
    params: WalkParams,
    t_final: float,
    sizes=(1_000, 10_000, 100_000),
    replicates: int = 16,
    seed: int = 0,
    workers: int | None = None,
) -> ConvergenceStudy:
    """Log-log slope of the max per-coordinate marginal error against ensemble size.

    At each size the error is the root-mean-square over ``replicates`` independent
    ensembles, which estimates the scaling rather than one noisy draw of it.
    """
    target = prob1(params, t_final)
    replicate_seeds = np.random.SeedSequence(seed).generate_state(replicates * len(sizes), dtype=np.uint64)
    rms = []
    for i, size in enumerate(sizes):
        errs = []
        for r in range(replicates):
            cfg = TrajectoryConfig(params, t_final, size, int(replicate_seeds[i * replicates + r]))
            res = run_trajectories(cfg, workers)
            errs.append(np.max(np.abs(res.marginal_prob1() - target)))
        rms.append(float(np.sqrt(np.mean(np.square(errs)))))
    slope = float(np.polyfit(np.log(sizes), np.log(rms), 1)[0])
    return ConvergenceStudy(tuple(sizes), tuple(rms), slope)
