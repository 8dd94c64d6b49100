"""Cross-checks of the closed forms against the brute-force oracles.

``run_validation`` is what ``cubewalk validate`` executes.  Every random draw
comes from a generator seeded by the caller, so the report is reproducible.
"""

from __future__ import annotations

import numpy as np

from . import analysis as an
from .dynamics import Regime, WalkParams, gamma, prob0, prob1, spectrum
from .oracle import build_exponent_single, evolve_full, evolve_single
from .states import CubeDistribution, DensityState
from .trajectories import TrajectoryConfig, run_trajectories

__all__ = ["run_validation", "random_params", "random_qubit_state", "set_distance"]


def random_params(rng: np.random.Generator, n_max: int = 10) -> WalkParams:
    return WalkParams(
        n=int(rng.integers(1, n_max + 1)),
        k=float(rng.uniform(1e-3, 4.0)),
        p=float(rng.uniform(0.0, 20.0)),
    )


def random_qubit_state(rng: np.random.Generator) -> DensityState:
    """A random mixed qubit state (Ginibre construction)."""
    g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    rho = g @ g.conj().T
    return DensityState(rho / np.trace(rho))


def set_distance(a, b) -> float:
    """Symmetric nearest-neighbour distance between two multisets of eigenvalues."""
    gap = np.abs(np.asarray(a)[:, None] - np.asarray(b)[None, :])
    return float(max(gap.min(axis=0).max(), gap.min(axis=1).max()))


def _closed_form_vs_expm(rng, draws):
    worst = 0.0
    ket0 = DensityState.basis("0")
    for _ in range(draws):
        params = random_params(rng)
        t = float(rng.uniform(0.0, 50.0))
        rho = evolve_single(params, t, ket0)
        worst = max(worst, abs(rho.diagonal()[0] - prob0(params, t)))
    return worst


def _eigenvalues(rng, draws):
    worst = 0.0
    for _ in range(draws):
        params = random_params(rng)
        if params.regime() is Regime.CRITICAL:
            continue
        numeric = np.linalg.eigvals(build_exponent_single(params).entries)
        formula = np.array(spectrum(params).eigenvalues)
        worst = max(worst, set_distance(numeric, formula))
    return worst


def _factorization(rng, n, draws):
    worst = 0.0
    for _ in range(draws):
        params = WalkParams(n=n, k=float(rng.uniform(0.1, 4.0)), p=float(rng.uniform(0.0, 10.0)))
        t = float(rng.uniform(0.0, 10.0))
        singles = [random_qubit_state(rng) for _ in range(n)]
        full0 = singles[0]
        for s in singles[1:]:
            full0 = full0.kron(s)
        evolved = evolve_full(params, t, full0).entries
        product = evolve_single(params, t, singles[0])
        for s in singles[1:]:
            product = product.kron(evolve_single(params, t, s))
        worst = max(worst, float(np.max(np.abs(evolved - product.entries))))
    return worst


def _distances(rng, draws):
    tv_err = hell_err = 0.0
    sandwich_violation = 0.0
    for _ in range(draws):
        g = float(rng.uniform(-0.5, 0.5))
        n = int(rng.integers(1, 13))
        full = CubeDistribution.product(n, g).to_full()
        unif = np.full(2**n, 2.0**-n)
        tv = an.tv_exact(g, n)
        tv_err = max(tv_err, abs(tv - an.tv_enumerate(full, unif)))
        hell_err = max(hell_err, abs(an.hellinger_product(g, n) ** 2 - an.hellinger_enumerate(full, unif) ** 2))
        lower, upper = an.tv_bounds(g, n)
        sandwich_violation = max(sandwich_violation, lower - tv, tv - upper)
    return tv_err, hell_err, max(sandwich_violation, 0.0)


def _mixing_and_hitting(rng, draws):
    root = deriv = 0.0
    for _ in range(draws):
        params = WalkParams(n=int(rng.integers(1, 11)), k=1.0, p=float(rng.uniform(0.0, 3.9)))
        for m in an.mixing_times(params, 3):
            root = max(root, abs(gamma(params, m.t)))
        for h in an.hitting_times(params, 2):
            d1, _ = an.hit_local_max_residual(params, h.t)
            per_qubit = abs(prob1(params, h.t) - h.p_hit ** (1.0 / params.n))
            deriv = max(deriv, abs(d1), per_qubit)
    return root, deriv


def run_validation(seed: int = 0, tol: float | None = None, trajectories: int = 20_000) -> an.Table:
    """Run every oracle check and return one row per check.

    ``tol`` overrides the numeric tolerances of the deterministic checks.
    """
    rng = np.random.default_rng(seed)

    def limit(default):
        return default if tol is None else tol

    rows = []

    def record(name, measured, tolerance):
        rows.append((name, float(measured), float(tolerance), bool(measured <= tolerance)))

    record("closed_form_vs_expm", _closed_form_vs_expm(rng, 200), limit(1e-10))
    record("generator_eigenvalues", _eigenvalues(rng, 100), limit(1e-10))
    record("factorization_n2", _factorization(rng, 2, 20), limit(1e-10))
    record("factorization_n3", _factorization(rng, 3, 10), limit(1e-10))
    tv_err, hell_err, sandwich = _distances(rng, 300)
    record("tv_exact_vs_enumeration", tv_err, limit(1e-12))
    record("hellinger_product_vs_enumeration", hell_err, limit(1e-12))
    record("hellinger_tv_sandwich_violation", sandwich, 0.0)
    root, deriv = _mixing_and_hitting(rng, 20)
    record("mixing_time_root_residual", root, limit(1e-10))
    record("hitting_time_residual", deriv, limit(1e-8))

    params = WalkParams(n=3, k=1.0, p=0.5)
    res = run_trajectories(TrajectoryConfig(params, 5.0, trajectories, seed))
    z = np.abs(res.marginal_prob1() - prob1(params, 5.0)) / res.marginal_stderr()
    record("trajectory_marginals_max_sigma", float(np.max(z)), 3.0)

    return an.Table(
        columns=("check", "measured", "tolerance", "passed"),
        rows=rows,
        meta={"seed": seed, "all_passed": all(r[3] for r in rows)},
    )
