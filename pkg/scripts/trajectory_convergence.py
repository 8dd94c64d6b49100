"""Monte Carlo marginals against the closed form, and the error scaling with ensemble size."""

import argparse

from cubewalk.dynamics import WalkParams, prob1
from cubewalk.trajectories import TrajectoryConfig, convergence_study, run_trajectories

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--k", type=float, default=1.0)
    ap.add_argument("--p", type=float, default=0.5)
    ap.add_argument("--t", type=float, default=5.0)
    ap.add_argument("--trajectories", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=None)
    args = ap.parse_args()

    params = WalkParams(args.n, args.k, args.p)
    res = run_trajectories(TrajectoryConfig(params, args.t, args.trajectories, args.seed), args.workers)
    exact = prob1(params, args.t)
    print(f"closed-form P[1] = {exact:.6f}")
    for i, (m, s) in enumerate(zip(res.marginal_prob1(), res.marginal_stderr())):
        print(f"coordinate {i}: {m:.6f} +/- {s:.6f}  (z = {(m - exact) / s:+.2f})")

    study = convergence_study(params, args.t, seed=args.seed, workers=args.workers)
    for size, err in zip(study.sizes, study.rms_error):
        print(f"N = {size:>7d}: rms max-marginal error {err:.3e}")
    print(f"log-log slope {study.slope:.3f} (expected -0.5)")
