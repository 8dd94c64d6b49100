"""Total variation to uniform at t = d n ln n, above and below the threshold constant."""

import argparse
import math

from cubewalk.analysis import classify_threshold, mixing_threshold_scan, threshold_constant
from cubewalk.dynamics import WalkParams
from cubewalk.output import dumps


def run(k: float, p: float, workers: int) -> str:
    params = WalkParams(n=2, k=k, p=p)
    d_star = threshold_constant(params)
    d_values = [f * d_star for f in (0.1, 0.5, 1.0, 2.0, 4.0)]
    n_values = [2**e for e in range(6, 15)]
    table = mixing_threshold_scan(params, d_values, n_values, workers=workers)
    for d, verdict in classify_threshold(table).items():
        print(f"# d = {d:.4g} ({d / d_star:.2g} x threshold): {verdict}")
    return dumps(table, "csv")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=float, default=1.0)
    ap.add_argument("--p", type=float, default=5.0)
    ap.add_argument("--workers", type=int, default=4)
    args = ap.parse_args()
    if args.p < 4 * args.k or not math.isfinite(args.p):
        raise SystemExit("threshold scan needs p >= 4k")
    print(run(args.k, args.p, args.workers), end="")
