"""gamma(t) at fixed t as the decoherence rate grows: the walk freezes at the origin."""

import argparse

import numpy as np

from cubewalk.analysis import zeno_scan
from cubewalk.output import dumps

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=float, default=1.0)
    ap.add_argument("--n", type=int, default=5)
    ap.add_argument("--t", type=float, default=1.0)
    args = ap.parse_args()
    p_values = np.logspace(np.log10(4.5 * args.k), 6, 25).tolist()
    print(dumps(zeno_scan(args.k, args.n, args.t, p_values), "csv"), end="")
