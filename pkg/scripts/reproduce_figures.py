"""Write the three reference time series (P[0], P[1], gamma on t in [0, 30]) as CSV."""

import argparse
from pathlib import Path

from cubewalk.cli import main


def run(out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    for fig in (1, 2, 3):
        dest = out_dir / f"figure{fig}.csv"
        if main(["figure", "--id", str(fig), "-o", str(dest)]) != 0:
            raise SystemExit(f"figure {fig} failed")
        print(f"wrote {dest}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("results"))
    run(ap.parse_args().out)
