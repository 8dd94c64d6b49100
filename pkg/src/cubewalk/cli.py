"""Command-line front end.

Exit codes: 0 success, 1 usage or I/O error, 2 regime/domain error,
3 validation failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import analysis as an
from .dynamics import RegimeError, WalkParams, gamma, probabilities
from .output import FORMATS, dumps
from .trajectories import TrajectoryConfig, run_trajectories
from .validation import run_validation

EXIT_OK, EXIT_USAGE, EXIT_REGIME, EXIT_VALIDATION = 0, 1, 2, 3
OUTPUT_DIR_ENV = "CUBEWALK_OUTPUT_DIR"

FIGURES = {
    1: WalkParams(n=5, k=1.0, p=0.0),
    2: WalkParams(n=5, k=1.0, p=0.5),
    3: WalkParams(n=5, k=1.0, p=9.0),
}
FIGURE_T_END = 30.0
FIGURE_POINTS = 1000


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.replace(",", " ").split()]


def _ints(text: str) -> list[int]:
    return [int(v) for v in text.replace(",", " ").split()]


def _add_params(p: argparse.ArgumentParser, n=True, p_rate=True):
    p.add_argument("--k", type=float, default=1.0, help="total energy")
    if n:
        p.add_argument("--n", type=int, default=5, help="hypercube dimension")
    if p_rate:
        p.add_argument("--p", type=float, default=0.0, help="decoherence rate")


def _add_grid(p: argparse.ArgumentParser):
    p.add_argument("--t-start", type=float, default=0.0)
    p.add_argument("--t-end", type=float, default=30.0)
    p.add_argument("--steps", type=int, default=300, help="number of intervals; grid includes both ends")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value file supplying defaults for any flag")
    common.add_argument("--output", "-o", help="output path, '-' for stdout")
    common.add_argument("--format", choices=FORMATS, default="csv")
    common.add_argument("--seed", type=int, default=0)

    parser = _Parser(prog="cubewalk", description="Decohering continuous-time quantum walk on the hypercube.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, help):
        return sub.add_parser(name, parents=[common], help=help)

    cmd = command("probabilities", "P[0], P[1] and gamma over a time grid")
    _add_params(cmd)
    _add_grid(cmd)

    for name in ("mixing-times", "hitting-times"):
        cmd = command(name, f"closed-form {name.replace('-', ' ')} (needs p < 4k)")
        _add_params(cmd)
        cmd.add_argument("--c-max", type=int, default=3)

    cmd = command("tv-distance", "total variation and Hellinger distance to uniform")
    _add_params(cmd)
    group = cmd.add_mutually_exclusive_group(required=True)
    group.add_argument("--t", type=float, help="evaluate gamma(t) for the given walk")
    group.add_argument("--gamma", type=float, help="use this single-coordinate bias directly")

    cmd = command("threshold-scan", "TV at t = d n ln n over a (d, n) grid (p >= 4k)")
    _add_params(cmd, n=False)
    cmd.add_argument("--d-values", type=_floats, default=[0.1, 0.5, 1.0, 2.0])
    cmd.add_argument("--n-values", type=_ints, default=[2**e for e in range(6, 15)])
    cmd.add_argument("--workers", type=int, default=1)

    cmd = command("zeno-scan", "gamma(t) under increasingly strong decoherence")
    _add_params(cmd, p_rate=False)
    cmd.add_argument("--t", type=float, default=1.0)
    cmd.add_argument("--p-values", type=_floats, default=[10.0, 1e2, 1e4, 1e6])

    cmd = command("trajectories", "Monte Carlo unraveling of the measurement model")
    _add_params(cmd)
    cmd.add_argument("--t", type=float, default=5.0)
    cmd.add_argument("--trajectories", type=int, default=10_000)
    cmd.add_argument("--workers", type=int, default=1)

    cmd = command("validate", "run the oracle cross-checks")
    cmd.add_argument("--tol", type=float, default=None, help="override numeric tolerances")
    cmd.add_argument("--trajectories", type=int, default=20_000)

    cmd = command("figure", "time series for one of the reference figures")
    cmd.add_argument("--id", dest="figure_id", type=int, required=True)
    return parser


def _read_config(path: str) -> dict[str, str]:
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, val = line.partition("=")
            if not sep:
                raise UsageError(f"{path}:{lineno}: expected 'key = value'")
            values[key.strip().replace("-", "_")] = val.strip()
    return values


def _apply_config(parser: argparse.ArgumentParser, argv, config_path: str):
    values = _read_config(config_path)
    args = parser.parse_args(argv)
    sub = parser._subparsers._group_actions[0].choices[args.command]
    actions = {a.dest: a for a in sub._actions}
    defaults = {}
    for key, raw in values.items():
        action = actions.get(key)
        if action is None or key in ("config", "help"):
            raise UsageError(f"{config_path}: unknown key {key!r} for command {args.command}")
        try:
            defaults[key] = action.type(raw) if action.type else raw
        except ValueError as exc:
            raise UsageError(f"{config_path}: bad value for {key}: {exc}") from None
        if action.choices is not None and defaults[key] not in action.choices:
            raise UsageError(f"{config_path}: {key} must be one of {list(action.choices)}")
    sub.set_defaults(**defaults)
    return parser.parse_args(argv)


def _params(args) -> WalkParams:
    try:
        return WalkParams(n=args.n, k=args.k, p=args.p)
    except ValueError as exc:
        raise UsageError(f"invalid parameter: {exc}") from None


def _time_grid(start: float, end: float, steps: int) -> np.ndarray:
    if steps < 1:
        raise UsageError("--steps must be at least 1")
    if not 0 <= start <= end:
        raise UsageError("time grid needs 0 <= t_start <= t_end")
    return np.linspace(start, end, steps + 1)


def _probability_table(params: WalkParams, ts: np.ndarray) -> an.Table:
    p0, p1 = probabilities(params, ts)
    g = gamma(params, ts)
    regime = params.regime().value
    rows = [(float(t), float(a), float(b), float(c), regime) for t, a, b, c in zip(ts, p0, p1, g)]
    return an.Table(
        columns=("t", "prob0", "prob1", "gamma", "regime"),
        rows=rows,
        meta={"k": params.k, "n": params.n, "p": params.p},
    )


def cmd_probabilities(args) -> an.Table:
    return _probability_table(_params(args), _time_grid(args.t_start, args.t_end, args.steps))


def cmd_mixing_times(args) -> an.Table:
    params = _params(args)
    rows = [(m.c, m.t) for m in an.mixing_times(params, args.c_max)]
    return an.Table(("c", "t"), rows, {"k": params.k, "n": params.n, "p": params.p})


def cmd_hitting_times(args) -> an.Table:
    params = _params(args)
    rows = [(h.c, h.t, h.p_hit) for h in an.hitting_times(params, args.c_max)]
    return an.Table(("c", "t", "p_hit"), rows, {"k": params.k, "n": params.n, "p": params.p})


def cmd_tv_distance(args) -> an.Table:
    if args.gamma is not None:
        if args.n < 1:
            raise UsageError("invalid parameter: n must be a positive integer")
        n, g = args.n, args.gamma
    else:
        params = _params(args)
        if args.t < 0:
            raise UsageError("--t must be non-negative")
        n, g = params.n, gamma(params, args.t)
    lower, upper = an.tv_bounds(g, n)
    row = (n, g, an.tv_exact(g, n), an.hellinger_product(g, n), lower, upper)
    return an.Table(("n", "gamma", "tv", "hellinger", "tv_lower", "tv_upper"), [row])


def cmd_threshold_scan(args) -> an.Table:
    try:
        params = WalkParams(n=2, k=args.k, p=args.p)
    except ValueError as exc:
        raise UsageError(f"invalid parameter: {exc}") from None
    return an.mixing_threshold_scan(params, args.d_values, args.n_values, workers=args.workers)


def cmd_zeno_scan(args) -> an.Table:
    if args.n < 1 or args.k <= 0:
        raise UsageError("invalid parameter: need n >= 1 and k > 0")
    return an.zeno_scan(args.k, args.n, args.t, args.p_values)


def cmd_trajectories(args) -> an.Table:
    params = _params(args)
    try:
        config = TrajectoryConfig(params, args.t, args.trajectories, args.seed)
    except ValueError as exc:
        raise UsageError(f"invalid parameter: {exc}") from None
    res = run_trajectories(config, workers=args.workers)
    n = params.n
    rows = [
        (format(i, f"0{n}b"), int(c), float(f), float(s))
        for i, (c, f, s) in enumerate(zip(res.counts, res.frequencies, res.stderr))
    ]
    meta = {"k": params.k, "n": n, "p": params.p, "t": args.t, "trajectories": args.trajectories, "seed": args.seed}
    for i, (m, s) in enumerate(zip(res.marginal_prob1(), res.marginal_stderr())):
        meta[f"prob1_q{i}"] = float(m)
        meta[f"prob1_q{i}_stderr"] = float(s)
    return an.Table(("outcome", "count", "frequency", "stderr"), rows, meta)


def cmd_figure(args) -> an.Table:
    if args.figure_id not in FIGURES:
        raise UsageError(f"unknown figure id {args.figure_id}; choose from {sorted(FIGURES)}")
    params = FIGURES[args.figure_id]
    table = _probability_table(params, np.linspace(0.0, FIGURE_T_END, FIGURE_POINTS))
    table.meta = {"figure": args.figure_id, **table.meta, "columns": " ".join(table.columns)}
    return table


def cmd_validate(args) -> an.Table:
    return run_validation(seed=args.seed, tol=args.tol, trajectories=args.trajectories)


COMMANDS = {
    "probabilities": cmd_probabilities,
    "mixing-times": cmd_mixing_times,
    "hitting-times": cmd_hitting_times,
    "tv-distance": cmd_tv_distance,
    "threshold-scan": cmd_threshold_scan,
    "zeno-scan": cmd_zeno_scan,
    "trajectories": cmd_trajectories,
    "validate": cmd_validate,
    "figure": cmd_figure,
}


def _destination(args) -> str:
    if args.output:
        return args.output
    out_dir = os.environ.get(OUTPUT_DIR_ENV)
    if out_dir:
        name = args.command if args.command != "figure" else f"figure{args.figure_id}"
        return str(Path(out_dir) / f"{name}.{args.format}")
    return "-"


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.config:
            args = _apply_config(build_parser(), argv, args.config)
        table = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"cubewalk: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RegimeError as exc:
        print(f"cubewalk: regime error: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except OSError as exc:
        print(f"cubewalk: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"cubewalk: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    text = dumps(table, args.format)
    dest = _destination(args)
    try:
        if dest == "-":
            try:
                sys.stdout.write(text)
                sys.stdout.flush()
            except BrokenPipeError:
                pass
        else:
            Path(dest).parent.mkdir(parents=True, exist_ok=True)
            Path(dest).write_text(text)
    except OSError as exc:
        print(f"cubewalk: error writing {dest}: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if args.command == "validate":
        failed = [r[0] for r in table.rows if not r[3]]
        for name in failed:
            print(f"cubewalk: validation failed: {name}", file=sys.stderr)
        return EXIT_VALIDATION if failed else EXIT_OK
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
