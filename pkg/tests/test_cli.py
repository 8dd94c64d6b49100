import json
import math

import numpy as np
import pytest

from cubewalk import analysis as an
from cubewalk.cli import EXIT_REGIME, EXIT_USAGE, EXIT_VALIDATION, main
from cubewalk.dynamics import WalkParams, probabilities
from cubewalk.output import dumps, read_csv, read_json


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_mixing_times_table(capsys):
    code, out, _ = run(capsys, "mixing-times", "--k", "1", "--n", "5", "--p", "0", "--c-max", "3")
    assert code == 0
    t = read_csv(out).column("t")
    assert np.allclose(t, [5 * math.pi / 4, 15 * math.pi / 4, 25 * math.pi / 4], rtol=0, atol=1e-12)


def test_hitting_times_table(capsys):
    code, out, _ = run(capsys, "hitting-times", "--p", "0.5", "--c-max", "0", "--format", "json")
    assert code == 0
    table = read_json(out)
    expected = an.hitting_times(WalkParams(5, 1.0, 0.5), 0)[0]
    assert table.rows == [(0, expected.t, expected.p_hit)]


@pytest.mark.parametrize("cmd", ["mixing-times", "hitting-times"])
def test_regime_error_exit(capsys, cmd):
    code, out, err = run(capsys, cmd, "--p", "4")
    assert code == EXIT_REGIME
    assert out == ""
    assert "p < 4k" in err


def test_invalid_parameter_names_field(capsys):
    code, _, err = run(capsys, "probabilities", "--n", "0")
    assert code == EXIT_USAGE
    assert "n" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["probabilities", "--steps", "0"],
        ["probabilities", "--t-start", "5", "--t-end", "1"],
        ["figure", "--id", "4"],
        ["trajectories", "--trajectories", "0"],
        ["tv-distance", "--gamma", "0.7"],
    ],
)
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == EXIT_USAGE
    assert out == ""
    assert err.startswith("cubewalk: error")


@pytest.mark.parametrize(
    "argv",
    [
        ["nonsense"],
        ["probabilities", "--format", "xml"],
        ["tv-distance", "--t", "1", "--gamma", "0.1"],
    ],
)
def test_parser_errors_exit_one(capsys, argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == EXIT_USAGE


def test_probability_grid_includes_endpoints(capsys):
    code, out, _ = run(capsys, "probabilities", "--t-start", "0", "--t-end", "3", "--steps", "3")
    assert code == 0
    table = read_csv(out)
    assert table.column("t") == [0.0, 1.0, 2.0, 3.0]
    assert table.column("regime") == ["underdamped"] * 4


@pytest.mark.parametrize("fmt, reader", [("csv", read_csv), ("json", read_json)])
def test_round_trip_is_exact(capsys, fmt, reader):
    code, out, _ = run(capsys, "probabilities", "--p", "0.5", "--steps", "50", "--format", fmt)
    assert code == 0
    table = reader(out)
    ts = np.linspace(0.0, 30.0, 51)
    p0, p1 = probabilities(WalkParams(5, 1.0, 0.5), ts)
    assert table.column("t") == ts.tolist()
    assert table.column("prob0") == p0.tolist()
    assert table.column("prob1") == p1.tolist()


def test_dumps_round_trip_awkward_floats():
    values = [0.1, 1 / 3, 5e-324, 1.7976931348623157e308, -2.0**-40, math.pi]
    table = an.Table(("x",), [(v,) for v in values], {"note": "a"})
    assert read_csv(dumps(table, "csv")).column("x") == values
    assert read_json(dumps(table, "json")).column("x") == values


@pytest.mark.parametrize("fig, params", [(1, (1.0, 5, 0.0)), (2, (1.0, 5, 0.5)), (3, (1.0, 5, 9.0))])
def test_figure_parameters(capsys, fig, params):
    code, out, _ = run(capsys, "figure", "--id", str(fig))
    assert code == 0
    assert out.startswith("# figure")
    table = read_csv(out)
    assert (table.meta["k"], table.meta["n"], table.meta["p"]) == params
    assert table.meta["columns"] == "t prob0 prob1 gamma regime"
    t = table.column("t")
    assert len(t) == 1000
    assert t[0] == 0.0 and t[-1] == 30.0


def test_figure_one_matches_cosine(capsys):
    _, out, _ = run(capsys, "figure", "--id", "1")
    table = read_csv(out)
    t = np.array(table.column("t"))
    assert np.max(np.abs(np.array(table.column("prob0")) - np.cos(t / 5) ** 2)) <= 1e-12


def test_config_file_defaults_and_override(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sweep\np = 0.5\nc-max = 2\nformat = json\n")
    code, out, _ = run(capsys, "mixing-times", "--config", str(cfg))
    assert code == 0
    table = read_json(out)
    assert len(table.rows) == 2
    assert table.meta["p"] == 0.5
    code, out, _ = run(capsys, "mixing-times", "--config", str(cfg), "--p", "0")
    assert read_json(out).rows[0][1] == pytest.approx(5 * math.pi / 4, abs=1e-12)


@pytest.mark.parametrize("text", ["bogus = 1\n", "p = abc\n", "just words\n"])
def test_bad_config(capsys, tmp_path, text):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text(text)
    code, _, err = run(capsys, "mixing-times", "--config", str(cfg))
    assert code == EXIT_USAGE
    assert err


def test_missing_config(capsys, tmp_path):
    code, _, _ = run(capsys, "mixing-times", "--config", str(tmp_path / "absent.cfg"))
    assert code == EXIT_USAGE


def test_output_dir_env(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("CUBEWALK_OUTPUT_DIR", str(tmp_path / "out"))
    code, out, _ = run(capsys, "figure", "--id", "2", "--format", "json")
    assert code == 0
    assert out == ""
    payload = json.loads((tmp_path / "out" / "figure2.json").read_text())
    assert payload["meta"]["p"] == 0.5


def test_explicit_output_path(capsys, tmp_path):
    dest = tmp_path / "z.csv"
    code, out, _ = run(capsys, "zeno-scan", "-o", str(dest))
    assert code == 0 and out == ""
    assert read_csv(dest.read_text()).columns == ("p", "gamma", "p_over_alpha", "mixing_bound")


def test_tv_distance_from_gamma(capsys):
    code, out, _ = run(capsys, "tv-distance", "--gamma", "0.5", "--n", "1")
    assert code == 0
    row = read_csv(out).records()[0]
    assert row["tv"] == pytest.approx(1.0, abs=1e-15)


def test_threshold_scan_command(capsys):
    code, out, _ = run(
        capsys, "threshold-scan", "--p", "5", "--d-values", "0.05,1", "--n-values", "64,256", "--workers", "2"
    )
    assert code == 0
    table = read_csv(out)
    assert table.column("d") == [0.05, 0.05, 1.0, 1.0]
    assert table.column("n") == [64, 256, 64, 256]


def test_threshold_scan_underdamped_rejected(capsys):
    code, _, _ = run(capsys, "threshold-scan", "--p", "2")
    assert code == EXIT_REGIME


def test_trajectories_deterministic(capsys):
    argv = ["trajectories", "--n", "3", "--p", "0.5", "--t", "5", "--trajectories", "5000", "--seed", "7"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv, "--workers", "3")
    assert a == b
    table = read_csv(a, text_columns=("outcome",))
    assert sum(table.column("count")) == 5000
    assert table.column("outcome") == [format(i, "03b") for i in range(8)]


def test_trajectory_outcomes_stay_bitstrings(capsys):
    _, out, _ = run(capsys, "trajectories", "--n", "2", "--trajectories", "100")
    assert read_csv(out, text_columns=("outcome",)).column("outcome") == ["00", "01", "10", "11"]


def test_validate_byte_identical(capsys):
    code_a, a, _ = run(capsys, "validate", "--seed", "42", "--trajectories", "5000")
    code_b, b, _ = run(capsys, "validate", "--seed", "42", "--trajectories", "5000")
    assert code_a == code_b == 0
    assert a == b
    table = read_csv(a)
    assert all(table.column("passed"))
    closed = table.records()[0]
    assert closed["check"] == "closed_form_vs_expm"
    assert closed["measured"] < 1e-10


def test_validate_corrupted_tolerance(capsys, tmp_path):
    dest = tmp_path / "report.csv"
    code, _, err = run(capsys, "validate", "--tol", "1e-30", "--trajectories", "2000", "-o", str(dest))
    assert code == EXIT_VALIDATION
    assert "validation failed" in err
    assert not read_csv(dest.read_text()).meta["all_passed"]
