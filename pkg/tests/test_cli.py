import json

import numpy as np
import pytest

from fockops import ConvergenceError, TruncationError, cli
from fockops.cli import parse_range, run
from fockops.output import read_csv_meta


def _json(path):
    return json.loads(path.read_text())


@pytest.mark.parametrize(
    "text, expected",
    [("0:1:3", [0, 0.5, 1]), ("1:100:3:log", [1, 10, 100]), ("2:2:1", [2])],
)
def test_parse_range(text, expected):
    np.testing.assert_allclose(parse_range(text), expected)


@pytest.mark.parametrize("text", ["0:1", "0:1:0", "a:1:2", "0:1:3:lin", "0:1:3:log"])
def test_parse_range_rejects(text):
    with pytest.raises(Exception):
        parse_range(text)


def test_norm_estimate_example(tmp_path):
    assert run(["norm-estimate", "--p", "2", "--t", "2", "--s", "2", "--n", "1", "--out", str(tmp_path), "--plot"]) == 0
    doc = _json(tmp_path / "norm-estimate.json")
    assert set(doc) >= {"meta", "inputs", "results"}
    assert doc["results"]["lower"] >= 1.95
    assert doc["results"]["upper"] == pytest.approx(2.0, rel=1e-14)
    svg = (tmp_path / "norm-estimate.svg").read_text()
    assert "<svg" in svg and "<script" not in svg
    meta, rows = read_csv_meta(tmp_path / "norm-estimate.csv")
    assert len(rows) == 9 and meta["experiment"] == "norm-estimate"


def test_threshold_scan_example(tmp_path):
    argv = ["threshold-scan", "--p", "2", "--t-range", "0.5:2:16", "--s-range", "0.5:2:16", "--out", str(tmp_path), "--plot"]
    assert run(argv) == 0
    _, rows = read_csv_meta(tmp_path / "threshold-scan.csv")
    assert len(rows) == 256
    for row in rows:
        t, s = float(row["t"]), float(row["s"])
        on = abs(2 * t - 2 * s) / (2 * t) <= 1e-12
        assert row["status"] == ("bounded" if on else "unbounded")
        if not on:
            assert float(row["ratio"]) > 1e3
    assert (tmp_path / "threshold-scan.svg").exists()


def test_reduce_ab_example(tmp_path):
    assert run(["reduce-ab", "--a", "1", "--b", "3", "--s", "1", "--p", "1", "--out", str(tmp_path)]) == 0
    res = _json(tmp_path / "reduce-ab.json")["results"]
    assert res["condition"] is True
    assert res["classification"] == "bounded"
    assert (res["t_reduced"], res["s_reduced"]) == (4.0, 2.0)


@pytest.mark.parametrize(
    "argv, key, bound",
    [
        (["moments", "--n", "2", "--max-entry", "2", "--p", "2,4"], "max_rel_err", 1e-6),
        (["verify-reproducing", "--points", "4"], "max_residual", 1e-8),
        (["schur-bound", "--p", "4", "--t", "1", "--s", "2", "--n", "2"], "max_residual", 1e-10),
        (["radial-check", "--t", "1", "--profile", "indicator", "--radii", "0.5:0.5:1"], "max_residual", 1e-5),
        (["radial-check", "--t", "2", "--profile", "yexp"], "max_residual", 1e-6),
    ],
    ids=["moments", "reproducing", "schur", "radial-indicator", "radial-yexp"],
)
def test_subcommands_succeed(tmp_path, argv, key, bound):
    assert run(argv + ["--out", str(tmp_path), "--format", "json"]) == 0
    files = list(tmp_path.iterdir())
    assert [f.suffix for f in files] == [".json"]
    assert _json(files[0])["results"][key] <= bound


def test_lemma13_subcommand(tmp_path):
    assert run(["lemma13-limit", "--p", "2", "--c", "0.5,1,2", "--out", str(tmp_path)]) == 0
    res = _json(tmp_path / "lemma13-limit.json")["results"]
    assert res["target"] == pytest.approx(8 * np.pi)
    assert all(v["rel_err"] <= 1e-2 for v in res["by_c"].values())


def test_output_dir_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.ENV_OUTPUT_DIR, str(tmp_path / "envout"))
    assert run(["schur-bound", "--p", "2", "--t", "1", "--s", "1", "--format", "csv"]) == 0
    assert (tmp_path / "envout" / "schur-bound.csv").exists()


def test_timestamp_is_opt_in(tmp_path):
    run(["schur-bound", "--p", "2", "--t", "1", "--s", "1", "--out", str(tmp_path / "a")])
    run(["schur-bound", "--p", "2", "--t", "1", "--s", "1", "--out", str(tmp_path / "b"), "--timestamp"])
    assert "timestamp" not in _json(tmp_path / "a" / "schur-bound.json")["meta"]
    assert "timestamp" in _json(tmp_path / "b" / "schur-bound.json")["meta"]


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["schur-bound", "--p", "2", "--t", "1"],
        ["schur-bound", "--p", "2", "--t", "1", "--s", "0.9"],
        ["schur-bound", "--p", "1", "--t", "2", "--s", "1"],
        ["norm-estimate", "--p", "0.5", "--t", "1", "--s", "0.25"],
        ["moments", "--n", "3"],
        ["moments", "--t", "-1"],
        ["threshold-scan", "--p", "2", "--t-range", "0:1:4", "--s-range", "1:2:4"],
        ["threshold-scan", "--p", "2", "--t-range", "1:2", "--s-range", "1:2:4"],
        ["lemma13-limit", "--p", "1", "--h", "1e-2,1e-3"],
        ["reduce-ab", "--a", "-1", "--b", "1", "--s", "1", "--p", "2"],
        ["radial-check", "--t", "1", "--profile", "nope"],
        ["verify-reproducing", "--tol", "2"],
    ],
)
def test_validation_errors_exit_1(tmp_path, argv, monkeypatch, capsys):
    built = []
    monkeypatch.setattr(cli, "build_rule", lambda *a, **k: built.append(a))
    assert run(argv + ["--out", str(tmp_path)] if argv else argv) == 1
    assert built == []
    assert not any(tmp_path.iterdir())
    assert "error" in capsys.readouterr().err


@pytest.mark.parametrize("exc", [ConvergenceError, TruncationError])
def test_numerical_failures_exit_2(tmp_path, monkeypatch, exc):
    def boom(args):
        raise exc("did not converge")

    monkeypatch.setitem(cli.COMMANDS, "schur-bound", boom)
    assert run(["schur-bound", "--p", "2", "--t", "1", "--s", "1", "--out", str(tmp_path)]) == 2


def test_help_exits_zero(capsys):
    with pytest.raises(SystemExit) as info:
        run(["--help"])
    assert info.value.code == 0
    assert "threshold-scan" in capsys.readouterr().out
