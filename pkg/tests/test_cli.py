#!/usr/bin/env python3
"""
Tests for the sixj command-line front end
"""

import json
import os
import sys

import pytest

# Add src to path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

import config
from asymptotics import series_compare
from main import EXIT_BAD_INPUT, EXIT_GEOMETRY, EXIT_IO, EXIT_OK, main, read_series_csv
from plotscript import render_plot_script

REGULAR = "2,2,2,2,2,2"


def run(capsys, *argv):
    code = main(list(argv))
    lines = [json.loads(line) for line in capsys.readouterr().out.splitlines() if line.strip()]
    return code, lines


def test_exact(capsys):
    code, [record] = run(capsys, "exact", "--labels", "0,0,0,0,0,0")
    assert code == EXIT_OK
    assert record["value"] == 1.0

    code, [record] = run(capsys, "exact", "--labels", REGULAR)
    assert (record["sign"], record["radicand_num"], record["radicand_den"]) == (1, "1", "36")


def test_exact_inadmissible_is_flagged(capsys):
    code, [record] = run(capsys, "exact", "--labels", "1,1,1,0,0,0")
    assert code == EXIT_OK
    assert record["value"] == 0.0
    assert record["admissible"] is False


def test_exact_bad_input(capsys):
    assert run(capsys, "exact", "--labels", "1,2")[0] == EXIT_BAD_INPUT
    assert run(capsys, "exact")[0] == EXIT_BAD_INPUT


def test_oracle(capsys):
    code, [record] = run(capsys, "oracle", "--labels", "2,2,2")
    assert code == EXIT_OK
    assert record["net"] == "theta"
    assert record["match"]

    code, [record] = run(capsys, "oracle", "--labels", REGULAR)
    assert record["net"] == "mercedes"
    assert (record["penrose_num"], record["penrose_den"]) == ("3", "2")

    assert run(capsys, "oracle", "--labels", "4,4,4", "--oracle-cap", "3")[0] == EXIT_BAD_INPUT
    assert run(capsys, "oracle", "--labels", "1,1,1")[0] == EXIT_BAD_INPUT


def test_series_csv(tmp_path, capsys):
    out = tmp_path / "series.csv"
    assert main(["series", "--labels", REGULAR, "--k-min", "1", "--k-max", "5", "--out", str(out)]) == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == "k,exact,pr_theorem,pr_original,abs_err_theorem,abs_err_original"
    assert len(lines) == 6

    rows = read_series_csv(str(out))
    for row, sample in zip(rows, series_compare((2, 2, 2, 2, 2, 2), 1, 5)):
        assert row["k"] == sample.k
        assert row["exact"] == sample.exact
        assert row["pr_theorem"] == sample.pr_theorem


def test_series_warm_cache_is_byte_identical(tmp_path):
    cache = str(tmp_path / "cache.jsonl")
    first, second = tmp_path / "first.csv", tmp_path / "second.csv"
    argv = ["series", "--labels", REGULAR, "--k-min", "1", "--k-max", "6", "--cache", cache]
    assert main(argv + ["--out", str(first)]) == EXIT_OK
    assert main(argv + ["--out", str(second)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()
    assert len((tmp_path / "cache.jsonl").read_text().splitlines()) == 6


def test_exact_survives_malformed_cache_line(tmp_path, capsys):
    cache = tmp_path / "cache.jsonl"
    cache.write_text(json.dumps({"labels": [2, 2, 2, 2, 2, 2], "sign": 1, "radicand_num": "1", "radicand_den": "0"}) + "\n")
    code, [record] = run(capsys, "exact", "--labels", REGULAR, "--cache", str(cache))
    assert code == EXIT_OK
    assert (record["radicand_num"], record["radicand_den"]) == ("1", "36")


def test_series_minkowskian_leaves_estimates_empty(tmp_path):
    out = tmp_path / "series.csv"
    assert main(["series", "--labels", "10,6,6,10,6,6", "--k-min", "1", "--k-max", "2", "--out", str(out)]) == EXIT_OK
    for row in read_series_csv(str(out)):
        assert row["pr_theorem"] is None
        assert row["pr_original"] is None


def test_series_jsonl(capsys):
    code, records = run(capsys, "series", "--labels", REGULAR, "--k-max", "3", "--format", "jsonl")
    assert code == EXIT_OK
    assert [r["k"] for r in records] == [1, 2, 3]


def test_series_errors(tmp_path, capsys):
    missing = tmp_path / "missing" / "series.csv"
    assert run(capsys, "series", "--labels", REGULAR, "--k-max", "2", "--out", str(missing))[0] == EXIT_IO
    assert run(capsys, "series", "--labels", REGULAR, "--k-min", "5", "--k-max", "2")[0] == EXIT_BAD_INPUT


def test_geom(capsys):
    code, [record] = run(capsys, "geom", "--labels", "4,6,8,10,6,8")
    assert code == EXIT_OK
    assert record["classification"] == "euclidean"
    assert set(record["exterior_angles"]) == set("abcdef")
    assert set(record["hadwiger"]) == {"mu0", "mu1", "mu2", "mu3"}

    code, [record] = run(capsys, "geom", "--labels", "10,6,6,10,6,6")
    assert code == EXIT_OK
    assert record["classification"] == "minkowskian"
    assert record["volume"] is None

    assert run(capsys, "geom", "--labels", "1,1,5,1,1,1")[0] == EXIT_GEOMETRY


def test_regge(capsys):
    code, records = run(capsys, "regge", "--labels", "4,6,8,10,6,8")
    assert code == EXIT_OK
    *rows, summary = records
    assert len(rows) == summary["classes"] == 6
    assert summary["invariance"]["holds"]
    assert summary["invariance"]["mu2"] is False
    assert all(summary["angle_transport"].values())


def test_wigner(capsys):
    code, [record] = run(capsys, "wigner", "--k", "20", "--beta", "1.0")
    assert code == EXIT_OK
    assert record["exact"] == pytest.approx(record["oracle"], abs=1e-9)

    code, [record] = run(capsys, "wigner", "--k", "50", "--beta", "1.0")
    assert record["oracle"] is None

    assert run(capsys, "wigner", "--k", "5", "--beta", "0")[0] == EXIT_BAD_INPUT


def test_norm_demo(capsys):
    code, [record] = run(capsys, "norm-demo", "--k", "10")
    assert code == EXIT_OK
    assert record["quadrature"] == pytest.approx(record["exact"], rel=1e-8)


def test_plotscript(tmp_path, capsys):
    data = tmp_path / "series.csv"
    main(["series", "--labels", REGULAR, "--k-max", "4", "--out", str(data)])
    script = tmp_path / "plot.py"
    code, [record] = run(capsys, "plotscript", str(data), "--labels", REGULAR, "--out", str(script))
    assert code == EXIT_OK
    assert record["script"] == str(script)
    text = script.read_text()
    assert "matplotlib" in text
    assert text == render_plot_script(str(data), (2, 2, 2, 2, 2, 2))
    assert run(capsys, "plotscript", str(data), "--labels", "10,6,6,10,6,6")[0] == EXIT_GEOMETRY


def test_tolerance_flags(capsys, monkeypatch):
    monkeypatch.setattr(config, "TOLERANCES", dict(config.TOLERANCES))
    code, _ = run(capsys, "geom", "--labels", REGULAR, "--tolerance", "flat_relative=1e-8")
    assert code == EXIT_OK
    assert config.TOLERANCES["flat_relative"] == 1e-8
    assert run(capsys, "geom", "--labels", REGULAR, "--tolerance", "no_such_key=1")[0] == EXIT_BAD_INPUT


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
