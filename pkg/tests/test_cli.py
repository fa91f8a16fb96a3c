"""Scenario runner: determinism, exit codes, artifacts, corpus."""
from __future__ import annotations

import json
import os

import pytest

from foliationlab.cli import (corpus_files, main, render_report, run_corpus,
                              run_scenario, scenario_hash)


def load(name):
    for fname, f in corpus_files():
        if fname == name:
            return json.loads(f.read_text())
    raise AssertionError(f"missing corpus scenario {name}")


def test_corpus_lists_scenarios():
    names = [n for n, _ in corpus_files()]
    assert "cusp.json" in names and "jouanolou_m1.json" in names
    assert len(names) == 10


def test_reports_are_byte_identical():
    for name in ("cusp.json", "jouanolou_m1.json", "log_corner_3d.json"):
        scenario = load(name)
        a = render_report(run_scenario(scenario)[0])
        b = render_report(run_scenario(scenario)[0])
        assert a == b


def test_scenario_hash_stable():
    s = load("cusp.json")
    assert scenario_hash(s) == scenario_hash(json.loads(json.dumps(s)))


def test_counterexample_exit_code():
    report, code, _ = run_scenario(load("nodal_counterexample_graph.json"))
    assert code == 2
    assert report["analyses"]["graph"]["nodal_verdict"]["verdict"] == "Violated"


def test_full_corpus_matches_expectations():
    summary, code, _ = run_corpus()
    assert code == 0 and summary["all_matched"]


def test_corpus_filter():
    summary, code, _ = run_corpus(filter_text="cusp")
    assert [r["scenario"] for r in summary["scenarios"]] == ["cusp.json"]
    empty, code, _ = run_corpus(filter_text="no-such-scenario")
    assert empty["scenarios"] == [] and code == 0


def test_main_writes_artifacts(tmp_path, capsys):
    src = tmp_path / "cusp.json"
    src.write_text(json.dumps(load("cusp.json")))
    code = main(["reduce2d", str(src), "--out", str(tmp_path / "out"), "--dot"])
    assert code == 0
    out = capsys.readouterr().out
    assert json.loads(out)["analyses"]["reduce2d"]["depth"] == 3
    assert (tmp_path / "out" / "report.json").exists()
    assert (tmp_path / "out" / "reduction.dot").exists()


def test_main_csv_artifacts(tmp_path, capsys):
    scenario = load("holonomy_suite.json")
    # trim to the probe blocks to keep the run short
    scenario["holonomy"]["blocks"] = [
        b for b in scenario["holonomy"]["blocks"]
        if b["kind"] == "probe" and b["name"] == "nodal"]
    del scenario["expect"]
    src = tmp_path / "probe.json"
    src.write_text(json.dumps(scenario))
    code = main(["holonomy", str(src), "--out", str(tmp_path / "out"), "--csv"])
    assert code == 0
    capsys.readouterr()
    assert (tmp_path / "out" / "nodal.csv").exists()


def test_parse_error_exit_one(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["analyze", str(bad)]) == 1
    assert "line" in capsys.readouterr().err


def test_unknown_analysis_is_an_error(tmp_path):
    from foliationlab.errors import ScenarioError
    with pytest.raises(ScenarioError):
        run_scenario({"name": "x", "form": {"coefficients": ["x", "y"]},
                      "analyses": ["nope"]})
