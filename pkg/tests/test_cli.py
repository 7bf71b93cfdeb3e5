import json
from pathlib import Path

import pytest

from lightlike.cli import ManifestError, load_manifest, main
from lightlike.exprcore import REPORT_FIELDS

MANIFESTS = Path(__file__).resolve().parent.parent / "manifests"


def manifest(name):
    return str(MANIFESTS / name)


def write(tmp_path, data, name="m.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def json_lines(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def test_pp_wave_suite_passes(capsys):
    assert main(["check", manifest("pp_wave.json"), "--json"]) == 0
    reports = json_lines(capsys.readouterr().out)
    assert reports and all(r["status"] == "pass" for r in reports)
    assert all(tuple(r) == REPORT_FIELDS for r in reports)
    assert [r["check"] for r in reports] == sorted(r["check"] for r in reports)


def test_perturbed_metric_fails(capsys):
    assert main(["check", manifest("perturbed.json"), "--json"]) == 1
    failed = {r["check"] for r in json_lines(capsys.readouterr().out) if r["status"] == "fail"}
    assert {"reduced_vacuum", "ricci_flat"} <= failed


def test_precondition_exit(capsys):
    assert main(["check", manifest("perturbed.json"), "--suite", "cauchy_riemann"]) == 4


def test_usage_errors(tmp_path, capsys):
    assert main(["check", manifest("pp_wave.json"), "--suite", "nope"]) == 2
    assert main(["check", str(tmp_path / "missing.json")]) == 2
    assert main(["check", write(tmp_path, {"version": 2, "family": "peres"})]) == 2
    assert main(["bogus"]) == 2
    assert "error" in capsys.readouterr().err


def test_domain_exit(capsys):
    code = main(["transport", manifest("robinson_trautman.json"),
                 "--curve", "1 - 2*s", "0", "0", "0", "--vector", "1", "0", "0", "0"])
    assert code == 3


def test_json_is_deterministic(capsys):
    outs = []
    for threads in ("1", "1", "8"):
        main(["check", manifest("pp_wave.json"), "--json", "--threads", threads])
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1] == outs[2]


def test_seed_and_points_are_honoured(capsys):
    main(["check", manifest("pp_wave.json"), "--suite", "ricci_flat", "--json",
          "--seed", "7", "--points", "50"])
    (report,) = json_lines(capsys.readouterr().out)
    assert report["points"] == 50 and report["seed"] != 7


def test_curvature_listing(capsys):
    assert main(["curvature", manifest("peres.json")]) == 0
    out = capsys.readouterr().out
    assert "R_1212 = 2" in out and "R_1313 = -2" in out
    assert main(["curvature", manifest("minkowski.json")]) == 0
    assert "all components zero" in capsys.readouterr().out


def test_transport_command(capsys):
    code = main(["transport", manifest("pp_wave.json"), "--rectangle", "0,0,0,0", "1,2",
                 "0.5,0.5", "--vector", "1", "0", "0", "0"])
    assert code == 0
    result = json.loads(capsys.readouterr().out)
    assert result["closed"] and result["deviation"] <= 1e-10
    assert main(["transport", manifest("pp_wave.json"), "--vector", "1", "0", "0", "0"]) == 2


def test_catalog(capsys):
    assert main(["catalog"]) == 0
    out = capsys.readouterr().out
    assert "pp_wave" in out and "robinson_trautman" in out
    assert main(["catalog", "--json"]) == 0
    assert "peres" in json.loads(capsys.readouterr().out)


def test_load_manifest_forms():
    m = load_manifest({"version": 1, "family": "pp_wave", "args": {"phi": "c"},
                       "parameters": {"c": [0.1, 0.9]}})
    assert m.subject.metric.box.bounds["c"] == (0.1, 0.9)
    raw = load_manifest({"version": 1, "chart": ["t", "x", "y", "z"],
                         "metric": [["1"], ["0", "-1"], ["0", "0", "-1"], ["0", "0", "0", "-1"]]})
    assert raw.subject.metric.chart == ("t", "x", "y", "z")
    with pytest.raises(ManifestError):
        load_manifest({"version": 1, "chart": ["t", "x", "y", "z"], "metric": [["1"]]})
    with pytest.raises(ManifestError):
        load_manifest({"version": 1, "family": "no_such_family"})
