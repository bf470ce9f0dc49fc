import json

import pytest
from click.testing import CliRunner

from braidkit import rtensor
from braidkit.cli import main
from braidkit.qcoeff import ONE


@pytest.fixture
def run():
    runner = CliRunner()
    return lambda *args: runner.invoke(main, list(args))


def test_check_euclidean(run):
    res = run("check", "--preset", "su2-euclidean")
    assert res.exit_code == 0, res.output
    for name in ("ybe", "hecke", "reality", "confluence"):
        assert name in res.output


def test_check_identity_reports_hecke_failure(run):
    res = run("check", "--preset", "identity")
    assert res.exit_code == 1
    assert "[PASS ] ybe" in res.output
    assert "[FAIL ] hecke" in res.output


def test_check_bad_file(run, tmp_path):
    entries = rtensor.standard_su2().entries.copy()
    entries[(0, 1, 1, 0)] = ONE
    bad = tmp_path / "bad.rmx"
    bad.write_text(json.dumps(rtensor.rmatrix_to_json(rtensor.RMatrixData(2, entries, "bad"))))
    res = run("check", str(bad))
    assert res.exit_code == 1
    assert "residual[" in res.output
    assert "skipped" in run("check", str(bad), "--json").output


def test_check_unparseable_file(run, tmp_path):
    bad = tmp_path / "broken.rmx"
    bad.write_text("{")
    res = run("check", str(bad))
    assert res.exit_code == 2
    assert "broken.rmx:1" in res.output


@pytest.mark.parametrize("args, out", [
    (("act", "c1", "x1"), "(-q)*x1.x1"),
    (("act", "p1", "x1"), "-1"),
    (("act", "c1", "1"), "0"),
    (("act", "s", "x1.x2"), "(q^-2)*x1.x2"),
    (("act", "c1", "x1.x2", "--q1"), "(-2)*x1.x1.x2"),
    (("act", "c1", "x1", "--conjugate"), "(q^-1)*x1.x1"),
])
def test_act(run, args, out):
    res = run(*args)
    assert res.exit_code == 0, res.output
    assert res.output.strip() == out


@pytest.mark.parametrize("args", [
    ("act", "c9", "x1"),
    ("act", "z1", "x1"),
    ("act", "c1", "x1."),
    ("act", "p1", "x1", "--conjugate"),
    ("check", "--preset", "identity", "--rmatrix", "x.json"),
])
def test_usage_errors(run, args):
    assert run(*args).exit_code == 2


def test_act_json(run):
    res = run("act", "p1", "x1", "--json")
    body = json.loads(res.output)
    assert body["status"] == "pass" and body["params"]["result"] == "-1"
    assert set(body) == {"check", "status", "millis", "params"}


def test_verify_json_schema(run):
    res = run("verify", "gaussian", "--degree", "1", "--json")
    assert res.exit_code == 0
    body = json.loads(res.output)
    assert body["check"] == "gaussian" and body["status"] == "pass"
    assert body["params"]["convention"] == "mu-factorial, argument -x.x/(1+q^-2)"


def test_verify_conjugation(run):
    res = run("verify", "conjugation", "--degree", "2")
    assert res.exit_code == 0, res.output


def test_verify_classical_limit(run):
    res = run("verify", "classical-limit")
    assert res.exit_code == 0
    assert "matched=16" in res.output


def test_verify_table_fails_faithfully(run):
    res = run("verify", "table", "--json")
    assert res.exit_code == 1
    body = json.loads(res.output)
    assert body["status"] == "fail" and body["witness"]


def test_verify_minkowski_conjugation_errors(run):
    res = run("verify", "conjugation", "--preset", "su2-minkowski", "--degree", "1")
    assert res.exit_code == 1
    assert "no reality type declared" in res.output


def test_verify_needs_full_pair(run, tmp_path):
    path = tmp_path / "r.json"
    path.write_text(json.dumps(rtensor.rmatrix_to_json(rtensor.standard_su2(), ONE)))
    res = run("verify", "relations", "--rmatrix", str(path))
    assert res.exit_code == 2
    assert "r_prime" in res.output


def test_metric_file_override(run, tmp_path, euclid):
    path = tmp_path / "eta.json"
    path.write_text(json.dumps(euclid.metric.to_json()))
    res = run("verify", "metric", "--metric", str(path), "--degree", "2")
    assert res.exit_code == 0, res.output
