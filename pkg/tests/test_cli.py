import json
import subprocess
import sys
from pathlib import Path

import pytest

from epsnets import cli

CORPUS = Path(cli.__file__).parent / "corpus"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, "--json", *argv)
    return code, json.loads(out)


def test_num_classify_json(capsys):
    code, doc = run_json(capsys, "num", "classify", "exp(-1*eps^-1)")
    assert code == 0
    assert doc["schema_version"] == 1 and doc["command"] == "num classify"
    assert set(doc["config"]) == {"oracle_grid", "stage_budget", "alpha_max", "output"}
    (res,) = doc["result"]
    for key in ("negligible", "moderate", "infinitesimal"):
        assert res[key]["status"] == "ProvedTrue"
    assert res["valuation"] == "+inf"


def test_num_compare_and_valuation(capsys):
    code, doc = run_json(capsys, "num", "compare", "eps", "eps^2")
    assert code == 0 and doc["result"]["order"] is not None
    code, doc = run_json(capsys, "num", "valuation", "3*eps^2 + eps^5")
    assert code == 0 and doc["result"][0]["valuation"] == "2"


def test_formula_certify_or_counterexample(capsys):
    code, doc = run_json(capsys, "formula", "certify", str(CORPUS / "or_counterexample.sexp"))
    assert code == 0
    cert = doc["result"][0]["certificate"]
    assert cert == {"status": "NotCertified", "rule": "F7", "path": "root.body"}
    code, out, _ = run(capsys, "formula", "certify", str(CORPUS / "or_counterexample.sexp"))
    assert "NotCertified(F7 at root.body)" in out


def test_formula_parse_and_transfer(capsys):
    code, doc = run_json(capsys, "formula", "parse", str(CORPUS / "archimedes.sexp"))
    assert code == 0 and doc["result"]
    code, doc = run_json(capsys, "formula", "transfer", str(CORPUS / "ring.sexp"), "--structure", str(CORPUS / "nets.struct"))
    assert code == 0


def test_eval_transfer_check_builtin(capsys):
    code, doc = run_json(capsys, "eval", "transfer-check")
    assert code == 0


def test_set_commands(capsys):
    code, doc = run_json(capsys, "set", "member", "eps", "interval(0, 1)")
    assert code == 0 and doc["result"]["member"]["status"] == "ProvedTrue"
    code, doc = run_json(capsys, "set", "spill", "nat<=(1 + eps^-1)")
    assert code == 0


def test_gf_commands(capsys, tmp_path):
    f = tmp_path / "delta.gf"
    f.write_text("atom(c=1, a=1, b=1, x0=0, profile=bump)\n")
    code, doc = run_json(capsys, "gf", "moderate", str(f))
    assert code == 0 and doc["result"]["moderate"]["status"] == "ProvedTrue"
    code, doc = run_json(capsys, "gf", "ginf", str(f), "--m", "2")
    assert doc["result"]["verdict"]["status"] == "ProvedFalse"
    code, doc = run_json(capsys, "gf", "ginf", str(f), "--at", "1/2*eps")
    assert doc["result"]["verdict"]["status"] == "ProvedFalse"
    code, doc = run_json(capsys, "gf", "local", str(f), "--x0", "0", "--m", "2")
    assert doc["result"]["local"]["status"] == "ProvedTrue"
    assert doc["result"]["global"]["verdict"]["status"] == "ProvedFalse"
    code, doc = run_json(capsys, "gf", "seminorm", str(f), "--m", "2")
    assert code == 0 and "eps^-3" in doc["result"]["upper"]


def test_usage_and_parse_errors_exit_2(capsys):
    assert run(capsys, "num", "classify", "eps^")[0] == 2
    assert run(capsys, "num", "frobnicate")[0] == 2
    assert run(capsys, "formula", "certify", "/no/such/file.sexp")[0] == 2
    assert run(capsys, "--grid", "nonsense", "num", "classify", "eps")[0] == 2
    code, _, err = run(capsys, "num", "classify", "eps^")
    assert "cannot parse" in err


def test_expectation_failure_exits_1(capsys):
    assert run(capsys, "--expect", "ProvedFalse", "set", "member", "eps", "interval(0, 1)")[0] == 1
    assert run(capsys, "--expect", "ProvedTrue", "set", "member", "eps", "interval(0, 1)")[0] == 0


def test_env_overrides(capsys, monkeypatch):
    monkeypatch.setenv("EPSNETS_JSON", "1")
    monkeypatch.setenv("EPSNETS_GRID", "12:40")
    monkeypatch.setenv("EPSNETS_STAGES", "7")
    monkeypatch.setenv("EPSNETS_ALPHA_MAX", "6")
    code, out, _ = run(capsys, "num", "classify", "eps")
    cfg = json.loads(out)["config"]
    assert cfg == {"oracle_grid": [12, 40], "stage_budget": 7, "alpha_max": 6, "output": "json"}
    # flags win over the environment
    code, out, _ = run(capsys, "--stages", "3", "num", "classify", "eps")
    assert json.loads(out)["config"]["stage_budget"] == 3


def test_output_is_deterministic(capsys):
    argv = ("--json", "formula", "certify", str(CORPUS / "ring.sexp"))
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "epsnets.cli", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.strip()


def test_suite_all_exit_zero(capsys):
    code, doc = run_json(capsys, "suite", "all")
    assert code == 0
    assert [r["criterion"] for r in doc["result"]] == list(range(1, 12))
    assert all(r["passed"] for r in doc["result"])
    # no timings, so the document is reproducible
    assert all("seconds" not in r and not r["detail"].rstrip(")").endswith("s)") for r in doc["result"])
