from __future__ import annotations

import json
import shutil
import subprocess
import sys

import pytest

from measure_modes.cli import dispatch


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, body in {
        "a": {"atoms": [["0", "1/2"], ["1/4", "1/2"]]},
        "bad": {"atoms": [["0", "1/2"], ["1", "1/3"]]},
        "f": {"kind": "ContinuousPL", "breakpoints": ["0", "1"], "values": ["0", "1"]},
        "tab": {"terms": [{"atoms": [["1/2", "1"]]}, {"atoms": [["0", "1"]]}, {"atoms": [["0", "1"]]}]},
        "gauge": {"kind": "S", "family": [[["0", "1", False, False]]], "epsilon": "1/2",
                  "center": {"atoms": [["0", "1"]]}},
    }.items():
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(body))
        paths[name] = str(p)
    paths["broken"] = str(tmp_path / "broken.json")
    (tmp_path / "broken.json").write_text("{")
    return paths


def run(*argv):
    code, text = dispatch(list(argv))
    return code, (json.loads(text) if text.lstrip().startswith("{") else text)


def test_tv_self_is_zero(files):
    code, out = run("tv", files["a"], files["a"])
    assert code == 0 and out["result"]["tv"]["exact"] == "0/1"
    assert out["command"][0] == "tv" and set(out["inputs"]) == {files["a"]}


def test_tv_and_prohorov_values(files):
    assert run("tv", files["a"], "dirac(0)")[1]["result"]["tv"]["exact"] == "1/2"
    assert run("prohorov", files["a"], "dirac:0")[1]["result"]["prohorov"]["exact"] == "1/4"


def test_invalid_measure_names_invariant(files):
    code, out = run("tv", files["bad"], files["a"])
    assert code == 2 and out["error"]["invariant"] == "total_mass_one"


def test_unreadable_and_malformed_inputs(files):
    assert run("tv", files["broken"], files["a"])[1]["error"]["invariant"] == "json_syntax"
    code, out = run("tv", "/nonexistent.json", files["a"])
    assert code == 2 and out["error"]["invariant"] == "readable_input"
    code, out = run("prohorov", "uniform(0,1)", files["a"])
    assert code == 2 and out["error"]["invariant"] == "atomic_only"


def test_usage_errors():
    assert run("frobnicate")[0] == 64
    assert run()[0] == 64
    code, out = run("tv", "only-one-arg")
    assert code == 2 and out["error"]["invariant"] == "arguments"


def test_classify_pins():
    code, out = run("classify", "--family", "dirac-at", "--limit", "dirac:0")
    assert code == 0
    v = {x["mode"]: x for x in out["result"]["verdicts"]}
    assert v["Weak"]["status"] == "ConvergesExact"
    assert v["Setwise"]["status"] == "DivergesWitness" and v["Setwise"]["witness"]["text"] == "(0,1)"
    assert v["Setwise"]["gap"]["exact"] == "1/1" and v["TV"]["gap"]["exact"] == "1/1"


def test_compactness_gap_on_unit_interval():
    code, out = run("compactness", "--family", "dirac-at")
    entries = {e["region"]["text"]: e for e in out["result"]["entries"]}
    assert code == 0 and entries["(0,1)"]["gap"]["exact"] == "1/1"


def test_gallery_exit_zero_and_deterministic():
    first, second = dispatch(["gallery"]), dispatch(["gallery"])
    assert first == second and first[0] == 0
    assert json.loads(first[1])["result"]["pins_ok"] is True
    code, text = dispatch(["gallery", "--text"])
    assert code == 0 and "MISMATCH" not in text and "[dirac-at -> dirac:0]  ok" in text


def test_other_commands(files):
    assert run("gauge", files["gauge"], "dirac(1/2)")[1]["result"]["contained"] is False
    out = run("quantize", "--f", files["f"], "--eps", "1")[1]["result"]
    assert out["certificate"]["n"] == 5 and out["certificate"]["cell_tolerance"] == "1/10"
    out = run("vague-approx", "--nu", "uniform(0,1)", "--n1", "2")[1]["result"]
    assert out["result"]["centers_used"] == ["0/1", "1/2"]
    out = run("portmanteau", "--family", f"tabulated:{files['tab']}", "--limit", "dirac:0")[1]["result"]
    assert out["agree"] is True
    out = run("atoms", "--ground", "3", "--gens", "1,2;2,3")[1]["result"]
    assert out["atoms"] == [[1], [2], [3]] and out["separable"] is True
    out = run("dense-witness", "--ground", "3", "--gens", "1;2", "--atoms", "0", "--eps", "1/10")[1]["result"]
    assert out["denominator"] == 16 and out["rho"][0]["exact"] == "5/16"


def test_budget_environment(monkeypatch):
    monkeypatch.setenv("MEASURE_MODES_BUDGET", "2,1")
    out = run("classify", "--family", "dirac-at", "--limit", "dirac:0")[1]
    assert out["budget"]["k_base"] == 2 and out["budget"]["k_funcs"] == 1
    out = run("classify", "--family", "dirac-at", "--limit", "dirac:0", "--kbase", "3")[1]
    assert out["budget"]["k_base"] == 3


def test_check_is_seeded():
    a, b = dispatch(["check", "--seed", "5", "--trials", "3"]), dispatch(["check", "--seed", "5", "--trials", "3"])
    assert a == b and a[0] == 0


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "measure_modes.cli", "tv", files["a"], files["a"]],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["result"]["tv"]["exact"] == "0/1"
    exe = shutil.which("measure-modes")
    if exe:
        proc = subprocess.run([exe, "nope"], capture_output=True, text=True, check=False)
        assert proc.returncode == 64 and proc.stdout == "" and "usage" in proc.stderr
