import json
import subprocess
import sys

import pytest

from su21reps import traces
from su21reps.cli import main


def test_search_rejects_non_coprime(capsys):
    assert main(["search", "2", "4", "6"]) == 2
    assert "coprime" in capsys.readouterr().err


def test_search_rejects_bad_weights(capsys):
    assert main(["search", "2", "3", "11", "--weights", "1,1,1"]) == 2
    assert main(["search", "2", "3", "11", "--weights", "1,2"]) == 2
    assert main(["search", "2", "3", "11", "--grid", "-1"]) == 2


def test_search_with_weight_override(tmp_path, capsys):
    out = tmp_path / "w.json"
    assert main(["search", "2", "3", "11", "--weights", "1,-2,2", "--json", str(out)]) == 0
    man = json.loads(out.read_text(encoding="utf-8"))["manifest"]
    assert (man["presentation"]["a"], man["presentation"]["b"], man["presentation"]["c"]) == (1, -2, 2)
    assert man["point_count"] == 5


def test_search_table_output(capsys):
    assert main(["search", "2", "3", "5"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("Sigma(2,3,5)") and "points: 0" in out


def test_weights_command(capsys):
    assert main(["weights", "2", "3", "11", "--verify", "-1,1,2"]) == 0
    out = capsys.readouterr().out
    assert "(a, b, c) = (-1, 1, 2)" in out and "also valid" in out
    assert main(["weights", "2", "3", "5"]) == 0
    assert "(a, b, c) = (-1, 1, 1)" in capsys.readouterr().out
    assert main(["weights", "2", "2", "3"]) == 2
    assert main(["weights", "2", "3", "11", "--verify", "1,1,1"]) == 2


def test_check_small_run(capsys):
    assert main(["check", "--samples", "25", "--seed", "3"]) == 0
    out = capsys.readouterr().out
    assert "ERRATUM identity V" in out
    assert "PASS    identity VII" in out


def test_check_zero_samples(capsys):
    assert main(["check", "--samples", "0"]) == 0
    assert "vacuous" in capsys.readouterr().err


def test_check_negative_control(monkeypatch, capsys):
    good = traces.IDENTITIES[traces.IdentityName.VII]

    def perturbed(A, B, tol):
        lhs, rhs = good(A, B, tol)
        return lhs, rhs + 1e-6

    monkeypatch.setitem(traces.IDENTITIES, traces.IdentityName.VII, perturbed)
    assert main(["check", "--samples", "10", "--seed", "40"]) == 1
    err = capsys.readouterr().err
    assert "identity VII" in err and "offending seed" in err


def test_certify_round_trip(run11_path, capsys):
    assert main(["certify", "--json", str(run11_path)]) == 0
    assert "5/5 certificates accepted" in capsys.readouterr().out


def test_certify_edited_file(run11_path, tmp_path):
    d = json.loads(run11_path.read_text(encoding="utf-8"))
    d["points"][2]["t_xy"]["re"] = repr(float(d["points"][2]["t_xy"]["re"]) + 0.1)
    bad = tmp_path / "edited.json"
    bad.write_text(json.dumps(d, ensure_ascii=False), encoding="utf-8")
    assert main(["certify", "--json", str(bad)]) == 1


def test_certify_truncated_and_missing(run11_path, tmp_path):
    text = run11_path.read_text(encoding="utf-8")
    cut = tmp_path / "cut.json"
    cut.write_text(text[: len(text) - 40], encoding="utf-8")
    assert main(["certify", "--json", str(cut)]) == 2
    assert main(["certify", "--json", str(tmp_path / "nope.json")]) == 2


def test_usage_errors():
    assert main([]) == 2
    assert main(["search", "2", "3"]) == 2
    assert main(["frobnicate"]) == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "su21reps", "weights", "2", "3", "13"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert "(1, -1, -2)" in proc.stdout
