import copy
import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from su21reps.io import (
    MalformedRunError,
    RunDocument,
    emit_run,
    evaluate_exact_form,
    fmt_float,
    format_table,
    parse_run,
    recertify,
    recognize_exact,
)


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_float_strings_round_trip(x):
    assert float(fmt_float(x)) == x
    assert fmt_float(float(fmt_float(x))) == fmt_float(x)


@pytest.mark.parametrize(
    "text,value",
    [
        ("1+2cos(2π/11)", 1 + 2 * np.cos(2 * np.pi / 11)),
        ("1+2cos(4π/13)", 1 + 2 * np.cos(4 * np.pi / 13)),
        ("e^{10πi/11}+e^{16πi/11}+e^{18πi/11}", sum(np.exp(1j * np.pi * k / 11) for k in (10, 16, 18))),
        ("1+e^{2πi/3}+e^{4πi/3}", 0),
        ("-1+-1+1", -1),
        ("e^{πi/3}+1+1", 2 + np.exp(1j * np.pi / 3)),
    ],
)
def test_evaluate_exact_form(text, value):
    assert abs(evaluate_exact_form(text) - value) <= 1e-14


@pytest.mark.parametrize("bad", ["", "e^{x}", "1+", "2cos(π)", "1 + 1"])
def test_evaluate_exact_form_rejects(bad):
    with pytest.raises(ValueError):
        evaluate_exact_form(bad)


def test_recognize_exact():
    v = sum(np.exp(1j * np.pi * k / 11) for k in (4, 6, 12))
    assert recognize_exact(v, (11, 3)) == "e^{4πi/11}+e^{6πi/11}+e^{12πi/11}"
    assert recognize_exact(1 + 2 * np.cos(2 * np.pi / 13), (13, 3)) == "1+2cos(2π/13)"
    assert recognize_exact(0.123 + 0.456j, (11, 3)) is None
    assert recognize_exact(3.0, (3,)) == "1+1+1"


def test_emit_parse_emit_identical(run11_path, run13_path):
    for path in (run11_path, run13_path):
        text = path.read_text(encoding="utf-8")
        assert emit_run(parse_run(text)) == text


def test_record_contents(run11):
    man = run11["manifest"]
    assert man["point_count"] == len(run11["points"]) == 5
    assert man["presentation"] == {"p": 2, "q": 3, "r": 11, "a": -1, "b": 1, "c": 2}
    assert man["completeness"] == {"patch_bound": 10.0, "grid_step": 0.02}
    assert man["wall_time"] is None
    assert "threads" not in man["config"]
    for rec in run11["points"]:
        assert rec["epsilon"] == "0/3"
        digits = rec["t_xy"]["re"].split("e")[0].replace("-", "").replace(".", "").lstrip("0")
        assert len(digits) <= 17
        assert rec["t_xy"]["exact"] is not None
        assert rec["witness"]["orientation"] in (1, -1)


def test_exact_forms_re_evaluate(run11, run13):
    for run in (run11, run13):
        for rec in run["points"]:
            for key in ("t_xy", "t_x_inv_y"):
                z = complex(float(rec[key]["re"]), float(rec[key]["im"]))
                assert abs(evaluate_exact_form(rec[key]["exact"]) - z) <= 1e-9


def test_malformed_inputs(run11_path):
    text = run11_path.read_text(encoding="utf-8")
    with pytest.raises(MalformedRunError):
        parse_run(text[: len(text) // 2])
    with pytest.raises(MalformedRunError):
        parse_run("{}")
    raw = json.loads(text)
    for mutate in (
        lambda d: d["points"][0].pop("witness"),
        lambda d: d["points"][0]["t_xy"].update(re=1.5),
        lambda d: d["points"][0].update(epsilon="1/2"),
        lambda d: d["manifest"].update(point_count=4),
        lambda d: d["manifest"]["presentation"].update(a=5),
        lambda d: d["manifest"]["config"].update(bogus=1),
        lambda d: d["points"][0]["witness"].update(orientation=0),
    ):
        d = copy.deepcopy(raw)
        mutate(d)
        with pytest.raises(MalformedRunError):
            parse_run(json.dumps(d))


def test_recertify_detects_edits(run11_path):
    doc = parse_run(run11_path.read_text(encoding="utf-8"))
    assert all(recertify(doc, rec).accepted for rec in doc.points)
    rec = doc.points[0]
    rec.t_xy += 0.1
    chk = recertify(doc, rec)
    assert not chk.accepted and "differ" in chk.reason


def test_recertify_detects_bad_witness(run11_path):
    doc = parse_run(run11_path.read_text(encoding="utf-8"))
    rec = doc.points[1]
    rec.u = (rec.u[0] + 0.05,) + rec.u[1:]
    assert not recertify(doc, rec).accepted


def test_table_is_deterministic(run11_path, run11_threaded_path):
    a = format_table(parse_run(run11_path.read_text(encoding="utf-8")))
    b = format_table(parse_run(run11_threaded_path.read_text(encoding="utf-8")))
    assert a == b
    lines = a.splitlines()
    assert lines[0].startswith("Sigma(2,3,11)") and "points: 5" in lines[0]
    assert "1+2cos(2π/11)" in a


def test_wall_time_recorded_when_asked(search11):
    doc = RunDocument.from_result(search11, "0.1.0", wall_time=1.25)
    assert json.loads(emit_run(doc))["manifest"]["wall_time"] == "1.25"
    assert parse_run(emit_run(doc)).wall_time == 1.25
