import json

import numpy as np
import pytest

from openchain.reports import CONTROL, INFORMATIONAL, CheckReport, decode_complex, encode, summarize


def test_encode_complex_and_arrays():
    out = encode({"z": 1 + 2j, "m": np.array([[1j]]), "n": np.float64(0.5), "i": np.int64(3), "b": np.bool_(True)})
    assert out == {"z": [1.0, 2.0], "m": [[[0.0, 1.0]]], "n": 0.5, "i": 3, "b": True}
    json.dumps(out)


def test_decode_complex():
    assert decode_complex([1, -2]) == 1 - 2j
    assert decode_complex(3) == 3
    for bad in ([1, 2, 3], "x", None):
        with pytest.raises(ValueError):
            decode_complex(bad)


@pytest.mark.parametrize("res, tol, kind, passed, ok", [
    (0.1, 1.0, "positive", True, True), (2.0, 1.0, "positive", False, False),
    (2.0, 1.0, CONTROL, False, True), (0.1, 1.0, CONTROL, True, False),
    (9.0, 0.0, INFORMATIONAL, False, True),
])
def test_report_semantics(res, tol, kind, passed, ok):
    r = CheckReport("x", {}, 0, 1, res, tol, kind=kind)
    assert r.passed is passed and r.ok is ok


def test_report_json_stable():
    r = CheckReport("x", {"u": 0.5 + 1j}, 7, 3, 1e-13, 1e-12, notes=["n"])
    assert r.to_json() == CheckReport("x", {"u": 0.5 + 1j}, 7, 3, 1e-13, 1e-12, notes=["n"]).to_json()
    d = json.loads(r.to_json())
    assert d["parameters"]["u"] == [0.5, 1.0] and d["passed"] and d["seed"] == 7


def test_summary_counts():
    reps = [CheckReport("b", {}, 0, 1, 0, 1), CheckReport("a", {}, 0, 1, 5, 1),
            CheckReport("c", {}, 0, 1, 5, 0, kind=INFORMATIONAL)]
    s = summarize(reps)
    assert [r["check_name"] for r in s["reports"]] == ["a", "b", "c"]
    assert s["summary"] == {"total": 3, "gating": 2, "ok": 1, "failed": ["a"], "all_ok": False}
