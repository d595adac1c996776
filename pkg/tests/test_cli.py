from __future__ import annotations

import dataclasses
import json

import pytest

from isom4d import stabilizer
from isom4d.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_catalog_all_and_single(capsys):
    code, out, _ = run(capsys, "catalog")
    assert code == 0 and len(json.loads(out)["algebras"]) == 16
    code, out, _ = run(capsys, "catalog", "--algebra", "2A2")
    assert [a["name"] for a in json.loads(out)["algebras"]] == ["2A2"]


def test_catalog_is_byte_deterministic(capsys):
    assert run(capsys, "catalog")[1] == run(capsys, "catalog")[1]


def test_unknown_algebra_exit_2(capsys):
    code, out, err = run(capsys, "catalog", "--algebra", "bogus")
    assert code == 2 and out == "" and "UnknownGroup" in err


def test_check_type_r(capsys):
    code, out, _ = run(capsys, "check-type-r", "--samples", "2")
    rows = json.loads(out)
    assert code == 0 and len(rows) == 32
    assert {r["algebra"] for r in rows if not r["type_r"]} == {"A37a+A1", "A46ab", "A411a", "A412"}


def test_stabilizer_a48_m1(capsys):
    code, out, err = run(capsys, "stabilizer", "--algebra", "A48", "--case", "M1", "--alpha", "1", "--mu", "2")
    js = json.loads(out)
    assert code == 0 and js["label"] == "Z2^2" and js["match"] is True
    assert "G_{4.8}^α ⋊ (ℤ₂)²" in err


def test_stabilizer_a21_m3_elements(capsys):
    code, out, _ = run(capsys, "stabilizer", "--algebra", "A2+2A1", "--case", "M3", "--alpha", "1", "--lambda", "1")
    js = json.loads(out)
    assert code == 0 and js["label"] == "Z2^2"
    diag = sorted(tuple(row[i][i] for i in range(4)) for row in js["elements"])
    assert diag == sorted([(1, 1, 1, 1), (1, 1, 1, -1), (1, -1, -1, 1), (1, -1, -1, -1)])


def test_stabilizer_non_type_r_is_containment_only(capsys):
    code, out, _ = run(capsys, "stabilizer", "--algebra", "A412", "--case", "M1")
    js = json.loads(out)
    assert code == 0 and js["match"] is None
    assert "⊆" in js["decomposition"] and "≅" not in js["decomposition"]


def test_stabilizer_bad_param_exit_2(capsys):
    code, out, _ = run(capsys, "stabilizer", "--algebra", "A47", "--case", "M2", "--alpha", "-1",
                       "--beta", "1", "--lambda", "1", "--mu", "1")
    assert code == 2 and out == ""
    code, out, _ = run(capsys, "stabilizer", "--algebra", "A47", "--case", "M2", "--alpha", "x/y")
    assert code == 2 and out == ""


def test_stabilizer_mismatch_exit_3(capsys, monkeypatch):
    real = stabilizer.isometry_report

    def wrong(*a, **k):
        return dataclasses.replace(real(*a, **k), expected="D4")

    monkeypatch.setattr(stabilizer, "isometry_report", wrong)
    code, out, err = run(capsys, "stabilizer", "--algebra", "A48", "--case", "M1", "--alpha", "1", "--mu", "2")
    assert code == 3 and "MISMATCH" in err and json.loads(out)["match"] is False


def test_stabilizer_from_u(capsys):
    code, out, _ = run(capsys, "stabilizer", "--algebra", "2A2", "--metric-u", "1,0,0,0;0,1,0,0;0,0,1,0;0,0,0,1")
    js = json.loads(out)
    assert code == 0 and js["label"] == "D4" and js["expected"] is None


def test_realize(capsys):
    code, out, _ = run(capsys, "realize", "--group", "G2.1", "--coord", "a=0", "--coord", "b=1")
    assert code == 0 and json.loads(out)["matrix"] == [[1.0, 1.0], [0.0, 1.0]]
    code, out, _ = run(capsys, "realize", "--group", "G3.3", "--brackets")
    assert "basis_match" in json.loads(out)
    code, _, err = run(capsys, "realize", "--group", "G7.7")
    assert code == 2 and "UnknownGroup" in err


def test_verify_all_single_algebra_deterministic(capsys):
    code, out, _ = run(capsys, "verify-all", "--samples", "1", "--algebra", "A44")
    assert code == 0
    assert out == run(capsys, "verify-all", "--samples", "1", "--algebra", "A44")[1]
    js = json.loads(out)
    assert js["matched"] == js["total"] > 0


def test_argparse_usage_error_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["stabilizer"])
    assert exc.value.code == 2
