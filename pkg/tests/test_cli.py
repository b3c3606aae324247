import json

import pytest

from k3cox.cli import EXIT_COMPUTE, EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, main
from k3cox.database import get_record


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_verify_s1(capsys):
    code, out = run(capsys, "verify", "--lattice", "S_1")
    assert code == EXIT_OK
    assert "verify generators: match" in out.out


def test_cones_s2(capsys):
    code, out = run(capsys, "cones", "--lattice", "S_2", "--format", "structured")
    assert code == EXIT_OK
    rep = json.loads(out.out)
    assert [tuple(x) for x in rep["cones"]["BNef"]] == get_record("S_2").expected_bnef


def test_curves_text(capsys):
    code, out = run(capsys, "curves", "--lattice", "8")
    assert code == EXIT_OK and out.out.startswith("lattice: S_{4,1,1}")


def test_generators_custom_input(tmp_path, capsys):
    p = tmp_path / "custom.json"
    # the same form as S_{1,2,1}, unnamed and without curves
    p.write_text(json.dumps({"name": "custom", "gram": [list(r) for r in get_record("S_{1,2,1}").gram]}))
    code, out = run(capsys, "generators", "--input", str(p), "--format", "structured")
    assert code == EXIT_OK
    rep = json.loads(out.out)
    assert rep["provenance"] == "computed" and rep["verification"] is None
    assert len(rep["degrees"]) == 3 + 6


def test_mismatch_exit(tmp_path, capsys):
    rec = get_record("S_{4,1,1}").to_json()
    rec["expected_bnef"] = rec["expected_bnef"][:-1]
    p = tmp_path / "wrong.json"
    p.write_text(json.dumps(rec))
    code, out = run(capsys, "verify", "--input", str(p))
    assert code == EXIT_MISMATCH
    assert "verify BNef: MISMATCH extra (1,4,5)" in out.out


def test_usage_errors(tmp_path, capsys):
    assert run(capsys, "verify")[0] == EXIT_USAGE
    assert run(capsys, "bogus", "--lattice", "S_1")[0] == EXIT_USAGE
    assert run(capsys, "cones", "--lattice", "nope")[0] == EXIT_USAGE
    p = tmp_path / "asym.txt"
    p.write_text("x\n2\n0 1\n2 0\n")
    assert run(capsys, "cones", "--input", str(p))[0] == EXIT_USAGE


def test_timeout(capsys):
    code, out = run(capsys, "generators", "--lattice", "S_{1,9,1}", "--timeout", "0.2")
    assert code == EXIT_COMPUTE and "timed out" in out.err


def test_witnesses_and_no_l1(capsys):
    code, out = run(capsys, "generators", "--lattice", "S_6", "--no-l1", "--emit-witnesses", "--format", "structured")
    assert code == EXIT_OK
    rep = json.loads(out.out)
    assert rep["l1_unresolved"]
    assert any(v["witness"] for v in rep["verdicts"] if v["status"] == "eliminated")


def test_stored_rows(capsys):
    code, out = run(capsys, "verify", "--lattice", "S_{1,1,2}")
    assert code == EXIT_OK
    assert "provenance: stored" in out.out
    assert "verify generators-computed: match" in out.out
