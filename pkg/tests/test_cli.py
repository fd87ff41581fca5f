import json

import pytest

from semiinv.cli import main, run


def result(argv, code=0):
    got, report = run(argv)
    assert got == code, report
    return report["result"]


def test_ring_radical():
    res = result(["ring", "radical", "fixtures/z4.json"])
    assert res["radical"] == [[2]] and res["nilpotency_index"] == 2


def test_violations_exit_one():
    res = result(["ring", "radical", "fixtures/bad_assoc.json"], 1)
    assert res["error"] == "AssociativityViolation" and len(res["indices"]) == 3
    assert result(["ring", "radical", "fixtures/bad_unity.json"], 1)["error"] == "UnityViolation"


def test_input_errors_exit_two(tmp_path, capsys):
    broken = tmp_path / "broken.json"
    broken.write_text('{"modulus": 4,')
    assert main(["ring", "radical", str(broken)]) == 2
    assert "line 1" in capsys.readouterr().err
    assert result(["ring", "radical", "builtin:nope"], 2)["error"] == "InputError"
    assert result(["subring", "invariant", "builtin:M2(F3)", "fixtures/swap.json"], 2)["error"] == "InputError"


def test_report_is_written_to_file(tmp_path):
    out = tmp_path / "r.json"
    assert main(["ring", "idempotents", "builtin:Z/6", "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["status"] == "ok" and report["seed"] == 0
    assert report["result"]["idempotents"] == [[0], [1], [3], [4]]


def test_subring_commands():
    res = result(["subring", "verify-theorem", "builtin:M2(Z/4)", "fixtures/cent_e12.json"])
    assert res["n_min"] == 2 and res["ambient_nilpotency"] == 2
    assert result(["subring", "centralizer", "fixtures/m2f2.json", "fixtures/cent_e12.json"])["order"] == 4
    assert result(["subring", "invariant", "builtin:F2xF2", "fixtures/swap.json"])["span"] == [[1, 1]]


def test_fitting_command():
    res = result(["fitting", "builtin:Z/6", "--element", "2"])
    assert res["idempotent"] == [4] and res["verified"]


def test_tower_commands():
    res = result(["tower", "fixtures/matzpk.json", "idempotent", "--payload", "fixtures/diag13.json"])
    assert res["idempotent"] == [[1, 0, 0, 0]] * 4
    assert result(["tower", "fixtures/zpk4.json", "jac-openness"])["table"] == {"1": 1, "2": 2, "3": 3}
    res = result(["tower", "fixtures/zpk4.json", "closure", "--payload", "fixtures/closure.json"])
    assert res["member"]
    res = result(["tower", "fixtures/qt2.json", "subring-check", "--payload", "fixtures/opposite.json"])
    assert res["level_ranks"] == [4, 4]


def test_closure_outside_reports_level(tmp_path):
    payload = tmp_path / "c.json"
    payload.write_text('{"generators": [[3]], "candidate": [1]}')
    res = result(["tower", "fixtures/zpk4.json", "closure", "--payload", str(payload)], 1)
    assert res["error"] == "LevelUnsolvable" and res["level"] == 1


def test_module_commands():
    assert result(["module", "ks", "fixtures/z4z2.json"])["summands"] == ["Z/4", "Z/2"]
    assert result(["module", "end", "fixtures/z4z2.json"])["end_order"] == 32
    res = result(["module", "exact-seq", "fixtures/pres_z4.json"])
    assert res["surjective"] and res["quotient_iso"] and res["end_cokernel_order"] == 2
    res = result(["module", "restrict-check", "fixtures/restrict.json"])
    assert res["centralizer_identity"] and res["minimal"]


@pytest.mark.parametrize("source", ["fixtures/appendix.json", "builtin:appendix"])
def test_topology_separates(source):
    res = result(["topology", "compare", source])
    assert not res["coincide"]
    assert res["separating_ideal"] == 2 and res["witness"] == [[0, 2], [0, 0]]


def test_topology_coincide_and_ball():
    assert result(["topology", "compare", "builtin:z9"])["coincide"]
    balls = result(["topology", "ball", "builtin:appendix"])["balls"]
    assert [b["order"] for b in balls] == [2, 2, 2, 2]


def test_catalog_lists_fixtures():
    res = result(["catalog"])
    names = [r["name"] for r in res["rings"]]
    assert "M2(Z/4)" in names and "Z/6" in names
    assert res["tower_families"] and res["topology_fixtures"]
