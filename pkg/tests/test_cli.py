import json
import subprocess
import sys

import pytest

from dgakit.cli import main, parse_sigma, run
from dgakit.report import RunReport, export, parse_export


def _json(capsysbinary, argv):
    code, rep = run(argv + ["--format", "json", "--quiet"])
    out = capsysbinary.readouterr().out
    return code, rep, out


def test_homology_example(capsys):
    code, rep = run(["homology", "examples:C-p2", "--max-degree", "6", "--quiet"])
    assert code == 0
    groups = {g["degree"]: g["factors"] for g in rep.results["groups"]}
    assert groups == {0: [2], 1: [], 2: [2], 3: [], 4: [], 5: [], 6: []}
    out = capsys.readouterr().out
    lines = [ln for ln in out.splitlines() if ln.startswith("H_")]
    assert [ln.split(" ")[0] for ln in lines] == [f"H_{n}" for n in range(7)]


def test_every_group_has_validity(capsysbinary):
    code, rep, out = _json(capsysbinary, ["homology", "examples:C-5.4", "--max-degree", "6"])
    data = json.loads(out)
    assert data["schema_version"] == 1
    assert all("valid_through" in g for g in data["results"]["groups"])


def test_json_round_trip_and_determinism(capsysbinary):
    argv = ["distinguish", "examples:C-p2", "examples:D-p2", "--max-degree", "6"]
    _, rep, first = _json(capsysbinary, argv)
    _, _, second = _json(capsysbinary, argv)
    assert first == second
    back = parse_export(first)
    assert back.to_dict() == rep.to_dict()
    assert back.results["verdict"] == "not quasi-isomorphic"
    assert back.results["witness"]["feature"] == "degree1_squares_zero"


def test_unknown_input(capsys):
    assert main(["homology", "does-not-exist", "--max-degree", "3"]) == 2
    assert "unknown input" in capsys.readouterr().err
    assert main(["homology", "examples:nope", "--max-degree", "3"]) == 2


def test_usage_errors(capsys):
    assert main([]) == 2
    assert main(["frobnicate"]) == 2
    assert main(["homology", "examples:C-p2"]) == 2  # --max-degree required
    assert main(["thh-compare", "--k1", "s"]) == 2


def test_presentation_error_file(tmp_path, capsys):
    f = tmp_path / "bad.dga"
    f.write_text('dga "bad" over Z { gen a:1; diff b = 1; }')
    assert main(["homology", str(f), "--max-degree", "2"]) == 2
    assert "line 1" in capsys.readouterr().err


def test_file_input(tmp_path, capsys):
    f = tmp_path / "cp2.dga"
    f.write_text('dga "C" over Z {\n  gen e:1;\n  diff e = 2;\n  rel e^4;\n}\n')
    assert main(["homology", str(f), "--max-degree", "4", "--quiet"]) == 0
    assert "H_2 = Z/2" in capsys.readouterr().out


def test_hypothesis_failure_exit(tmp_path, capsys):
    f = tmp_path / "bad.dga"
    f.write_text('dga "bad" over Z { gen a:1, b:2; diff a = 1; diff b = a; }')
    assert main(["validate", str(f), "--max-degree", "3", "--quiet"]) == 1


def test_resource_cap_exit(tmp_path, capsys):
    f = tmp_path / "free.dga"
    f.write_text('dga "free" over Z { gen a:1, b:1, c:1; }')
    assert main(["homology", str(f), "--max-degree", "8", "--monomial-cap", "50"]) == 3
    assert "cap" in capsys.readouterr().err


def test_ground_override(capsys):
    code, rep = run(["homology", "examples:C-p2", "--ground", "F2", "--max-degree", "4", "--quiet"])
    assert code == 0
    assert rep.results["groups"][1]["factors"] == [0]  # an F_2 in degree 1 once 2 = 0


def test_seed_has_no_effect(capsysbinary):
    a = _json(capsysbinary, ["homology", "examples:D-5.4", "--max-degree", "5", "--seed", "1"])[2]
    b = _json(capsysbinary, ["homology", "examples:D-5.4", "--max-degree", "5", "--seed", "99"])[2]
    assert a == b


def test_resolve_lists_stages(capsys):
    code, rep = run(["resolve", "examples:F2", "--max-degree", "5", "--quiet"])
    assert code == 0
    assert [(g["name"], g["degree"], g["stage"]) for g in rep.results["generators"]] == \
        [("e", 1, 2), ("f", 3, 3), ("g", 5, 4)]
    assert "stage 4: g;" in capsys.readouterr().out


def test_kinv_classify_thh(capsys):
    assert run(["kinv", "examples:C-p2", "--n", "1", "--quiet"])[1].results["coords"] == [1]
    rep = run(["classify", "examples:F3", "--n", "1", "--quiet"])[1]
    assert rep.results["orbit_count"] == 2 and rep.results["group_order"] == 3
    v = run(["thh-compare", "examples:C-p2", "examples:D-p2", "--n", "1", "--quiet"])[1]
    assert v.results["verdict"].startswith("topologically equivalent")
    v = run(["thh-compare", "--prime", "3", "--k1", "s^3", "--k2", "0", "--quiet"])[1]
    assert v.results["equivalent"] is True


def test_hh_and_der_commands(capsys):
    rep = run(["hh", "examples:F2", "--max-degree", "4", "--quiet"])[1]
    assert [g["factors"] for g in rep.results["groups"]][:5] == [[2], [], [2], [], [2]]
    rep = run(["der", "examples:F2", "--max-degree", "4", "--quiet"])[1]
    assert {g["degree"]: g["factors"] for g in rep.results["groups"]}[3] == [2]


def test_catalog_and_verify(capsys):
    rep = run(["catalog", "--quiet"])[1]
    ids = [e["id"] for e in rep.results["entries"]]
    assert {"C-p2", "C-5.4", "F2", "F3", "F5"} <= set(ids)
    code, rep = run(["verify-catalog", "C-p2", "F2", "--quiet"])
    assert code == 0 and rep.results["failed"] == 0


def test_parse_sigma():
    assert parse_sigma("s^2 + 3*s", 2) == {2: 1, 1: 1}
    assert parse_sigma("0", 3) == {}
    assert parse_sigma("2*σ^3", 3) == {3: 2}
    with pytest.raises(Exception):
        parse_sigma("x^2", 2)


def test_export_text_and_bad_format():
    rep = RunReport("homology", ["x"], 3, {"groups": []}, text=["H_0 = Z"])
    assert export(rep, "text") == b"H_0 = Z\nvalid through degree 3\n"
    with pytest.raises(ValueError):
        export(rep, "xml")


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "dgakit.cli", "homology", "does-not-exist"],
                         capture_output=True, text=True)
    assert out.returncode == 2
