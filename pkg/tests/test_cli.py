import json

import pytest

from scharacters import bundled
from scharacters.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_info_j1(capsys):
    assert run(capsys, "info", "J1") == (0, "15 classes, 15 real, 10 rational\n", "")


@pytest.mark.parametrize("name, row", [("A8", (14, 12, 12)), ("M12", (15, 14, 14)), ("J1", (15, 15, 10))])
def test_info_json(capsys, name, row):
    code, out, _ = run(capsys, "info", name, "--format", "json")
    d = json.loads(out)
    assert code == 0 and (d["classes"], d["real"], d["rational"]) == row


def test_validate_s4(capsys):
    code, out, _ = run(capsys, "validate", str(bundled.resolve("S4")), "--format", "json")
    assert code == 0 and json.loads(out)["violations"] == []


def test_validate_corrupt(capsys, tmp_path):
    doc = json.loads(bundled.resolve("S4").read_text())
    doc["irreducibles"][2][1] = 3
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "validate", str(p))
    assert code == 1 and "row-orthogonality" in out


def test_corpus_relative_path(capsys):
    code, out, _ = run(capsys, "info", "corpus/A8.json")
    assert code == 0 and out.startswith("14 classes")


def test_search_a8_text(capsys):
    code, out, _ = run(capsys, "search", "corpus/A8.json", "--format", "text")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].split() == ["G", "#classes", "#real", "#rat.", "#S-char.", "#virt.S-char."]
    assert lines[1].split() == ["A8", "14", "12", "12", "1", "0"]
    assert "coefficients: 1 1 1 1 1 1 1 1 2 2 2 3 3 3" in out
    value_row = next(line for line in lines if line.strip().startswith("value"))
    assert value_row.split()[1:] == "953 9 1 5 2 1 1 3 1 0 1 1 0 0".split()


def test_search_output_is_deterministic(capsys):
    a = run(capsys, "search", "J1", "--format", "json")
    b = run(capsys, "search", "J1", "--format", "json")
    c = run(capsys, "search", "J1", "--format", "json", "--threads", "2")
    assert a == b == c
    assert "timings_ms" not in json.loads(a[1])
    d = run(capsys, "search", "J1", "--format", "json", "--timings")
    assert "timings_ms" in json.loads(d[1])


def test_enumerate_c2(capsys):
    code, out, _ = run(capsys, "enumerate", "C2", "--format", "json")
    assert code == 0 and json.loads(out)["points"] == [[-1], [0], [1]]


def test_enumerate_oracle_agrees(capsys):
    a = json.loads(run(capsys, "enumerate", "L2(7)", "--format", "json")[1])
    b = json.loads(run(capsys, "enumerate", "L2(7)", "--format", "json", "--oracle")[1])
    assert a["points"] == b["points"] and b["method"] == "brute-force"


def test_enumerate_threads_identical(capsys):
    a = run(capsys, "enumerate", "A8", "--format", "json")
    b = run(capsys, "enumerate", "A8", "--format", "json", "--threads", "3")
    assert a == b and json.loads(a[1])["count"] == 3636


def test_enumerate_strengthen_irrational_ignored(capsys):
    code, out, _ = run(capsys, "enumerate", "J1", "--strengthen-prime-power", "--format", "json", "--count-only")
    assert code == 0 and json.loads(out)["count"] == 58


def test_limit_exit_code(capsys):
    code, _, err = run(capsys, "enumerate", "A8", "--limit", "10")
    assert code == 2 and "limit" in err
    code, out, _ = run(capsys, "search", "A8", "--no-strengthen-prime-power", "--limit", "10")
    assert code == 2 and "status: limit" in out


def test_oracle_too_large(capsys):
    assert run(capsys, "enumerate", "A8", "--oracle")[0] == 1


def test_timeout_exit_code(capsys):
    assert run(capsys, "enumerate", "U4(3)", "--timeout", "0.05")[0] == 2


def test_missing_and_malformed(capsys, tmp_path):
    assert run(capsys, "info", str(tmp_path / "nope.json"))[0] == 1
    p = tmp_path / "bad.json"
    p.write_text('{"name": "x",\n "order": }')
    code, _, err = run(capsys, "info", str(p))
    assert code == 1 and "line 2" in err


def test_unknown_flag_rejected(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["info", "A8", "--bogus"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit):
        main(["info", "A8", "--format", "yaml"])


def test_simplex_s4(capsys):
    code, out, _ = run(capsys, "simplex", "S4", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["is_lattice"] and d["is_reflexive"] and d["is_self_polar"]
    assert [1, 2, 3, 3] in [v["coords"] for v in d["vertices"]]


def test_simplex_dilate(capsys):
    d = json.loads(run(capsys, "simplex", "L2(7)", "--dilate", "2", "--format", "json")[1])
    assert d["is_lattice"] and [-1, -2, 0, 2] in [v["coords"] for v in d["vertices"]]
    assert run(capsys, "simplex", "L2(7)", "--dilate", "0")[0] == 1


def test_project_irreducibles(capsys):
    code, out, _ = run(capsys, "project", "2.A8", "--target", "A8", "--irreducibles", "--format", "json")
    rows = json.loads(out)["irreducibles"]
    assert code == 0 and sum(r["image"] is None for r in rows) == 9


def test_project_hits(capsys):
    code, out, _ = run(capsys, "project", "2.A8", "--target", "A8", "--format", "json")
    hits = json.loads(out)["hits"]
    assert code == 0 and len(hits) == 2
    assert all(h["image_complex_coeffs"] == [1, 1, 1, 1, 1, 1, 1, 1, 2, 2, 2, 3, 3, 3] for h in hits)


def test_project_wrong_fusion(capsys):
    path = str(bundled.fusion_path("2.A8", "A8"))
    assert run(capsys, "project", "A8", "--target", "S4", "--fusion", path)[0] == 1


def test_figures(capsys, tmp_path):
    assert run(capsys, "search", "A8", "--figures", str(tmp_path))[0] == 0
    assert run(capsys, "simplex", "L2(7)", "--figures", str(tmp_path))[0] == 0
    assert run(capsys, "enumerate", "S4", "--figures", str(tmp_path), "--count-only")[0] == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["A8_hits.png", "L2_7__simplex.png", "S4_simplex.png"]
    assert all(p.stat().st_size > 1000 for p in tmp_path.iterdir())


def test_corpus_env(capsys, tmp_path, monkeypatch):
    (tmp_path / "Z.json").write_text(bundled.resolve("C2").read_text())
    monkeypatch.setenv("SCHARACTERS_CORPUS", str(tmp_path))
    assert run(capsys, "info", "Z") == (0, "2 classes, 2 real, 2 rational\n", "")
