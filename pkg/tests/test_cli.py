import json

from uq_adjoint.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_tables_json(capsys):
    code, out, _ = run(capsys, "tables", "--l", "5", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["total_dim"] == 125
    assert {"kind": "P", "weight": 4, "multiplicity": 5} in d["entries"]


def test_verify_json_to_file(tmp_path, capsys):
    path = tmp_path / "r.json"
    code, _, _ = run(capsys, "verify", "--l", "3", "--format", "json", "--checks", "casimir,matrices", "--out", str(path))
    d = json.loads(path.read_text())
    assert code == 0 and d["l"] == 3
    assert all(c["pass"] for c in d["checks"])


def test_matrix_text(capsys):
    code, out, _ = run(capsys, "matrix", "--l", "3", "--kind", "D", "--j", "0", "--k", "0")
    assert code == 0
    assert out.split() == ["-1", "-1", "-1", "-1"]


def test_decompose_block(capsys):
    code, out, _ = run(capsys, "decompose", "--l", "3", "--target", "ad-block", "--j", "-1", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["certificates_verified"]
    assert sorted((e["kind"], e["weight"]) for e in d["decomposition"]) == [("P", 0), ("P", 2)]


def test_bad_arguments(capsys):
    assert run(capsys, "tables", "--l", "4")[0] == 2
    assert run(capsys, "verify", "--l", "11", "--checks", "casimir")[0] == 2
    assert run(capsys, "verify", "--l", "3", "--checks", "bogus")[0] == 2
    assert run(capsys, "matrix", "--l", "3", "--kind", "A", "--j", "5")[0] == 2
    assert run(capsys, "matrix", "--l", "3", "--kind", "D", "--j", "0")[0] == 2
