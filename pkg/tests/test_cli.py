import json
import subprocess
import sys
from importlib import resources

import pytest

from ordercomplete.cli import main


def data_path(example, name):
    return str(resources.files("ordercomplete") / "data" / f"example{example}" / name)


def golden(example, name):
    return (resources.files("ordercomplete") / "data" / f"example{example}" / name).read_text()


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return path


def test_series_t(capsys):
    code, out, _ = run(capsys, "series", data_path(1, "t.rcp"), "--trunc", 3)
    assert code == 0
    assert out.startswith("q^-5: 1\n")
    assert out.endswith("O(q^3)\n")


def test_series_h(capsys):
    code, out, _ = run(capsys, "series", data_path(1, "h.rcp"), "--trunc", 1)
    assert code == 0
    assert out.splitlines() == ["q^-4: 11", "q^-3: 165", "q^-2: 748", "q^-1: 1639", "q^0: 3553", "O(q^1)"]


def test_series_json(capsys):
    code, out, _ = run(capsys, "series", data_path(1, "h.rcp"), "--trunc", 1, "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["valuation"] == -4
    assert data["coefficients"] == ["11", "165", "748", "1639", "3553"]


def test_version_on_stderr_only(capsys):
    _, out, err = run(capsys, "series", data_path(1, "t.rcp"))
    assert "0.1.0" in err and "0.1.0" not in out


def test_parse_error(capsys, tmp_path):
    code, _, err = run(capsys, "series", write(tmp_path, "bad.rcp", "(+ 1 (q"))
    assert code == 2
    assert "line 1, column 6" in err


def test_missing_file(capsys, tmp_path):
    code, _, _ = run(capsys, "series", tmp_path / "nope.rcp")
    assert code == 2


def test_bad_trunc(capsys):
    code, _, _ = run(capsys, "series", data_path(1, "t.rcp"), "--trunc", 0)
    assert code == 2


def test_evaluation_error(capsys, tmp_path):
    code, _, _ = run(capsys, "series", write(tmp_path, "z.rcp", "(/ 1 (- (q 0) 1))"))
    assert code == 3


def test_relation_golden(capsys):
    code, out, err = run(capsys, "relation", data_path(1, "t.rcp"), data_path(1, "f.rcp"))
    assert code == 0
    assert out == golden(1, "relation.txt")
    assert "degx=6 degy=5" in err


def test_relation_coprimality(capsys):
    t = data_path(1, "t.rcp")
    code, _, _ = run(capsys, "relation", t, t)
    assert code == 4


def test_basis_golden_and_deterministic(capsys, tmp_path):
    args = ("basis", data_path(1, "relation.txt"), "--t", data_path(1, "t.rcp"), "--f", data_path(1, "f.rcp"))
    code, first, _ = run(capsys, *args)
    assert code == 0
    code, second, _ = run(capsys, *args)
    assert first == second == golden(1, "basis.json")
    data = json.loads(first)
    assert [e["order"] for e in data["entries"]] == [0, 2, 3, 4, 5]
    assert data["gaps"] == [1]


def test_basis_d0(capsys):
    code, out, _ = run(
        capsys, "basis", data_path(1, "relation.txt"), "--t", data_path(1, "t.rcp"), "--f", data_path(1, "f.rcp"), "--d", 0
    )
    assert code == 0
    entries = json.loads(out)["entries"]
    assert len(entries) == 1
    assert entries[0]["series"] == ["1", "0", "0"]


def test_basis_negative_d(capsys):
    code, _, _ = run(
        capsys, "basis", data_path(1, "relation.txt"), "--t", data_path(1, "t.rcp"), "--f", data_path(1, "f.rcp"), "--d", -1
    )
    assert code == 6


def test_basis_degenerate_relation(capsys, tmp_path):
    rel = write(tmp_path, "sq.txt", "1 0 2\n-2 1 1\n1 2 0\n")
    code, _, _ = run(capsys, "basis", rel, "--t", data_path(1, "t.rcp"), "--f", data_path(1, "f.rcp"))
    assert code == 6


def test_express_golden(capsys):
    code, out, _ = run(capsys, "express", data_path(1, "basis.json"), data_path(1, "h.rcp"), "--trunc", 100)
    assert code == 0
    assert out == golden(1, "decomposition.json")
    data = json.loads(out)
    assert {t["order"]: t["coefficient"] for t in data["terms"]} == {4: "11", 3: "165", 2: "748", 0: "3553"}
    assert data["identity"]["pass"]


def test_express_constant(capsys, tmp_path):
    code, out, _ = run(capsys, "express", data_path(1, "basis.json"), write(tmp_path, "five.rcp", "5"))
    assert code == 0
    assert json.loads(out)["terms"] == [{"order": 0, "coefficient": "5", "coefficients": ["5"]}]


def test_express_gap(capsys, tmp_path):
    code, _, err = run(capsys, "express", data_path(1, "basis.json"), write(tmp_path, "gap.rcp", "(q -1)"))
    assert code == 7


def test_express_bad_json(capsys, tmp_path):
    code, _, _ = run(capsys, "express", write(tmp_path, "b.json", "{"), data_path(1, "h.rcp"))
    assert code == 2


def test_congruence(capsys):
    code, out, _ = run(capsys, "congruence", 11, 6, 11, 200)
    assert code == 0 and "PASS" in out
    code, out, _ = run(capsys, "congruence", 11, 5, 11, 10)
    assert code == 1 and "n = 0" in out


def test_out_flag(capsys, tmp_path):
    target = tmp_path / "t.txt"
    code, out, _ = run(capsys, "series", data_path(1, "t.rcp"), "--out", target)
    assert code == 0 and out == ""
    assert target.read_text().startswith("q^-5: 1")


def test_example1_end_to_end(capsys, tmp_path):
    code, out, _ = run(capsys, "example", 1, "--out", tmp_path)
    assert code == 0
    assert "PASS" in out
    for name in ("relation.txt", "basis.json", "decomposition.json"):
        assert (tmp_path / name).read_text() == golden(1, name), name


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ordercomplete", "congruence", "11", "6", "11", "50"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert proc.stdout.strip().endswith("PASS")
