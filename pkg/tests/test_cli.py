import json
import subprocess
import sys
from fractions import Fraction

import pytest

from abelian_cs.cli import main
from abelian_cs.exact_linalg import PhaseModOne
from abelian_cs.manifold import build_s3


def run(capsys, *argv):
    status = main(list(argv))
    out = capsys.readouterr()
    return status, out.out, out.err


def test_homology_rp3(capsys):
    status, out, _ = run(capsys, "homology", "--manifold", "rp3")
    assert status == 0
    assert "H_1     0      [2]      Z_2" in out


def test_homology_json(capsys):
    status, out, _ = run(capsys, "homology", "--manifold", "lens-4", "--format", "json")
    rep = json.loads(out)
    assert [h["torsion"] for h in rep["homology"]] == [[], [4], [], []]


def test_homology_from_file(capsys, tmp_path):
    path = tmp_path / "m.json"
    path.write_text(build_s3().dumps())
    status, out, _ = run(capsys, "homology", "--manifold", str(path))
    assert status == 0 and "H_1     0      []       0" in out


def test_classify(capsys):
    status, out, _ = run(capsys, "classify", "--manifold", "rp3", "--format", "json")
    rows = {r["cycle"]: r for r in json.loads(out)["cycles"]}
    assert (rows["tau1"]["kind"], rows["tau1"]["degree"]) == ("torsion", 2)
    assert rows["triv"]["kind"] == "trivial"


def test_link_matrix(capsys):
    status, out, _ = run(capsys, "link", "--manifold", "rp3", "--link", "rp3-pair.json",
                         "--format", "json")
    rep = json.loads(out)
    assert status == 0
    assert Fraction(rep["linking_matrix"][0][1]).denominator == 2


def test_wilson_level_rejected(capsys):
    status, _, err = run(capsys, "wilson", "--manifold", "rp3", "--link", "rp3-torsion.json",
                         "--level", "3")
    assert status == 4
    assert "k = 2l" in err


def test_wilson_charge_rejected(capsys):
    status, _, err = run(capsys, "wilson", "--manifold", "rp3", "--link", "rp3-torsion.json",
                         "--level", "2", "--charges", "1")
    assert status == 4
    assert "q = 2m" in err


def test_wilson_hopf(capsys):
    status, out, _ = run(capsys, "wilson", "--manifold", "s3-heegaard", "--link", "hopf.json",
                         "--level", "2", "--charges", "1,1", "--format", "json")
    assert status == 0
    rep = json.loads(out)
    L = [[Fraction(x) for x in row] for row in rep["linking_matrix"]]
    assert L[0][1] == L[1][0] == 1
    total = L[0][0] + L[1][1] + 2 * L[0][1]
    assert PhaseModOne.parse(rep["phase"]) == PhaseModOne(-total / 8)


def test_wilson_text_and_decimal(capsys):
    status, out, _ = run(capsys, "wilson", "--manifold", "s3-heegaard", "--link", "hopf.json",
                         "--level", "2", "--decimal-digits", "6")
    assert status == 0
    assert "linking matrix:" in out and "phase: " in out and "decimal: " in out


def test_json_round_trip(capsys):
    status, out, _ = run(capsys, "wilson", "--manifold", "rp3", "--link", "rp3-pair.json",
                         "--level", "4", "--format", "json")
    rep = json.loads(out)
    for row in rep["linking_matrix"]:
        for x in row:
            assert Fraction(x) == Fraction(*map(int, x.split("/")))
    assert json.loads(json.dumps(rep)) == rep
    assert str(PhaseModOne.parse(rep["phase"])) == rep["phase"]


def test_deterministic(capsys):
    args = ["wilson", "--manifold", "lens-3", "--link", "lens-core.json", "--level", "3",
            "--charges", "3,3", "--format", "json"]
    first = run(capsys, *args)
    second = run(capsys, *args)
    assert first == second and first[0] == 0


def test_output_file(capsys, tmp_path):
    target = tmp_path / "report.txt"
    status, out, _ = run(capsys, "homology", "--manifold", "s3", "--output", str(target))
    assert status == 0 and out == ""
    assert "H_3" in target.read_text()


def test_twist_declared_inline(capsys, tmp_path):
    link = tmp_path / "link.json"
    link.write_text(json.dumps({
        "cycles": {"u": {"designated": "triv"}},
        "components": [{"cycle": "u", "twist": 1, "charge": 1}],
    }))
    s0 = run(capsys, "link", "--manifold", "s3-heegaard", "--link", str(link), "--format", "json")
    link.write_text(json.dumps({
        "cycles": {"u": {"designated": "triv"}},
        "components": [{"cycle": "u", "twist": 2, "charge": 1}],
    }))
    s1 = run(capsys, "link", "--manifold", "s3-heegaard", "--link", str(link), "--format", "json")
    a = Fraction(json.loads(s0[1])["components"][0]["self_linking"])
    b = Fraction(json.loads(s1[1])["components"][0]["self_linking"])
    assert b - a == 1


@pytest.mark.parametrize("body, code", [
    ("{not json", 2),
    ('{"components": [], "extra": 1}', 2),
    ('{"components": [{"cycle": "tau1", "colour": 1}]}', 2),
    ('{"components": [{"cycle": "tau1", "twist": 0, "pushoff": "tau1_push"}]}', 2),
    ('{"components": [{"cycle": "nope", "charge": 2}]}', 3),
    ('{"cycles": {"w": [[0, 0, 1]]}, "components": [{"cycle": "w", "charge": 2}]}', 3),
    ('{"components": [{"cycle": "tau1", "pushoff": "triv_push", "charge": 2}]}', 3),
])
def test_bad_link_files(capsys, tmp_path, body, code):
    link = tmp_path / "link.json"
    link.write_text(body)
    status, _, err = run(capsys, "wilson", "--manifold", "rp3", "--link", str(link), "--level", "2")
    assert status == code, err


def test_missing_inputs(capsys):
    assert run(capsys, "homology", "--manifold", "nowhere")[0] == 2
    assert run(capsys, "wilson", "--manifold", "rp3", "--level", "2")[0] == 2
    assert run(capsys, "wilson", "--manifold", "rp3", "--link", "missing.json", "--level", "2")[0] == 2
    assert run(capsys, "wilson", "--manifold", "rp3", "--link", "rp3-torsion.json", "--level", "2",
               "--charges", "a,b")[0] == 2


def test_charge_count(capsys):
    status, _, err = run(capsys, "wilson", "--manifold", "rp3", "--link", "lens-core.json",
                         "--level", "2")
    assert status == 2 and "charge" in err


def test_invalid_manifold_file(capsys, tmp_path):
    data = json.loads(build_s3().dumps())
    data["tetrahedra"][0][0], data["tetrahedra"][0][1] = data["tetrahedra"][0][1], data["tetrahedra"][0][0]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    status, _, err = run(capsys, "homology", "--manifold", str(path))
    assert status == 3 and "orientation mismatch" in err


def test_unsupported_manifold(capsys, tmp_path, s2xs1):
    path = tmp_path / "s2xs1.json"
    path.write_text(s2xs1.dumps())
    link = tmp_path / "link.json"
    link.write_text(json.dumps({"cycles": {"z": [list(s) for s in s2xs1.walk([0, 1]).steps]},
                                "components": [{"cycle": "z", "twist": 0, "charge": 1}]}))
    status, _, err = run(capsys, "wilson", "--manifold", str(path), "--link", str(link), "--level", "2")
    assert status == 5 and "unsupported manifold class" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "abelian_cs", "homology", "--manifold", "s3"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "H_0" in proc.stdout
