import json
import subprocess
import sys
from pathlib import Path

import pytest

from coxtrees import cli
from coxtrees.wall_trees import CheckReport

DATA = Path(__file__).parent / "data"


def run(capsys, *args):
    status = cli.main([str(a) for a in args])
    out, err = capsys.readouterr()
    return status, out, err


def test_classify_triangle(capsys):
    status, out, _ = run(capsys, "classify", "--input", DATA / "triangle_237.txt")
    report = json.loads(out)
    assert status == 0
    assert report["kind"] == "Indefinite" and report["component_count"] == 1


def test_classify_json_input(capsys):
    status, out, _ = run(capsys, "classify", "-i", DATA / "affine_a2.json")
    assert status == 0 and json.loads(out)["components"][0]["name"] == "affine-A2"


def test_trees_on_infinite_dihedral(capsys):
    status, out, _ = run(capsys, "trees", "-i", DATA / "i2_inf.txt", "--prime", 3, "--radius", 12)
    report = json.loads(out)
    checks = {c["check"]: c for c in report["checks"]}
    assert status == 0
    assert checks["dichotomy"]["passed"] and checks["dichotomy"]["checked"] >= 10_000
    assert checks["properness"]["passed"]
    assert report["subgroup"]["image_order"] == 6 and len(report["trees"]) == 6
    assert all("boundary_misses" in c for c in report["checks"])


def test_corrupted_matrix_is_a_parse_error(capsys):
    status, out, err = run(capsys, "verify", "-i", DATA / "corrupted.txt")
    assert status == 2 and json.loads(out)["error"] == "parse" and "row 2" in err


def test_missing_file(capsys):
    status, _, _ = run(capsys, "classify", "-i", DATA / "nope.txt")
    assert status == 2


def test_bad_config(capsys):
    assert run(capsys, "classify", "-s", "H3", "--prime", 4)[0] == 2
    assert run(capsys, "classify", "-s", "H3", "--radius", -1)[0] == 2
    assert run(capsys, "ball", "-s", "H3", "--format", "dot")[0] == 2
    assert run(capsys, "classify", "-s", "Q7")[0] == 2


def test_budget_exceeded(capsys, monkeypatch):
    status, out, _ = run(capsys, "ball", "-s", "polygon(5)", "-r", 10, "-b", 100)
    assert status == 3 and json.loads(out)["partial"] > 0
    monkeypatch.setenv("COXTREES_BUDGET", "50")
    assert run(capsys, "ball", "-s", "polygon(5)", "-r", 10)[0] == 3


def test_violation_exit_status_and_witness(capsys, monkeypatch):
    failing = CheckReport("representation", False, 1, 1, witness={"generator": "s0"})
    monkeypatch.setattr(cli, "representation_soundness", lambda sys: failing)
    status, out, err = run(capsys, "verify", "-s", "I2(5)", "-r", 3)
    assert status == 1 and '"generator": "s0"' in err
    assert json.loads(out)["passed"] is False


def test_ball_davis_walls(capsys):
    status, out, _ = run(capsys, "ball", "-s", "I2(3)", "-r", 4)
    assert status == 0 and json.loads(out)["growth"] == [1, 2, 2, 1, 0]
    status, out, _ = run(capsys, "davis", "-s", "A3", "-r", 10)
    report = json.loads(out)
    # vertices of the Davis complex of a finite group: one per coset of each spherical subset
    assert status == 0 and report["euler_characteristic"] == 1
    assert report["f_vector"][0] == 24 + 3 * 12 + (4 + 4 + 6) + 1
    status, out, _ = run(capsys, "walls", "-s", "H3", "-r", 20)
    report = json.loads(out)
    assert report["walls"] == 15 and report["relation_histogram"]["Cross"] == 105


def test_raag_and_orbifold(capsys):
    status, out, _ = run(capsys, "raag", "-i", DATA / "k4.dot")
    report = json.loads(out)
    assert status == 0 and report["kahler_raag"]["verdict"] == "PASS"
    assert report["embedding"]["verified_index"] == 16
    status, out, _ = run(capsys, "raag", "-i", DATA / "path.graph", "-f", "dot", "-r", 3)
    assert status == 0 and out.startswith("graph G {")
    status, out, _ = run(capsys, "orbifold", "-i", DATA / "orbifold_237.json")
    assert status == 0 and json.loads(out)["euler_characteristic"] == "-1/42"


def test_text_and_dot_formats(capsys):
    status, out, _ = run(capsys, "classify", "-s", "triangle(2,3,7)", "-f", "text")
    assert status == 0 and "kind: \"Indefinite\"" in out
    status, out, _ = run(capsys, "trees", "-s", "I2(inf)", "-p", 3, "-r", 6, "-f", "dot")
    assert status == 0 and out.count("graph orbit") == 6


def test_verify_is_deterministic(capsys):
    args = ("verify", "-i", DATA / "triangle_237.txt", "-r", 6, "--seed", 7)
    first = run(capsys, *args)
    second = run(capsys, *args)
    assert first[0] == 0 and first[1] == second[1]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "coxtrees", "orbifold", "-i", str(DATA / "orbifold_237.json")],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and '"hyperbolic": true' in proc.stdout


@pytest.mark.parametrize("label", ["H3", "I2(inf)", "affine-A2", "triangle(2,3,7)", "polygon(5)"])
def test_system_labels(label):
    assert cli.system_from_label(label).rank >= 2
