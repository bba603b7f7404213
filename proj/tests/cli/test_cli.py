import json
import os
import pathlib
import subprocess

import pytest

DATA = pathlib.Path(__file__).resolve().parent / "data"
BIN = os.environ.get("COARSE_KIT", "coarse-kit")


def run(*args):
    p = subprocess.run([BIN, *map(str, args)], cwd=DATA, capture_output=True, text=True, timeout=600)
    report = json.loads(p.stdout) if p.stdout.strip().startswith("{") else None
    return p.returncode, report, p.stderr


def test_cover_dim_matches_library_value():
    code, r, err = run("cover", "dim", "--space", "path10.json", "--cover", "path10_cover.json", "--scale", 2)
    assert code == 0
    assert r["schema_version"] == 1
    assert r["result"]["dim"] == 1
    assert set(r["inputs"]) == {"space", "cover"}
    assert len(r["inputs"]["space"]["sha256"]) == 64
    assert "timing:" in err


def test_tree_verify_sfdc_example():
    code, r, _ = run("tree", "verify", "--tree", "tree16.json", "--mode", "sfdc")
    assert code == 0 and r["result"]["verification"]["valid"]


def test_tree_verify_violation_exits_1():
    code, r, _ = run("tree", "verify", "--tree", "tree16_bad.json", "--mode", "sfdc")
    assert code == 1 and not r["holds"]
    assert r["result"]["verification"]["violations"][0]["condition"] == "disjoint"


@pytest.mark.parametrize(
    "args",
    [
        ("cover", "dim", "--space", "missing.json", "--cover", "path10_cover.json", "--scale", 1),
        ("space", "--space", "broken.json"),
        ("space", "--space", "malformed.json"),
        ("cover", "dim", "--space", "path10.json"),
        ("suite", "no-such-suite"),
        ("tree", "push", "--map", "abs9.json", "--tree", "tree16.json", "--n", 2, "--targets", 1),
    ],
)
def test_usage_and_input_errors_exit_2(args):
    code, r, err = run(*args)
    assert code == 2 and r is None and err


def test_malformed_input_names_location():
    _, _, err = run("space", "--space", "broken.json")
    assert "broken.json" in err and "byte" in err


def test_refusal_exits_1_with_report():
    # {0..9} does not cover the domain {-9..9}.
    code, r, _ = run("map", "push", "--map", "abs9.json", "--cover", "path10_cover.json", "--r", 1, "--n", 2)
    assert code == 1 and "does not cover" in r["refusal"]
    code, r, _ = run("map", "control", "--map", "abs9.json", "--n", 1, "--cap", 1)
    assert code == 1 and r["result"]["refused"]


def test_disjointify_certificate():
    code, r, _ = run("cover", "disjointify", "--space", "path10.json", "--cover", "path10_cover.json", "--scale", 2)
    cert = r["result"]["certificate"]
    assert code == 0
    assert cert["covers"] and cert["disjoint"] and cert["inside_expansions"]
    assert cert["colors"] <= cert["colors_allowed"]


def test_map_commands():
    code, r, _ = run("map", "profile", "--map", "abs9.json", "--r", 2, "--big-r", 3, "--n", 2)
    assert code == 0 and r["result"]["max_components"] == 2
    code, r, _ = run("map", "control", "--map", "abs9.json", "--n", 2)
    assert code == 0 and not r["result"]["refused"]
    code, r, _ = run("map", "push", "--map", "abs9.json", "--cover", "abs9_cover.json", "--r", 1, "--n", 2, "--disjointify")
    assert code == 0 and r["result"]["image_dim"] <= r["result"]["bound"]
    code, r, _ = run("map", "factor", "--map", "abs9.json", "--big-r", 1, "--n", 2)
    assert code == 0 and r["result"]["sandwich_holds"]


def test_quotient_c6():
    code, r, _ = run("quotient", "--space", "c6.json", "--action", "c6_antipodal.json")
    assert code == 0
    assert r["result"]["orbits"] == [[0, 3], [1, 4], [2, 5]]
    assert r["result"]["quotient"]["matrix"] == [[0, 1, 1], [1, 0, 1], [1, 1, 0]]
    code2, r2, _ = run("quotient", "--space", "c6.json", "--generator", "3,4,5,0,1,2", "--order", 2)
    assert code2 == 0 and r2["result"] == r["result"]


def test_apc_commands():
    code, r, _ = run("apc", "witness", "--space", "line12.json", "--scales", "2,3", "--mesh-cap", 3)
    assert code == 0 and r["result"]["status"] == "found"
    code, r, _ = run("apc", "witness", "--space", "line12.json", "--scales", "100,200", "--mesh-cap", 1)
    assert code == 1 and r["result"]["status"] == "impossible"
    code, r, _ = run("apc", "normalize", "--space", "interval20.json", "--witness", "interval20_dims.json", "--gaps", "1,2")
    assert code == 0 and r["result"]["input_scales"] == [1, 3]
    code, r, _ = run("apc", "push", "--map", "abs9.json", "--witness", "abs9_apc.json", "--n", 2, "--targets", "0.1,0.2,0.3,0.4")
    assert code == 0
    code, r, _ = run("apc", "pull", "--map", "abs9.json", "--witness", "abs9_apc_y.json", "--targets", "1,2")
    assert code == 0 and r["result"]["covers"]


def test_tree_commands():
    for sub in ("refine", "convert"):
        code, r, _ = run("tree", sub, "--tree", "tree16.json")
        assert code == 0 and r["result"]["verification"]["valid"]
    code, r, _ = run("tree", "cover", "--tree", "tree16.json", "--scale", 2)
    assert code == 0 and r["result"]["covers"]
    code, r, _ = run("tree", "push", "--map", "abs9.json", "--tree", "abs9_tree_x.json", "--n", 2, "--targets", 0.25)
    assert code == 0 and r["result"]["tree"]["branching"] == [4]
    code, r, _ = run("tree", "pull", "--map", "abs9.json", "--tree", "abs9_tree_y.json", "--n", 2, "--targets", 1)
    assert code == 0 and r["result"]["max_pieces"] <= 2


def test_msp_commands():
    code, r, _ = run("msp", "family", "--space", "path10.json", "--measure", "line10_uniform.json", "--radius", 2, "--bound", 3)
    assert code == 0 and abs(r["result"]["mass_family"]["mass"] - 0.8) < 1e-9
    code, r, _ = run("msp", "push", "--map", "abs9.json", "--n", 2, "--measure", "abs9_uniform_y.json", "--radius", 1)
    assert code == 0 and r["result"]["family"]["mass"] >= 0.25
    code, r, _ = run("msp", "pull", "--map", "abs9.json", "--measure", "abs9_uniform_x.json", "--radius", 1)
    assert code == 0 and r["result"]["family"]["mass"] >= 0.25
    code, r, _ = run("msp", "check", "--map", "abs9.json", "--set", 3, "--radius", 1, "--bound", 0, "--c", 0.4, "--k", 0)
    assert code == 0 and r["result"]["exact"]


def test_suite_examples():
    code, r, _ = run("suite", "lemma-disjointify", "--seed", 7, "--count", 200)
    assert code == 0 and r["result"]["passed"] == 200
    code, r, _ = run("suite", "msp-pipelines", "--seed", 1)
    assert code == 0 and r["holds"]
    code, r, _ = run("suite", "sandwich", "--seed", 3, "--max-points", 16)
    assert code == 0 and r["holds"]


def test_reports_are_byte_identical():
    args = ("suite", "tree-transfer", "--seed", "5")
    a = subprocess.run([BIN, *args], cwd=DATA, capture_output=True).stdout
    b = subprocess.run([BIN, *args], cwd=DATA, capture_output=True).stdout
    assert a == b and len(a) > 0


def test_out_flag_writes_file(tmp_path):
    out = tmp_path / "r.json"
    code, r, _ = run("cover", "lebesgue", "--space", "path10.json", "--cover", "path10_cover.json", "--out", out)
    assert code == 0 and r is None
    assert json.loads(out.read_text())["result"]["lebesgue"] == 1
