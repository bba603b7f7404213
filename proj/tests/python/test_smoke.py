import json
import pathlib

import pytest

import coarse_kit as ck

DATA = pathlib.Path(__file__).resolve().parent.parent / "cli" / "data"


def load(name):
    return json.loads((DATA / name).read_text())


def test_cover_dimension_and_disjointify():
    space, cover = load("path10.json"), load("path10_cover.json")
    assert ck.dim_at_scale(space, cover, 2) == 1
    out = ck.make_disjoint(space, cover, 2)
    assert out["n"] == 1 and out["family"]


def test_space_summary_round_trips():
    s = ck.space_summary(load("c6.json"))
    assert s["points"] == 6
    assert ck.space_summary(s["descriptor"])["diameter"] == s["diameter"]


def test_maps():
    f = load("abs9.json")
    p = ck.n_to_1_profile(f, 2, 3)
    assert p["max_components"] == 2
    assert not ck.n_to_1_control(f, 2)["refused"]
    assert ck.n_to_1_control(f, 1, limits={"clique_cap": 18})["control"]


def test_quotient_and_tree():
    q = ck.group_quotient(load("c6.json"), load("c6_antipodal.json"))
    assert q["orbits"] == [[0, 3], [1, 4], [2, 5]] and q["lipschitz"]
    t = load("tree16.json")
    assert ck.verify_tree(t["space"], t, "sfdc")["valid"]
    assert not ck.verify_tree(t["space"], load("tree16_bad.json"), "sfdc")["valid"]


def test_mass_family():
    m = ck.best_mass_family(load("path10.json"), load("line10_uniform.json"), 2, 3)
    assert abs(m["mass"] - 0.8) < 1e-9


def test_suite_is_deterministic():
    assert "lemma-disjointify" in ck.suite_names()
    a = ck.run_suite("lemma-disjointify", seed=7, count=20)
    assert a == ck.run_suite("lemma-disjointify", seed=7, count=20)
    assert a["passed"] == 20
    assert ck.digest(a) == ck.digest(json.dumps(a))


def test_errors():
    with pytest.raises(ValueError):
        ck.space_summary(load("malformed.json"))
    with pytest.raises(ValueError):
        ck.space_summary("{not json")
    with pytest.raises(ck.PreconditionError):
        ck.make_disjoint(load("path10.json"), {"sets": [[0, 1]]}, 2)
