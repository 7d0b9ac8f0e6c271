import os
from pathlib import Path

import pytest

import hors

SCHEMES = Path(os.environ.get("HORS_SCHEME_DIR", Path(__file__).resolve().parents[2] / "schemes"))


def load(name):
    return hors.load_scheme(str(SCHEMES / name))


def test_oi_and_io_disagree():
    g = load("diverge.hors")
    assert g.order == 1
    assert hors.value_tree(g, "oi")["tree"] == "c"
    io = hors.value_tree(g, "io", steps=1000)
    assert io["tree"] == "⊥"
    assert io["exhausted_budget"]


def test_barred_scheme_trace():
    gb = hors.bar_scheme(load("diverge.hors"))
    assert gb.order == 2
    run = hors.derive(gb, "io")
    assert [s["term"] for s in run["trace"]] == [
        "S_bar Delta",
        "F_bar (H_bar a_bar) c_bar Delta",
        "c_bar Delta",
        "c",
    ]
    assert all(s["oi"] and s["io"] for s in run["trace"])


def test_value_tree_of_the_second_example():
    g = load("btree.hors")
    res = hors.value_tree(g, "oi", depth=2)
    assert res["tree"] == "a (b ⊥ ⊥) ⊥ c"


def test_analysis_and_self_correction():
    g = load("mini.hors")
    env, iterations = hors.analyze(g)
    assert env["H"] == ["q∞"]
    assert iterations == 2
    assert hors.semantics(g, "F H") == ["q⊥", "q∞"]
    g2 = hors.io_to_oi(g)
    assert g2.order == g.order
    assert hors.value_tree(g2, "oi")["tree"] == "⊥"
    assert "Void" in g2.nonterminals


def test_round_trip_and_errors():
    g = load("mini.hors")
    assert hors.parse_scheme(g.render()) == g
    with pytest.raises(hors.ParseError):
        hors.parse_scheme("terminal c : o\nnonterminal S : o\nrule S = d\n")
    bad = hors.parse_scheme("terminal c : o\nnonterminal S : o\nstart S\n")
    assert any("missing rule" in d for d in bad.validate())
    with pytest.raises(hors.SchemeError):
        hors.value_tree(bad)
    with pytest.raises(hors.ComplexityLimit):
        hors.analyze(load("btree.hors"))
    with pytest.raises(ValueError):
        hors.value_tree(g, "lazy")
