import pytest
from hypothesis import given, settings

from impure_s5.defcons import (DefconsBudget, ReplayError, Step, _str, check_defcons,
                               def_translate, equidefinable, normalize, refute_by_enumeration,
                               replay, satisfies, tree_model)
from impure_s5.formula import Not, Var, enumerate_formulas, parse, to_str
from impure_s5.search import enumerate_complexes
from impure_s5.semantics import is_defined

from test_formula import formulas


def q(*texts):
    *gamma, psi = [parse(t) for t in texts]
    return gamma, psi


FS3 = enumerate_formulas("ab", [Var("p", "a"), Var("p", "b")], 3)


@pytest.mark.parametrize("texts", [
    ("K[a] p_b", "p_a"),                          # knowing needs being alive
    ("p_a", "K[a] p_a"),
    ("K[a] p_b", "K[a] K[a] p_b"),
    ("K[a] p_b", "~K[a] p_b"),
    ("K[a] p_c", "p_b", "K[a] p_b"),
    ("(p_a & p_b)", "(p_b & ~p_a)"),
    ("K[a] (K[b] p_c & p_b)", "K[a] K[b] p_b"),
])
def test_proven(texts):
    gamma, psi = q(*texts)
    r = check_defcons(gamma, psi)
    assert r.status == "PROVEN"
    assert replay(r.trace, gamma, psi)


@pytest.mark.parametrize("texts", [
    ("p_a", "p_b"),
    ("K[a] p_b", "K[b] p_a"),
    ("K[a] p_c", "K[a] (p_b & p_c)"),
    ("p_b", "K[a] p_b"),
])
def test_refuted(texts):
    gamma, psi = q(*texts)
    r = check_defcons(gamma, psi)
    assert r.status == "REFUTED"
    assert all(is_defined(r.model, r.face, g) for g in gamma)
    assert not is_defined(r.model, r.face, psi)


def test_empty_gamma_is_refuted_with_a_fresh_agent():
    r = check_defcons([], parse("p_a"))
    assert r.status == "REFUTED"
    assert not is_defined(r.model, r.face, parse("p_a"))


def test_equidefinable():
    a, b = equidefinable(parse("K[a] p_b"), parse("K[a] ~K[a] p_b"))
    assert a.status == b.status == "PROVEN"


def test_prover_agrees_with_enumeration_on_small_queries():
    mismatched = []
    for g in FS3:
        for psi in FS3:
            proven = check_defcons([g], psi).status == "PROVEN"
            if proven != (refute_by_enumeration([g], psi, 2) is None):
                mismatched.append((g, psi))
    assert not mismatched


def test_proven_queries_hold_on_every_small_complex():
    # reference evaluator, no skeletons involved
    complexes = list(enumerate_complexes("ab", 2))
    fs = [f for f in FS3 if len(to_str(f)) < 12]
    for g in fs:
        for psi in fs:
            if check_defcons([g], psi).status != "PROVEN":
                continue
            for m in complexes:
                for x in m.faces:
                    assert not is_defined(m, x, g) or is_defined(m, x, psi), (g, psi, m, x)


@settings(max_examples=200, deadline=None)
@given(formulas(("a", "b", "c")))
def test_skeleton_matches_definedness(f):
    for m in list(enumerate_complexes("ab", 2))[::3]:
        for x in m.faces:
            assert satisfies(m, x, def_translate(f)) == is_defined(m, x, f)


@given(formulas(("a", "b", "c")))
def test_normal_form_ignores_negation(f):
    assert normalize(def_translate(Not(Not(f)))) == normalize(def_translate(f))


@given(formulas(("a", "b", "c")))
def test_fast_printer_matches_to_str(f):
    assert _str(f) == to_str(f)


def test_replay_rejects_tampering():
    gamma, psi = q("K[a] p_c", "p_b", "K[a] p_b")
    trace = list(check_defcons(gamma, psi).trace)
    bad = trace[:-1] + [trace[-1]._replace(goal=parse("K[b] p_b"))]
    with pytest.raises(ReplayError):
        replay(bad, gamma, psi)
    forward = trace[:1] + [Step(frozenset(gamma), psi, "g", (5, 0))]
    with pytest.raises(ReplayError, match="earlier step"):
        replay(forward, gamma, psi)
    with pytest.raises(ReplayError):
        replay([], gamma, psi)


def test_tiny_budget_gives_unknown():
    gamma, psi = q("K[a] (K[b] p_c & p_b)", "K[a] K[b] p_b")
    r = check_defcons(gamma, psi, DefconsBudget(prover_steps=2))
    assert r.status == "UNKNOWN"
    assert "budget" in r.report


def test_tree_model_root_defines_gamma():
    gamma = [parse("K[a] (K[b] p_c & p_b)"), parse("K[c] p_a")]
    m, root = tree_model(gamma)
    assert all(is_defined(m, root, g) for g in gamma)
    with pytest.raises(ValueError):
        tree_model([])
