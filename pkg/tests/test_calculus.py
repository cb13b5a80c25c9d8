import pytest
from hypothesis import given, strategies as st

from impure_s5.calculus import (AXIOMS, Derivation, axiom_instance, check_derivation,
                                check_hypothesis_derivation, check_inconsistency_witness,
                                flatten, format_derivation, match_axiom, parse_derivation,
                                tautology_check)
from impure_s5.corpus import bad_k
from impure_s5.derived import expand_macro
from impure_s5.formula import And, Atom, Implies, Know, Not, Or, Var, parse
from impure_s5.transcripts import NEGATIVE, TRANSCRIPTS, inconsistency_witness, transcript

from test_formula import formulas

pa, pb, pc = (Atom(Var("p", x)) for x in "abc")


@pytest.mark.parametrize("name", list(TRANSCRIPTS))
def test_transcripts_accepted_with_proven_provisos(name):
    t = TRANSCRIPTS[name]
    r = check_derivation(t.build(), "require-proven")
    assert r.accepted, r.summary()
    assert r.all_proven
    if t.lines is not None:
        assert r.top_lines == t.lines


@pytest.mark.parametrize("name", list(TRANSCRIPTS) + list(NEGATIVE))
def test_text_round_trip(name):
    d = transcript(name)
    again = parse_derivation(format_derivation(d))
    assert [l.formula for l in again.lines] == [l.formula for l in d.lines]
    assert check_derivation(again).verdict == check_derivation(d).verdict


def test_unrestricted_mp_rejected_at_mp_line():
    r = check_derivation(transcript("unrestricted_mp"))
    assert r.verdict == "REJECTED" and r.label == "3"
    assert "refuted" in r.reason
    assert [p.status for p in r.provisos] == ["FAILED"]


def test_kdef_on_unrestricted_k_rejected():
    d = Derivation()
    d.ax("Kdef", bad_k())
    r = check_derivation(d)
    assert not r.accepted and "proviso" in r.reason


@given(formulas(("a", "b")), formulas(("a", "b")), st.sampled_from("ab"))
def test_axiom_instances_match_back(phi, psi, a):
    for name in ("T", "4", "5", "Kdef", "KKh"):
        f = axiom_instance(name, a, phi, psi)
        inst = match_axiom(name, f)
        assert inst is not None and inst.agent == a and inst.phi == phi
        if name in ("Kdef", "KKh"):
            assert inst.psi == psi


def test_l_axiom():
    f = axiom_instance("L", "a", pa)
    assert match_axiom("L", f).phi == pa
    with pytest.raises(ValueError):
        axiom_instance("L", "a", pb)


def test_axiom_mismatch():
    assert match_axiom("T", Implies(Know("a", pa), pb)) is None
    assert match_axiom("4", Implies(Know("a", pa), Know("b", Know("a", pa)))) is None
    with pytest.raises(ValueError):
        match_axiom("K", pa)
    assert set(AXIOMS) == {"T", "4", "5", "L", "Kdef", "KKh"}


@pytest.mark.parametrize("text, valid", [
    ("(p_a | ~p_a)", True),
    ("(K[a] p_b -> K[a] p_b)", True),
    ("((p_a & K[b] p_c) -> K[b] p_c)", True),
    ("(K[a] p_b -> p_b)", False),        # K-formulas are opaque letters
    ("(p_a -> p_b)", False),
])
def test_tautology_check(text, valid):
    assert tautology_check(parse(text)) is valid


def test_rejections_name_the_line():
    d = Derivation()
    d.taut(Implies(pa, pb))
    r = check_derivation(d)
    assert r.verdict == "REJECTED" and r.label == "1"
    d = Derivation()
    d.premise(pa)
    d.n(0, "a")
    d.lines[1] = d.lines[1].__class__(Know("a", pb), d.lines[1].just, "", "2")
    assert "N must conclude" in check_derivation(d).reason


def test_macro_expansion_flattens():
    d = Derivation()
    h1 = d.premise(Implies(pa, pb))
    h2 = d.premise(Implies(pb, Know("b", pb)))
    d.macro("HS", h1, h2)
    flat, where = flatten(d)
    assert len(flat) > len(d)
    assert flat[-1].formula == Implies(pa, Know("b", pb))
    assert check_derivation(d).accepted


def test_bad_macro_arguments():
    with pytest.raises(ValueError):
        expand_macro("HS", [Implies(pa, pb), Implies(pc, pa)])


def test_parse_errors():
    with pytest.raises(ValueError, match="line 1"):
        parse_derivation("1 p_a")
    with pytest.raises(ValueError, match="duplicate label"):
        parse_derivation("1 p_a ; premise\n1 p_b ; premise")
    with pytest.raises(ValueError, match="unknown justification"):
        parse_derivation("1 p_a ; magic")


def test_forward_reference_rejected():
    d = parse_derivation("1 K[a] p_a ; N 2\n2 p_a ; premise")
    r = check_derivation(d)
    assert not r.accepted and r.label == "1"


def test_policies():
    with pytest.raises(ValueError):
        check_derivation(Derivation(), "whatever")
    assert check_derivation(Derivation()).verdict == "REJECTED"


def test_inconsistency_witness():
    gamma, d = inconsistency_witness()
    assert check_inconsistency_witness(gamma, d)
    assert not check_inconsistency_witness([], d)
    assert not check_inconsistency_witness([Know("a", pb)], d)


def test_hypothesis_derivation():
    # |- (p_a & p_b) -> p_a witnesses {p_a & p_b} |- p_a
    d = Derivation()
    d.taut(Implies(And(pa, pb), pa))
    assert check_hypothesis_derivation([And(pa, pb)], pa, d).accepted
    assert not check_hypothesis_derivation([pb], pa, d).accepted
    d2 = Derivation()
    d2.premise(pa)
    assert not check_hypothesis_derivation([pa], pa, d2).accepted


def test_or_is_sugar():
    assert Or(pa, pb) == Not(And(Not(pa), Not(pb)))
