import itertools

import pytest

from impure_s5 import corpus
from impure_s5.corpus import (DEMOS, bounded_subset, bounded_truth_agreement, build,
                              default_formulas, ka_local_fragment, phi_mp, psi_mp)
from impure_s5.formula import Implies, Know, Not, Var, parse
from impure_s5.search import Bounds
from impure_s5.semantics import TV, eval3
from impure_s5.suites import (definability_instances, definability_suite, monotonicity_suite,
                              symmetric_images)


@pytest.mark.parametrize("name", [n for n in DEMOS if n not in ("example_6_1", "lemma_6_2")])
def test_quick_demos_pass(name):
    r = corpus.demo(name)
    assert r.passed, r.text()


@pytest.mark.parametrize("name", ["example_6_1", "lemma_6_2"])
def test_xmas_demos_pass_at_size_5(name):
    r = corpus.demo(name, max_size=5)
    assert r.passed, r.text()


def test_c_mp_insensitive_to_undrawn_values():
    # the a and b vertices carry no drawn value; any choice gives the same verdicts
    nm = build("c_MP")
    m = nm.model
    ab = [v for v in m.vertices if m.color(v) in "ab"]
    three = Implies(phi_mp(), psi_mp())
    for bits in itertools.product([0, 1], repeat=len(ab)):
        trues = {v: [Var("p", m.color(v))] for v, b in zip(ab, bits) if b}
        trues["c1_left"] = [Var("p", "c")]
        mv = m.with_valuation(trues)
        assert eval3(mv, nm.face("X"), psi_mp()) is TV.F
        assert all(eval3(mv, x, three) is TV.U for x in mv.faces)


def test_c_k_golden_export():
    assert corpus.export("c_K") == (
        "# c_K: counterexample to unrestricted K\n"
        "# @X v_a0 v_b0\n"
        "# @Y v_a0 v_b1 v_c1\n"
        "agents a b c\n"
        "vertex v_a0 a { }\n"
        "vertex v_b0 b { }\n"
        "vertex v_b1 b { p }\n"
        "vertex v_c1 c { p }\n"
        "facet v_a0 v_b0\n"
        "facet v_a0 v_b1 v_c1\n")


def test_xmas_shape():
    nm = build("xmas", [True, False, True])
    assert len(nm.model.facets) == 4
    assert nm.face("Z_l") == {"va_l", "vc_r"}
    assert "a=1 b=0 c=1" in nm.note
    with pytest.raises(ValueError):
        build("c_K", [True, True, True])
    with pytest.raises(KeyError):
        build("nope")
    with pytest.raises(KeyError, match="known"):
        nm.face("Q")


def test_xmas_subset_witness_follows_b():
    fs = default_formulas(5)
    for vb in (False, True):
        nm = build("xmas", [False, vb, False])
        r = bounded_subset(nm.model, nm.face("Z_l"), nm.face("U_l"), fs)
        assert r and r.strict
        assert r.witnesses[0] == (parse("p_b") if vb else Not(parse("p_b")))
        back = bounded_subset(nm.model, nm.face("U_l"), nm.face("Z_l"), fs)
        assert not back


def test_disagreement_reports_a_witness():
    nm = build("c_K")
    r = bounded_truth_agreement(nm.model, nm.face("X"), nm.face("Y"), default_formulas(3))
    assert not r and r.status == "DISAGREE"
    assert r.values[0] is not r.values[1]


def test_ka_fragment_only_holds_true_k_formulas():
    nm = build("c_K")
    frag = ka_local_fragment(nm.model, nm.face("X"), "a", default_formulas(3))
    assert Know("a", parse("p_c")) in frag
    assert all(isinstance(f, Know) and f.agent == "a" for f in frag)


# -- suites ------------------------------------------------------------------

def test_small_definability_suite():
    r = definability_suite(("a", "b"), max_size=2, max_m=1, refuter_bound=2)
    assert r.ok, r.summary()
    assert all(r.instances[c] for c in "abcdefghijkl")


def test_symmetry_reduction_covers_all_instances_small():
    assert symmetric_images(("a", "b"), max_size=2, max_m=2)


@pytest.mark.slow
def test_symmetry_reduction_covers_all_instances():
    assert symmetric_images(("a", "b"), max_size=3, max_m=2)


@pytest.mark.slow
def test_full_definability_suite_without_symmetry():
    r = definability_suite(("a", "b"), max_size=3, max_m=2, refuter_bound=3, symmetric=False)
    assert r.ok, r.summary()


def test_instance_counts():
    counts = {}
    for inst in definability_instances(("a", "b"), max_size=2, max_m=1):
        counts[inst.clause] = counts.get(inst.clause, 0) + 1
    n = 8   # formulas of size <= 2 over two agents
    assert counts["a"] == counts["b"] == n ** 3
    assert counts["g"] == 2 * n * n
    assert counts["j"] == counts["k"] == 2 * n * n


def test_small_monotonicity_suite():
    r = monotonicity_suite(Bounds(("a", "b"), 1, 1), max_size=4)
    assert r.ok and r.models > 0 and r.checks > 0
