from itertools import combinations, permutations, product

import pytest
from hypothesis import given, settings

from impure_s5.corpus import bad_k
from impure_s5.formula import Atom, Not, Var, parse, top
from impure_s5.search import (Bounds, MaskEvaluator, count_complexes, enumerate_complexes,
                              enumerate_models, find_countermodel, soundness_sweep,
                              valuation_model, _pairs)
from impure_s5.semantics import TV, eval3

from test_formula import formulas


def _brute_complexes(agents, bound):
    """Labeled complexes as downward-closed simplex sets, every vertex used."""
    out = []
    for counts in product(range(bound + 1), repeat=len(agents)):
        if not any(counts):
            continue
        verts = [f"{a}{i}" for a, c in zip(agents, counts) for i in range(c)]
        slots = [[None] + [f"{a}{i}" for i in range(c)] for a, c in zip(agents, counts)]
        simplices = sorted({frozenset(v for v in pick if v) for pick in product(*slots)}
                           - {frozenset()}, key=len)
        big = [s for s in simplices if len(s) >= 2]
        for k in range(len(big) + 1):
            for chosen in combinations(big, k):
                chosen = set(chosen)
                closed = all(frozenset(t) in chosen or len(t) < 2
                             for s in chosen for t in combinations(s, len(s) - 1))
                if closed:
                    out.append((tuple(counts), frozenset(chosen) | {frozenset([v]) for v in verts}))
    return out


def _iso_classes(agents, items):
    classes = []
    for counts, faces in items:
        perms = [list(permutations(range(c))) for c in counts]
        images = set()
        for choice in product(*perms):
            ren = {f"{a}{i}": f"{a}{p[i]}" for a, c, p in zip(agents, counts, choice) for i in range(c)}
            images.add(frozenset(frozenset(ren[v] for v in s) for s in faces))
        if not any(c == counts and rep in images for c, rep in classes):
            classes.append((counts, faces))
    return len(classes)


@pytest.mark.parametrize("agents, bound", [("ab", 1), ("ab", 2), ("ab", 3), ("abc", 1)])
def test_complex_counts_against_brute_force(agents, bound):
    brute = _brute_complexes(agents, bound)
    assert count_complexes(agents, bound) == len(brute)
    assert count_complexes(agents, bound, dedupe=True) == _iso_classes(agents, brute)


@pytest.mark.parametrize("agents, bound, labeled, iso", [
    ("ab", 1, 4, 4), ("ab", 2, 30, 19), ("ab", 3, 688, 91), ("abc", 1, 18, 18),
    ("abc", 2, 14158, 2337),
])
def test_pinned_complex_counts(agents, bound, labeled, iso):
    assert count_complexes(agents, bound) == labeled
    assert count_complexes(agents, bound, dedupe=True) == iso


def test_enumerated_complexes_have_maximal_facets():
    for m in enumerate_complexes("ab", 2):
        for f in m.facets:
            assert not any(f < g for g in m.facets)


def test_one_agent_one_vertex_two_models():
    ms = list(enumerate_models(Bounds(("a",), 1, 1)))
    assert len(ms) == 2
    vals = sorted(eval3(m, m.facets[0], Atom(Var("p", "a"))).value for m in ms)
    assert vals == ["F", "T"]


def test_bounds_validation():
    with pytest.raises(ValueError):
        Bounds(())
    with pytest.raises(ValueError):
        Bounds(("a",), 0)
    assert Bounds(("b", "a", "b")).agents == ("a", "b")


@settings(max_examples=60, deadline=None)
@given(formulas(("a", "b"), max_leaves=6))
def test_mask_evaluator_matches_reference(f):
    variables = [Var(n, a) for a in "ab" for n in "pq"]
    for m in list(enumerate_complexes("ab", 2))[::5]:
        ev = MaskEvaluator(m, variables)
        for idx, model in enumerate(_models_of(m, variables)):
            for i, x in enumerate(ev.faces):
                assert ev.tv(i, f, idx) is eval3(model, x, f)


def _models_of(m, variables):
    return [valuation_model(m, variables, i) for i in range(1 << len(_pairs(m, variables)))]


def test_countermodel_for_unrestricted_k():
    hit = find_countermodel(bad_k(), Bounds(("a", "b", "c"), 2, 1))
    assert hit is not None
    m, x = hit
    assert eval3(m, x, bad_k()) is TV.F


@pytest.mark.parametrize("text", ["(K[a] p_b -> p_b)", "(K[a] p_a | K[a] ~p_a)",
                                  "(~K[a] p_b -> K[a] ~K[a] p_b)", "(p_a | ~p_a)"])
def test_no_countermodel_for_valid_schemas(text):
    assert find_countermodel(parse(text), Bounds(("a", "b", "c"), 2, 1)) is None


def test_countermodel_respects_bounds():
    # needs two b-vertices next to one a-vertex
    f = parse("(Kh[a] p_b -> K[a] p_b)")
    assert find_countermodel(f, Bounds(("a", "b"), 2, 1)) is not None
    assert find_countermodel(f, Bounds(("a", "b"), 1, 1)) is None


def test_local_constant_never_false():
    assert find_countermodel(Not(Not(top("a"))), Bounds(("a", "b"), 2, 1)) is None


def test_small_sweep_is_clean():
    r = soundness_sweep(Bounds(("a", "b", "c"), 1, 1), per_schema=8, seed=3)
    assert not r.countermodels
    # one vertex per agent is too small for the unrestricted K countermodel
    assert r.unrestricted_k_fails is False
    assert {"T", "4", "5", "L", "KKh", "Kdef", "N"} <= set(r.counts)
