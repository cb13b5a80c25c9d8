"""Acceptance criteria, one test each.

Every test prints ``[PASS]`` or ``[FAIL]`` with its wall time; the lines are
repeated in the pytest terminal summary.  ``python tests/test_acceptance.py``
runs them all without pytest.
"""
from __future__ import annotations

import time

import pytest

from impure_s5 import corpus, defcons
from impure_s5.calculus import check_derivation
from impure_s5.corpus import (bad_k, bounded_subset, bounded_truth_agreement, build,
                              default_formulas, ka_local_fragment, phi_mp, psi_mp)
from impure_s5.defcons import check_defcons
from impure_s5.formula import Atom, Implies, Know, Not, Var
from impure_s5.search import Bounds, find_countermodel, soundness_sweep
from impure_s5.semantics import TV, eval3, model_valid
from impure_s5.suites import definability_suite, monotonicity_suite
from impure_s5.transcripts import NEGATIVE, TRANSCRIPTS, kdef_on_bad_k

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:   # run as a script
    ACCEPTANCE_LINES = []


def _p(a):
    return Atom(Var("p", a))


def _report(n: int, title: str, ok: bool, seconds: float, limit: float, detail: str = ""):
    within = seconds < limit
    tag = "PASS" if ok and within else "FAIL"
    line = f"[{tag}] {n}. {title} ({seconds:.1f}s, limit {limit:g}s)"
    if detail:
        line += f" {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    return ok, within


def _timed(fn):
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t


# -- 1 -------------------------------------------------------------------------

def _c1():
    nm = build("c_K")
    m, f = nm.model, bad_k()
    at = {lab: eval3(m, nm.face(lab), f) for lab in ("X", "Y")}
    neg_valid = model_valid(m, Not(f))[0]
    ok = at == {"X": TV.F, "Y": TV.F} and neg_valid
    return ok, f"X={at['X']} Y={at['Y']} negation valid={neg_valid}"


def test_1_unrestricted_k_fails_on_c_k():
    (ok, detail), dt = _timed(_c1)
    ok, within = _report(1, "unrestricted K false at both facets of c_K", ok, dt, 1, detail)
    assert ok, detail
    assert within


# -- 2 -------------------------------------------------------------------------

def _c2():
    nm = build("c_MP")
    m = nm.model
    psi = psi_mp()
    at_x = eval3(m, nm.face("X"), psi)
    three = Implies(phi_mp(), psi)
    undefined = sum(eval3(m, x, three) is TV.U for x in m.faces)
    hit = find_countermodel(phi_mp(), Bounds(("a", "b", "c"), 2, 1))
    ok = at_x is TV.F and len(m.faces) == 13 and undefined == 13 and hit is None
    return ok, (f"psi at X={at_x}, (3) undefined at {undefined}/{len(m.faces)} faces, "
                f"T_a & T_b countermodel={'none' if hit is None else 'FOUND'}")


def test_2_unrestricted_mp_fails_on_c_mp():
    (ok, detail), dt = _timed(_c2)
    ok, within = _report(2, "c_MP: psi false at X, (3) nowhere defined", ok, dt, 10, detail)
    assert ok, detail
    assert within


# -- 3 -------------------------------------------------------------------------

def _c3():
    defcons._check.cache_clear()
    defcons._refute_key.cache_clear()
    r = definability_suite(("a", "b"), max_size=3, max_m=2, refuter_bound=3)
    detail = (f"{sum(r.goals.values())} goals over {sum(r.instances.values())} instances, "
              f"failures={len(r.failures)}, witnesses={len(r.witnesses)}")
    return r.ok and all(r.goals[c] > 0 for c in "abcdefghijkl"), detail


def test_3_definability_clauses():
    (ok, detail), dt = _timed(_c3)
    ok, within = _report(3, "definability clauses (a)-(l), size <= 3", ok, dt, 60, detail)
    assert ok, detail
    assert within


# -- 4 -------------------------------------------------------------------------

def _c4():
    r = soundness_sweep(Bounds(("a", "b", "c"), 2, 1), per_schema=60, seed=0)
    schemas = {"T", "4", "5", "L", "Kdef", "KKh"}
    ok = (r.total >= 500 and not r.countermodels and schemas <= set(r.counts)
          and r.unrestricted_k_fails)
    return ok, f"{r.total} instances, {len(r.countermodels)} countermodels"


def test_4_soundness_sweep():
    (ok, detail), dt = _timed(_c4)
    ok, within = _report(4, "soundness sweep at (3 agents, 2 vertices, 1 var)", ok, dt, 300, detail)
    assert ok, detail
    assert within


# -- 5 -------------------------------------------------------------------------

def _c5():
    r = monotonicity_suite(Bounds(("a", "b"), 2, 1), max_size=7)
    return r.ok and r.models > 0, r.summary()


def test_5_monotonicity_and_facet_validity():
    (ok, detail), dt = _timed(_c5)
    ok, within = _report(5, "monotonicity and facet validity, size <= 7", ok, dt, 120, detail)
    assert ok, detail
    assert within


# -- 6 -------------------------------------------------------------------------

_CORPUS = ["lemma_4_4", "lemma_4_8_neg", "lemma_4_8_pos", "lemma_5_10a_inner",
           "A_1", "A_2", "lemma_4_10_m1", "lemma_4_10_m3", "lemma_4_11", "lemma_4_12"]


def _c6():
    bad = []
    for name in _CORPUS:
        t = TRANSCRIPTS[name]
        r = check_derivation(t.build(), "require-proven")
        assumed = [p for p in r.provisos if p.status != "PROVEN"]
        if not r.accepted or assumed or (t.lines is not None and r.top_lines != t.lines):
            bad.append(name)
    lines = {n: check_derivation(TRANSCRIPTS[n].build()).top_lines for n in ("lemma_4_11", "lemma_4_12")}
    ok = not bad and lines == {"lemma_4_11": 14, "lemma_4_12": 8}
    return ok, f"{len(_CORPUS) - len(bad)}/{len(_CORPUS)} accepted, lines {lines}"


def test_6_derivation_corpus():
    (ok, detail), dt = _timed(_c6)
    ok, within = _report(6, "derivation corpus accepted, provisos proven", ok, dt, 30, detail)
    assert ok, detail
    assert within


# -- 7 -------------------------------------------------------------------------

def _c7():
    r = check_derivation(NEGATIVE["unrestricted_mp"].build(), "require-proven")
    mp_line = not r.accepted and r.label == "3" and r.lines[r.step].just.__class__.__name__ == "RuleMP"
    inst = kdef_on_bad_k()
    gamma, psi = inst.proviso
    res = check_defcons(gamma, psi)
    ok = mp_line and res.status == "REFUTED"
    return ok, f"MP derivation {r.verdict} at line {r.label}, Kdef proviso {res.status}"


def test_7_negative_controls():
    (ok, detail), dt = _timed(_c7)
    ok, within = _report(7, "negative controls", ok, dt, 10, detail)
    assert ok, detail
    assert within


# -- 8 -------------------------------------------------------------------------

def _c8():
    fs = default_formulas(7)
    bad = []
    for val in [(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)]:
        nm = build("xmas", [bool(v) for v in val])
        m, face = nm.model, nm.face
        pb = _p("b") if val[1] else Not(_p("b"))
        sub = bounded_subset(m, face("Z_l"), face("U_l"), fs)
        checks = [
            bool(bounded_truth_agreement(m, face("U_l"), face("U_r"), fs)),
            bool(bounded_truth_agreement(m, face("Z_l"), face("Z_r"), fs)),
            bool(sub) and sub.strict and sub.witnesses[0] in (_p("b"), Not(_p("b"))),
            bool(sub) and sub.strict and pb in sub.witnesses,
        ]
        for a in ("a", "c"):
            checks.append(ka_local_fragment(m, face("Z_l"), a, fs)
                          == ka_local_fragment(m, face("U_l"), a, fs))
        if not all(checks):
            bad.append(val)
    dead = build("b_dead_edge")
    kb = Know("a", _p("b"))
    dead_ok = all(eval3(dead.model, dead.face("U"), f) is TV.U for f in (kb, Not(kb)))
    ok = not bad and dead_ok
    return ok, f"{8 - len(bad)}/8 valuations ok, {len(fs)} formulas, b_dead_edge undefined={dead_ok}"


def test_8_xmas_fragments():
    (ok, detail), dt = _timed(_c8)
    ok, within = _report(8, "xmas fragments and b_dead_edge", ok, dt, 120, detail)
    assert ok, detail
    assert within


if __name__ == "__main__":
    import sys
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
