"""Concrete derivations of the derived rules, plus negative controls.

Each entry instantiates one derived rule with specific formulas and returns
a :class:`Derivation` ready for :func:`check_derivation`.  Schematic
premises appear as ``premise`` lines.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .calculus import Derivation, check_derivation, match_axiom
from .corpus import bad_k, phi_mp, psi_mp
from .derived import expand_macro
from .formula import And, Atom, Formula, Implies, Know, Not, Var, conj

__all__ = ["TRANSCRIPTS", "NEGATIVE", "Transcript", "transcript", "inconsistency_witness",
           "kdef_on_bad_k"]


def _p(a):
    return Atom(Var("p", a))


pa, pb, pc = _p("a"), _p("b"), _p("c")


@dataclass(frozen=True)
class Transcript:
    name: str
    build: Callable[[], Derivation]
    lines: int | None = None   # expected top-level line count
    note: str = ""


def _hs() -> Derivation:
    # phi = p_a & p_b, psi = p_b, rho = K_b p_b; psi is defined wherever phi -> rho is
    phi, psi, rho = And(pa, pb), pb, Know("b", pb)
    d = Derivation()
    t = d.taut(Implies(Implies(phi, psi), Implies(Implies(psi, rho), Implies(phi, rho))))
    h1 = d.premise(Implies(phi, psi))
    h2 = d.premise(Implies(psi, rho))
    s4 = d.mp(t, h1)
    d.mp(s4, h2)
    return d


def _loc_neg() -> Derivation:
    return expand_macro("loc_neg", (), Implies(Not(pa), Know("a", Not(pa))))


def _loc_pos() -> Derivation:
    return expand_macro("loc_pos", (), Implies(pa, Know("a", pa)))


def _kconj() -> Derivation:
    return expand_macro("kconj", (), Implies(And(Know("a", pb), Know("a", pc)),
                                             Know("a", And(pb, pc))))


def _kconj_many() -> Derivation:
    psis = [pb, pc, Know("b", pb)]
    return expand_macro("kconj_many", (), Implies(conj([Know("a", p) for p in psis]),
                                                  Know("a", conj(psis))))


def _extra_k(psis) -> Derivation:
    c = conj([Know("a", p) for p in psis])
    return expand_macro("add_extra_K", (), Implies(c, Know("a", c)))


def _cons() -> Derivation:
    c = And(Know("a", pc), Know("a", Not(pb)))
    return expand_macro("cons", (Not(And(pb, c)),))


def _cons_neg() -> Derivation:
    c = Know("a", pc)
    return expand_macro("cons_neg", (Not(And(Not(pb), c)),))


def _lemma_5_10a() -> Derivation:
    # from /\G0 -> phi to ~(~phi & /\G0)
    g0, phi = And(Know("a", pb), pa), Know("a", Know("a", pb))
    d = Derivation()
    h = d.premise(Implies(g0, phi))
    t = d.taut(Implies(Implies(g0, phi), Not(And(Not(phi), g0))))
    d.mp(t, h)
    return d


TRANSCRIPTS: dict[str, Transcript] = {t.name: t for t in [
    Transcript("lemma_4_4", _hs, 5, "hypothetical syllogism"),
    Transcript("lemma_4_8_neg", _loc_neg, 6, "~p_a -> K_a ~p_a"),
    Transcript("lemma_4_8_pos", _loc_pos, 7, "p_a -> K_a p_a"),
    Transcript("lemma_5_10a_inner", _lemma_5_10a, 3, "consistency step"),
    Transcript("A_1", _kconj, 8, "K distributes over a conjunction"),
    Transcript("A_2", _kconj_many, None, "three conjuncts"),
    Transcript("lemma_4_10_m1", lambda: _extra_k([pb]), 1, "axiom 4"),
    Transcript("lemma_4_10_m3", lambda: _extra_k([pb, pc, Not(pa)]), None, "three conjuncts"),
    Transcript("lemma_4_11", _cons, 14, "~(phi & C) gives ~(K_a phi & C)"),
    Transcript("lemma_4_12", _cons_neg, 8, "~(~phi & C) gives ~(~K_a phi & C)"),
]}


def _unrestricted_mp() -> Derivation:
    d = Derivation()
    h1 = d.premise(phi_mp())
    h2 = d.premise(Implies(phi_mp(), psi_mp()))
    d.mp(h2, h1)
    return d


NEGATIVE: dict[str, Transcript] = {t.name: t for t in [
    Transcript("unrestricted_mp", _unrestricted_mp, 3, "rejected at the MP step"),
]}


def transcript(name: str) -> Derivation:
    table = TRANSCRIPTS if name in TRANSCRIPTS else NEGATIVE
    if name not in table:
        raise KeyError(f"unknown transcript {name!r}")
    return table[name].build()


def kdef_on_bad_k():
    """The Kdef match of ``K_a(p_c -> p_b) -> (K_a p_c -> K_a p_b)`` and its proviso."""
    return match_axiom("Kdef", bad_k())


def inconsistency_witness() -> tuple[list[Formula], Derivation]:
    """``{K_a p_b, K_a ~p_b}`` derives ``~(K_a p_b & K_a ~p_b)``."""
    kb, knb = Know("a", pb), Know("a", Not(pb))
    d = Derivation()
    s1 = d.ax("T", Implies(knb, Not(pb)))
    s2 = d.macro("equiv", s1, target=Not(And(pb, knb)))
    d.macro("cons", s2, target=Not(And(kb, knb)))
    return [kb, knb], d


if __name__ == "__main__":
    for t in list(TRANSCRIPTS.values()) + list(NEGATIVE.values()):
        r = check_derivation(t.build())
        print(f"{t.name}: {r.verdict} {r.top_lines} lines, {len(r.lines)} steps, "
              f"{len(r.provisos)} provisos, all proven={r.all_proven}")
