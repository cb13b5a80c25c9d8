"""Derived rules as macros over primitive derivation lines.

Every macro takes the formulas of its premise lines and, where the
premises do not determine it, the formula it should conclude.  It returns a
:class:`Derivation` whose first lines are those premises and whose last
line is the conclusion.  Nested macros are left as macro lines and
flattened by the checker.

========== ================================================== ===============================
name       premises                                           conclusion
========== ================================================== ===============================
HS         phi -> psi, psi -> rho                             phi -> rho
contra     phi -> psi                                         ~psi -> ~phi
kmono      phi -> psi                                         K_a phi -> K_a psi
kconj      (none)                                             K_a phi & K_a psi -> K_a(phi & psi)
loc_pos    (none)                                             p_a -> K_a p_a
loc_neg    (none)                                             ~p_a -> K_a ~p_a
ded_thm    psi                                                phi -> psi
ded_conj   G -> psi                                           G -> (phi -> psi)
ded_split  (G & phi) -> psi                                   G -> (phi -> psi)
many_imps  phi_1 -> psi_1, ..., phi_m -> psi_m                /\\phi_i -> /\\psi_i
kconj_many (none)                                             /\\K_a psi_i -> K_a /\\psi_i
add_extra_K (none)                                            /\\K_a psi_i -> K_a /\\K_a psi_i
cons       ~(phi & C)                                         ~(K_a phi & C)
cons_neg   ~(~phi & C)                                        ~(~K_a phi & C)
mono_neg   ~G                                                 ~(phi & G)
mono_der   G -> psi                                           (phi & G) -> psi
equiv      phi                                                chi   (phi -> chi a tautology)
========== ================================================== ===============================

Here ``C`` is a right-associated conjunction ``K_a psi_1 & ... & K_a psi_m``.
Macros whose derived rule carries a definability condition check it first
and raise :class:`MacroError` naming the failing obligation.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Callable, Sequence

from .calculus import Derivation, MacroError, axiom_instance
from .defcons import check_defcons
from .formula import (And, Atom, Formula, Hat, Implies, Know, Not, Or, conj, match_implies,
                      split_conj, to_str)

__all__ = ["expand_macro", "MACROS"]


def _imp(f: Formula, what: str) -> tuple[Formula, Formula]:
    imp = match_implies(f)
    if imp is None:
        raise MacroError(f"{what} must be an implication, got {to_str(f, sugar=True)}")
    return imp


def _need(gamma, psi, macro):
    r = check_defcons(gamma, psi)
    if r.status != "PROVEN":
        g = ", ".join(to_str(x, sugar=True) for x in gamma)
        raise MacroError(f"{macro}: obligation {g} |x {to_str(psi, sugar=True)} is {r.status.lower()}")


def _k_parts(c: Formula, what: str) -> tuple[str, list[Formula]]:
    """Split ``K_a psi_1 & ... & K_a psi_m`` into ``(a, [psi_i])``."""
    parts = split_conj(c)
    if not all(isinstance(p, Know) for p in parts) or len({p.agent for p in parts}) != 1:
        raise MacroError(f"{what} must be a conjunction of K_a formulas for one agent")
    return parts[0].agent, [p.arg for p in parts]


def _start(premises: Sequence[Formula]) -> Derivation:
    d = Derivation()
    for p in premises:
        d.premise(p)
    return d


def _arity(premises, n, name):
    if len(premises) != n:
        raise MacroError(f"{name} takes {n} premise line(s), got {len(premises)}")


def _target(target, name) -> Formula:
    if target is None:
        raise MacroError(f"{name} needs the formula it concludes")
    return target


# -- propositional -----------------------------------------------------------

def hs(premises, target=None) -> Derivation:
    _arity(premises, 2, "HS")
    phi, psi = _imp(premises[0], "HS premise 1")
    psi2, rho = _imp(premises[1], "HS premise 2")
    if psi != psi2:
        raise MacroError("HS premises do not chain")
    _need([Implies(phi, rho)], psi, "HS")
    d = _start(premises)
    t = d.taut(Implies(Implies(phi, psi), Implies(Implies(psi, rho), Implies(phi, rho))))
    k = d.mp(t, 0)
    d.mp(1, k)
    return d


def contra(premises, target=None) -> Derivation:
    _arity(premises, 1, "contra")
    phi, psi = _imp(premises[0], "contra premise")
    d = _start(premises)
    t = d.taut(Implies(Implies(phi, psi), Implies(Not(psi), Not(phi))))
    d.mp(t, 0)
    return d


def equiv(premises, target=None) -> Derivation:
    """Equidefinable and equivalent: a tautological step checked by MP."""
    _arity(premises, 1, "equiv")
    chi = _target(target, "equiv")
    d = _start(premises)
    t = d.taut(Implies(premises[0], chi))
    d.mp(t, 0)
    return d


def ded_thm(premises, target=None) -> Derivation:
    _arity(premises, 1, "ded_thm")
    phi, psi = _imp(_target(target, "ded_thm"), "ded_thm conclusion")
    if psi != premises[0]:
        raise MacroError("ded_thm conclusion must end in the premise")
    d = _start(premises)
    t = d.taut(Implies(psi, Implies(phi, psi)))
    d.mp(t, 0)
    return d


def ded_conj(premises, target=None) -> Derivation:
    _arity(premises, 1, "ded_conj")
    g, psi = _imp(premises[0], "ded_conj premise")
    g2, rest = _imp(_target(target, "ded_conj"), "ded_conj conclusion")
    phi, psi2 = _imp(rest, "ded_conj conclusion")
    if (g2, psi2) != (g, psi):
        raise MacroError("ded_conj conclusion does not match the premise")
    d = _start(premises)
    t = d.taut(Implies(And(g, phi), g))
    h = d.macro("HS", t, 0)
    t2 = d.taut(Implies(Implies(And(g, phi), psi), Implies(g, Implies(phi, psi))))
    d.mp(h, t2)
    return d


def ded_split(premises, target=None) -> Derivation:
    _arity(premises, 1, "ded_split")
    gp, psi = _imp(premises[0], "ded_split premise")
    if not isinstance(gp, And):
        raise MacroError("ded_split premise must be (G & phi) -> psi")
    g, phi = gp.left, gp.right
    d = _start(premises)
    t = d.taut(Implies(premises[0], Implies(g, Implies(phi, psi))))
    d.mp(0, t)
    return d


def many_imps(premises, target=None) -> Derivation:
    if not premises:
        raise MacroError("many_imps needs at least one premise")
    pairs = [_imp(p, f"many_imps premise {i + 1}") for i, p in enumerate(premises)]
    concl = Implies(conj([p for p, _ in pairs]), conj([q for _, q in pairs]))
    taut = concl
    for p in reversed(premises):
        taut = Implies(p, taut)
    d = _start(premises)
    cur = d.taut(taut)
    for i in range(len(premises)):
        cur = d.mp(cur, i)
    return d


def mono_neg(premises, target=None) -> Derivation:
    _arity(premises, 1, "mono_neg")
    t = _target(target, "mono_neg")
    if not (isinstance(premises[0], Not) and isinstance(t, Not) and isinstance(t.arg, And)
            and t.arg.right == premises[0].arg):
        raise MacroError("mono_neg: from ~G conclude ~(phi & G)")
    d = _start(premises)
    tt = d.taut(Implies(premises[0], t))
    d.mp(tt, 0)
    return d


def mono_der(premises, target=None) -> Derivation:
    _arity(premises, 1, "mono_der")
    g, psi = _imp(premises[0], "mono_der premise")
    pg, psi2 = _imp(_target(target, "mono_der"), "mono_der conclusion")
    if not (isinstance(pg, And) and pg.right == g and psi2 == psi):
        raise MacroError("mono_der: from G -> psi conclude (phi & G) -> psi")
    d = _start(premises)
    t = d.taut(Implies(pg, g))
    d.macro("HS", t, 0)
    return d


# -- modal -------------------------------------------------------------------

def kmono(premises, target=None) -> Derivation:
    _arity(premises, 1, "kmono")
    phi, psi = _imp(premises[0], "kmono premise")
    ka, kb = _imp(_target(target, "kmono"), "kmono conclusion")
    if not (isinstance(ka, Know) and ka.arg == phi and kb == Know(ka.agent, psi)):
        raise MacroError("kmono conclusion must be K_a phi -> K_a psi")
    a = ka.agent
    _need([psi, Know(a, phi)], phi, "kmono")
    d = _start(premises)
    n = d.n(0, a)
    k = d.ax("Kdef", axiom_instance("Kdef", a, phi, psi))
    d.mp(n, k)
    return d


def kconj(premises, target=None) -> Derivation:
    _arity(premises, 0, "kconj")
    lhs, rhs = _imp(_target(target, "kconj"), "kconj conclusion")
    a, (phi, psi) = _k_parts(lhs, "kconj antecedent")[0], split_conj(lhs, 2)
    if not (isinstance(phi, Know) and isinstance(psi, Know)):
        raise MacroError("kconj antecedent must be K_a phi & K_a psi")
    phi, psi = phi.arg, psi.arg
    if rhs != Know(a, And(phi, psi)):
        raise MacroError("kconj conclusion must be K_a(phi & psi)")
    d = _start(())
    s1 = d.taut(Implies(phi, Implies(psi, And(phi, psi))))
    s2 = d.n(s1, a)
    s3 = d.ax("Kdef", axiom_instance("Kdef", a, phi, Implies(psi, And(phi, psi))))
    s4 = d.mp(s2, s3)
    s5 = d.ax("Kdef", axiom_instance("Kdef", a, psi, And(phi, psi)))
    s6 = d.macro("HS", s4, s5)
    s7 = d.taut(Implies(d.f(s6), target))
    d.mp(s6, s7)
    return d


def _locality(premises, target, negative: bool) -> Derivation:
    name = "loc_neg" if negative else "loc_pos"
    _arity(premises, 0, name)
    lhs, rhs = _imp(_target(target, name), f"{name} conclusion")
    p = lhs.arg if negative and isinstance(lhs, Not) else lhs
    if not isinstance(p, Atom):
        raise MacroError(f"{name} needs a variable")
    a = p.var.owner
    lit = Not(p) if negative else p
    if (lhs, rhs) != (lit, Know(a, lit)):
        raise MacroError(f"{name} conclusion must be {'~' if negative else ''}p_a -> K_a ...")
    d = _start(())
    if negative:
        s1 = d.ax("T", axiom_instance("T", a, p))
    else:
        s1 = d.ax("T", axiom_instance("T", a, Not(p)))
    s2 = d.macro("contra", s1)
    s3 = d.ax("L", axiom_instance("L", a, p))
    other = Not(Know(a, p)) if negative else Not(Know(a, Not(p)))
    goal = Know(a, Not(p)) if negative else Know(a, p)
    s4 = d.taut(Implies(d.f(s3), Implies(other, goal)))
    s5 = d.mp(s3, s4)
    s6 = d.macro("HS", s2, s5)
    if not negative:
        # ~~p_a -> K_a p_a, then drop the double negation
        d.macro("equiv", s6, target=target)
    return d


def loc_pos(premises, target=None) -> Derivation:
    return _locality(premises, target, False)


def loc_neg(premises, target=None) -> Derivation:
    return _locality(premises, target, True)


def kconj_many(premises, target=None) -> Derivation:
    """Induction peeling the first conjunct (conjunctions associate right)."""
    _arity(premises, 0, "kconj_many")
    lhs, rhs = _imp(_target(target, "kconj_many"), "kconj_many conclusion")
    a, psis = _k_parts(lhs, "kconj_many antecedent")
    if rhs != Know(a, conj(psis)):
        raise MacroError("kconj_many conclusion must be K_a of the conjunction")
    d = _start(())
    m = len(psis)
    if m == 1:
        d.taut(target)
        return d
    if m == 2:
        d.macro("kconj", target=target)
        return d
    head, tail = psis[0], psis[1:]
    ktail = conj([Know(a, p) for p in tail])
    s1 = d.macro("kconj_many", target=Implies(ktail, Know(a, conj(tail))))
    s2 = d.taut(Implies(Know(a, head), Know(a, head)))
    s3 = d.macro("many_imps", s2, s1)
    s4 = d.macro("kconj", target=Implies(And(Know(a, head), Know(a, conj(tail))),
                                         Know(a, And(head, conj(tail)))))
    d.macro("HS", s3, s4)
    return d


def add_extra_K(premises, target=None) -> Derivation:
    _arity(premises, 0, "add_extra_K")
    lhs, rhs = _imp(_target(target, "add_extra_K"), "add_extra_K conclusion")
    a, psis = _k_parts(lhs, "add_extra_K antecedent")
    if rhs != Know(a, lhs):
        raise MacroError("add_extra_K conclusion must be K_a of the antecedent")
    d = _start(())
    if len(psis) == 1:
        d.ax("4", target)
        return d
    fours = [d.ax("4", axiom_instance("4", a, p)) for p in psis]
    s2 = d.macro("many_imps", *fours)
    kk = [Know(a, Know(a, p)) for p in psis]
    s3 = d.macro("kconj_many", target=Implies(conj(kk), Know(a, conj([Know(a, p) for p in psis]))))
    d.macro("HS", s2, s3)
    return d


def _cons_parts(f: Formula, negated: bool, name: str):
    if not (isinstance(f, Not) and isinstance(f.arg, And)):
        raise MacroError(f"{name} premise must be ~(phi & C)")
    phi, c = f.arg.left, f.arg.right
    if negated:
        if not isinstance(phi, Not):
            raise MacroError(f"{name} premise must be ~(~phi & C)")
        phi = phi.arg
    a, _ = _k_parts(c, f"{name} conjunction C")
    return a, phi, c


def cons(premises, target=None) -> Derivation:
    _arity(premises, 1, "cons")
    a, phi, c = _cons_parts(premises[0], False, "cons")
    d = _start(premises)
    s2 = d.macro("equiv", 0, target=Implies(c, Not(phi)))
    s3 = d.n(s2, a)
    s4 = d.ax("KKh", axiom_instance("KKh", a, c, Not(phi)))
    s5 = d.mp(s3, s4)
    s6 = d.macro("add_extra_K", target=Implies(c, Know(a, c)))
    s7 = d.macro("HS", s6, s5)
    s8 = d.macro("equiv", s7, target=Implies(c, Not(Know(a, Not(Not(phi))))))
    s9 = d.macro("contra", s8)
    s10 = d.macro("equiv", s9, target=Implies(Know(a, Not(Not(phi))), Not(c)))
    s11 = d.taut(Implies(phi, Not(Not(phi))))
    s12 = d.macro("kmono", s11, target=Implies(Know(a, phi), Know(a, Not(Not(phi)))))
    s13 = d.macro("HS", s12, s10)
    d.macro("equiv", s13, target=Not(And(Know(a, phi), c)))
    return d


def cons_neg(premises, target=None) -> Derivation:
    _arity(premises, 1, "cons_neg")
    a, phi, c = _cons_parts(premises[0], True, "cons_neg")
    d = _start(premises)
    s2 = d.macro("equiv", 0, target=Implies(c, phi))
    s3 = d.n(s2, a)
    s4 = d.ax("Kdef", axiom_instance("Kdef", a, c, phi))
    s5 = d.mp(s3, s4)
    s6 = d.macro("add_extra_K", target=Implies(c, Know(a, c)))
    s7 = d.macro("HS", s6, s5)
    d.macro("equiv", s7, target=Not(And(Not(Know(a, phi)), c)))
    return d


MACROS: dict[str, Callable] = {
    "HS": hs, "contra": contra, "equiv": equiv, "kmono": kmono, "kconj": kconj,
    "loc_pos": loc_pos, "loc_neg": loc_neg, "ded_thm": ded_thm, "ded_conj": ded_conj,
    "ded_split": ded_split, "many_imps": many_imps, "kconj_many": kconj_many,
    "add_extra_K": add_extra_K, "cons": cons, "cons_neg": cons_neg,
    "mono_neg": mono_neg, "mono_der": mono_der,
}


def expand_macro(name: str, premises: Sequence[Formula], target: Formula | None = None
                 ) -> Derivation:
    """Expand one derived rule into lines (which may contain further macros).

    Results are cached; treat the returned derivation as read-only.
    """
    return _expand(name, tuple(premises), target)


@lru_cache(maxsize=4096)
def _expand(name, premises, target):
    fn = MACROS.get(name)
    if fn is None:
        raise MacroError(f"unknown macro {name!r}")
    d = fn(list(premises), target)
    if target is not None and d.conclusion != target:
        raise MacroError(f"{name} concludes {to_str(d.conclusion, sugar=True)}, "
                         f"not {to_str(target, sugar=True)}")
    return d
