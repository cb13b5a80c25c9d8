"""Exhaustive property suites over small formula and model spaces.

``definability_suite`` instantiates the twelve structural properties of
``|x`` with every formula up to a size bound.  Conditional properties are
instantiated in full and checked only where their hypotheses are proven.

``monotonicity_suite`` checks, on every model within bounds and every
formula up to a size bound, that definedness and truth only grow along
face inclusion, that truth at a larger face reflects back to a smaller one
where defined, and that validity over faces and over facets coincide.
"""
from __future__ import annotations

import contextlib
import gc
import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .defcons import DefconsBudget, check_defcons, refute_by_enumeration
from .formula import (And, Atom, Formula, Hat, Implies, Know, Not, Var, conj, enumerate_formulas,
                      rename_agents)
from .search import Bounds, MaskEvaluator, _pairs, enumerate_complexes

__all__ = ["ClauseInstance", "definability_instances", "DefinabilityReport",
           "definability_suite", "symmetric_images", "MonotonicityReport", "monotonicity_suite", "CLAUSES"]

CLAUSES = tuple("abcdefghijkl")

Query = tuple  # (frozenset gamma, psi)


@dataclass(frozen=True)
class ClauseInstance:
    clause: str
    hypotheses: tuple   # queries that must be proven for the instance to apply
    goals: tuple        # queries that must then be proven


def _q(gamma, psi) -> Query:
    return (frozenset(gamma), psi)


def _equi(f, g):
    return (_q([f], g), _q([g], f))


@contextlib.contextmanager
def _fewer_collections(older: int = 100):
    # the prover cache keeps ~10^6 live objects; with default thresholds the
    # older generations are rescanned so often that the run time doubles
    old = gc.get_threshold()
    gc.set_threshold(old[0], older, older)
    try:
        yield
    finally:
        gc.set_threshold(*old)


def definability_instances(agents: Sequence[str] = ("a", "b"), max_size: int = 3,
                           max_m: int = 2, clause_agents: Sequence[str] | None = None
                           ) -> Iterator[ClauseInstance]:
    """Instances of every clause; ``clause_agents`` restricts the agent of
    clauses (c)-(l), which otherwise ranges over all of ``agents``."""
    agents = sorted(agents)
    fs = enumerate_formulas(agents, [Var("p", a) for a in agents], max_size)
    atoms = [f for f in fs if isinstance(f, Atom)]
    clause_agents = agents if clause_agents is None else sorted(clause_agents)

    for th, phi in itertools.product(fs, fs):
        # (a) with Gamma = {th}, Delta = {chi}
        for chi in fs:
            yield ClauseInstance("a", (_q([th], phi),), (_q([th, chi], phi),))
        # (b) with Gamma = {th}, Delta = {chi}
        for chi in fs:
            yield ClauseInstance("b", (_q([th], chi), _q([chi], phi)), (_q([th], phi),))

    for a in clause_agents:
        for phi in fs:
            for p in atoms:
                if p.var.owner == a:
                    yield ClauseInstance("c", (), (_q([Know(a, phi)], p),))
            yield ClauseInstance("e", (), _equi(Know(a, phi), Know(a, Know(a, phi))))
            ka = Know(a, phi)
            yield ClauseInstance("f", (), _equi(ka, Not(ka)) + _equi(Not(ka), Know(a, Not(ka))))
        for p in atoms:
            if p.var.owner == a:
                yield ClauseInstance("d", (), _equi(p, Know(a, p)))
        for th, phi in itertools.product(fs, fs):
            yield ClauseInstance("g", (), (_q([Know(a, th), phi], Know(a, phi)),))

        # (h), (i): K_a Gamma is empty or a single K_a theta
        k_gammas = [()] + [(Know(a, th),) for th in fs]
        for kg in k_gammas:
            for phi, psi in itertools.product(fs, fs):
                kpsi = Know(a, psi)
                yield ClauseInstance("h", (_q(kg + (phi,), kpsi),), (_q(kg + (Know(a, phi),), kpsi),))
                yield ClauseInstance("i", (_q(kg + (Not(phi),), kpsi),),
                                     (_q(kg + (Not(Know(a, phi)),), kpsi),))

        for m in range(1, max_m + 1):
            for psis in itertools.product(fs, repeat=m):
                c = conj([Know(a, p) for p in psis])
                yield ClauseInstance("l", (), _equi(c, Know(a, c)))
                for th in fs:
                    target = Know(a, Implies(c, th))
                    yield ClauseInstance("j", (), (_q([Implies(Know(a, c), Know(a, th))], target),))
                    yield ClauseInstance("k", (), (_q([Implies(Know(a, c), Hat(a, th))], target),))


@dataclass
class DefinabilityReport:
    instances: Counter = field(default_factory=Counter)   # per clause
    applied: Counter = field(default_factory=Counter)     # hypotheses held
    goals: Counter = field(default_factory=Counter)       # goal queries checked
    failures: list = field(default_factory=list)          # (clause, query, status)
    witnesses: list = field(default_factory=list)         # (clause, query, model, face)
    refuter_bound: int = 3

    @property
    def ok(self) -> bool:
        return not self.failures and not self.witnesses

    def summary(self) -> str:
        rows = [f"{c}: {self.instances[c]} instances, {self.applied[c]} applicable, "
                f"{self.goals[c]} goals" for c in CLAUSES]
        rows.append(f"failures={len(self.failures)} refuter witnesses (bound "
                    f"{self.refuter_bound})={len(self.witnesses)}")
        return "\n".join(rows)


def definability_suite(agents: Sequence[str] = ("a", "b"), max_size: int = 3, max_m: int = 2,
                       refuter_bound: int = 3, budget: DefconsBudget | None = None,
                       symmetric: bool = True) -> DefinabilityReport:
    """With ``symmetric`` the agent-indexed clauses are instantiated for the
    first agent only.  The formula pool is closed under permuting agents and
    ``|x`` is invariant under renaming, so the instances for any other agent
    are renamings of these (see :func:`symmetric_images`)."""
    rep = DefinabilityReport(refuter_bound=refuter_bound)
    clause_agents = sorted(agents)[:1] if symmetric else None
    status: dict = {}
    refuted: dict = {}

    def proven(q) -> bool:
        s = status.get(q)
        if s is None:
            s = status[q] = check_defcons(q[0], q[1], budget).status
        return s == "PROVEN"

    with _fewer_collections():
        for inst in definability_instances(agents, max_size, max_m, clause_agents):
            rep.instances[inst.clause] += 1
            if not all(proven(h) for h in inst.hypotheses):
                continue
            rep.applied[inst.clause] += 1
            for g in inst.goals:
                rep.goals[inst.clause] += 1
                if not proven(g):
                    rep.failures.append((inst.clause, g, status[g]))
                if g not in refuted:
                    refuted[g] = refute_by_enumeration(g[0], g[1], refuter_bound)
                    if refuted[g] is not None:
                        rep.witnesses.append((inst.clause, g) + tuple(refuted[g]))
    return rep


def _rename_instance(inst: ClauseInstance, mapping: dict) -> ClauseInstance:
    def q(query):
        return (frozenset(rename_agents(g, mapping) for g in query[0]),
                rename_agents(query[1], mapping))
    return ClauseInstance(inst.clause, tuple(map(q, inst.hypotheses)), tuple(map(q, inst.goals)))


def symmetric_images(agents: Sequence[str] = ("a", "b"), max_size: int = 3,
                     max_m: int = 2) -> bool:
    """True when renaming the first-agent instances under every transposition
    of agents yields exactly the full instance set."""
    agents = sorted(agents)
    full = set(definability_instances(agents, max_size, max_m))
    base = set(definability_instances(agents, max_size, max_m, agents[:1]))
    covered = set(base)
    for b in agents[1:]:
        swap = {agents[0]: b, b: agents[0]}
        covered |= {_rename_instance(i, swap) for i in base}
    return covered == full


# -- monotonicity ------------------------------------------------------------

@dataclass
class MonotonicityReport:
    complexes: int = 0
    models: int = 0
    formulas: int = 0
    face_pairs: int = 0
    checks: int = 0
    violations: list = field(default_factory=list)   # (property, model repr, formula, detail)

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        return (f"{self.complexes} complexes, {self.models} models, {self.formulas} formulas, "
                f"{self.face_pairs} face pairs, {self.checks} mask checks, "
                f"{len(self.violations)} violations")


def monotonicity_suite(b: Bounds, max_size: int = 7, limit: int = 20) -> MonotonicityReport:
    """Every labeled complex within ``b`` under every valuation (batched as bitmasks)."""
    variables = b.variables()
    fs = enumerate_formulas(b.agents, variables, max_size)
    rep = MonotonicityReport(formulas=len(fs))
    for m in enumerate_complexes(b.agents, b.max_vertices_per_agent, b.max_facets):
        rep.complexes += 1
        rep.models += 1 << len(_pairs(m, variables))
        ev = MaskEvaluator(m, variables)
        faces = ev.faces
        facet_idx = [i for i, x in enumerate(faces) if x in m.facets]
        pairs = [(i, j) for i, x in enumerate(faces) for j, y in enumerate(faces) if x < y]
        rep.face_pairs += len(pairs)

        def bad(prop, f, detail):
            if len(rep.violations) < limit:
                rep.violations.append((prop, repr(m), f, detail))
            else:
                rep.violations.append((prop, None, None, None))

        for f in fs:
            vals = ev.value(f)
            for i, j in pairs:
                tx, fx = vals[i]
                ty, fy = vals[j]
                dx, dy = tx | fx, ty | fy
                rep.checks += 3
                if dx & ~dy:
                    bad("defined-up", f, (faces[i], faces[j]))
                if tx & ~ty:
                    bad("true-up", f, (faces[i], faces[j]))
                if ty & dx & ~tx:
                    bad("true-down", f, (faces[i], faces[j]))
            any_face = any_facet = 0
            for i, (_, fl) in enumerate(vals):
                any_face |= fl
            for i in facet_idx:
                any_facet |= vals[i][1]
            rep.checks += 1
            if any_face != any_facet:
                bad("facet-validity", f, any_face ^ any_facet)
    return rep
