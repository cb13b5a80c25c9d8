"""Bounded enumeration of simplicial models and countermodel search.

Complexes are enumerated per vertex-count vector (one count per agent,
vertex ids ``a0, a1, ...``), then as antichains of chromatic vertex sets of
size >= 2; vertices left uncovered become singleton facets.  Valuations are
enumerated last and only over the variables a query mentions.

For speed, formulas are evaluated on all valuations of a complex at once:
a truth value at a face is a pair of bitmasks ``(T, F)`` over valuation
indices.  :class:`MaskEvaluator` can follow the definitions literally (all
faces) or evaluate on facets only, which monotonicity makes equivalent for
truth at facets; the test suite checks both against :func:`eval3`.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations, product
from typing import Callable, Iterable, Iterator, Sequence

from .complex import SimplicialModel, Vertex
from .formula import (And, Atom, Formula, Hat, Implies, Know, Not, Or, Var, agents_of,
                      conj, enumerate_formulas, size, to_str, variables_of)
from .semantics import TV, Evaluator, eval3

__all__ = [
    "Bounds", "enumerate_complexes", "enumerate_models", "count_complexes", "MaskEvaluator",
    "valuation_model", "find_countermodel", "SweepReport", "soundness_sweep",
    "complexes_with_masks", "var_names",
]

_VAR_NAMES = "pqrstuvw"


def var_names(k: int) -> list[str]:
    if k > len(_VAR_NAMES):
        return list(_VAR_NAMES) + [f"p{i}" for i in range(k - len(_VAR_NAMES))]
    return list(_VAR_NAMES[:k])


@dataclass(frozen=True)
class Bounds:
    agents: tuple
    max_vertices_per_agent: int = 2
    vars_per_agent: int = 1
    max_facets: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "agents", tuple(sorted(set(self.agents))))
        if not self.agents:
            raise ValueError("Bounds needs at least one agent")
        if self.max_vertices_per_agent < 1:
            raise ValueError("max_vertices_per_agent must be >= 1")
        if self.vars_per_agent < 0:
            raise ValueError("vars_per_agent must be >= 0")
        if self.max_facets is not None and self.max_facets < 1:
            raise ValueError("max_facets must be >= 1")

    def variables(self) -> list[Var]:
        return [Var(n, a) for a in self.agents for n in var_names(self.vars_per_agent)]


# -- complexes ---------------------------------------------------------------

def _antichains(cands: list[frozenset]) -> Iterator[list[frozenset]]:
    """All antichains of ``cands`` (sorted by size, descending)."""
    chosen: list[frozenset] = []

    def rec(i: int):
        if i == len(cands):
            yield list(chosen)
            return
        s = cands[i]
        yield from rec(i + 1)
        if not any(s < c for c in chosen):
            chosen.append(s)
            yield from rec(i + 1)
            chosen.pop()

    yield from rec(0)


def _canon(agents, counts, facets) -> tuple:
    """Canonical form under color-preserving vertex renaming."""
    perms_per_agent = [list(permutations(range(c))) for c in counts]
    best = None
    for choice in product(*perms_per_agent):
        ren = {}
        for a, c, perm in zip(agents, counts, choice):
            for i in range(c):
                ren[f"{a}{i}"] = f"{a}{perm[i]}"
        key = tuple(sorted(tuple(sorted(ren[v] for v in f)) for f in facets))
        if best is None or key < best:
            best = key
    return best


def enumerate_complexes(agents: Sequence[str], max_vertices_per_agent: int,
                        max_facets: int | None = None, dedupe: bool = False
                        ) -> Iterator[SimplicialModel]:
    """Every chromatic complex within bounds, valuation empty.

    Order: count vectors in lexicographic order (all-zero skipped), then
    antichains in the recursion order of :func:`_antichains`.  With
    ``dedupe`` only the first member of each isomorphism class is yielded.
    """
    agents = tuple(sorted(set(agents)))
    for counts in product(range(max_vertices_per_agent + 1), repeat=len(agents)):
        if not any(counts):
            continue
        verts = {f"{a}{i}": Vertex(f"{a}{i}", a) for a, c in zip(agents, counts) for i in range(c)}
        slots = [[None] + [f"{a}{i}" for i in range(c)] for a, c in zip(agents, counts)]
        cands = [frozenset(v for v in pick if v) for pick in product(*slots)]
        cands = sorted((s for s in cands if len(s) >= 2), key=lambda s: (-len(s), sorted(s)))
        seen: set = set()
        for chain in _antichains(cands):
            covered = set().union(*chain) if chain else set()
            facets = chain + [frozenset([v]) for v in sorted(verts) if v not in covered]
            if max_facets is not None and len(facets) > max_facets:
                continue
            if dedupe:
                key = _canon(agents, counts, facets)
                if key in seen:
                    continue
                seen.add(key)
            yield SimplicialModel(agents, verts, facets)


@lru_cache(maxsize=None)
def _complex_list(agents: tuple, bound: int, dedupe: bool) -> tuple:
    return tuple(enumerate_complexes(agents, bound, dedupe=dedupe))


def count_complexes(agents: Sequence[str], max_vertices_per_agent: int,
                    dedupe: bool = False) -> int:
    return sum(1 for _ in enumerate_complexes(agents, max_vertices_per_agent, dedupe=dedupe))


def valuation_model(m: SimplicialModel, variables: Sequence[Var], index: int) -> SimplicialModel:
    """Model ``m`` with the valuation numbered ``index`` over ``variables``."""
    pairs = _pairs(m, variables)
    trues: dict[str, set] = {}
    for bit, (vid, var) in enumerate(pairs):
        if index >> bit & 1:
            trues.setdefault(vid, set()).add(var)
    return m.with_valuation(trues)


def _pairs(m: SimplicialModel, variables: Sequence[Var]) -> list[tuple[str, Var]]:
    vs = sorted(set(variables), key=lambda v: (v.owner, v.name))
    return [(vid, var) for vid in sorted(m.vertices) for var in vs
            if var.owner == m.vertices[vid].color]


def enumerate_models(b: Bounds, dedupe: bool = False) -> Iterator[SimplicialModel]:
    variables = b.variables()
    for m in enumerate_complexes(b.agents, b.max_vertices_per_agent, b.max_facets, dedupe):
        n = len(_pairs(m, variables))
        for idx in range(1 << n):
            yield valuation_model(m, variables, idx)


# -- bitmask evaluation ------------------------------------------------------

def _bit_pattern(i: int, n_bits: int) -> int:
    """Mask over ``2**n_bits`` valuation indices whose bit ``i`` is set."""
    total = 1 << n_bits
    half = 1 << i
    block = ((1 << half) - 1) << half
    period = half << 1
    out = 0
    width = period
    out = block
    while width < total:
        out |= out << width
        width <<= 1
    return out & ((1 << total) - 1)


class MaskEvaluator:
    """Evaluate formulas on one complex under every valuation at once.

    ``value(f)`` returns a list indexed like ``self.faces`` of ``(T, F)``
    bitmask pairs.  Results are memoized per subformula, so evaluating many
    formulas that share subformulas is cheap.
    """

    def __init__(self, m: SimplicialModel, variables: Iterable[Var], facets_only: bool = False):
        self.m = m
        self.pairs = _pairs(m, list(variables))
        self.n_vals = 1 << len(self.pairs)
        self.full = (1 << self.n_vals) - 1
        self.facets_only = facets_only
        self.faces = list(m.facets if facets_only else m.faces)
        index = {x: i for i, x in enumerate(self.faces)}
        star = m.facet_star if facets_only else m.star
        self.star = {v: [index[x] for x in s] for v, s in star.items()}
        self.vertex_by_color = [{m.vertices[v].color: v for v in x} for x in self.faces]
        self.atom_mask = {p: _bit_pattern(i, len(self.pairs)) for i, p in enumerate(self.pairs)}
        self.memo: dict[Formula, list] = {}

    def value(self, f: Formula) -> list:
        hit = self.memo.get(f)
        if hit is not None:
            return hit
        full = self.full
        if isinstance(f, Atom):
            out = []
            a = f.var.owner
            for vb in self.vertex_by_color:
                v = vb.get(a)
                if v is None:
                    out.append((0, 0))
                else:
                    t = self.atom_mask.get((v, f.var), 0)
                    out.append((t, full & ~t))
        elif isinstance(f, Not):
            out = [(fl, t) for t, fl in self.value(f.arg)]
        elif isinstance(f, And):
            out = []
            for (t1, f1), (t2, f2) in zip(self.value(f.left), self.value(f.right)):
                d = (t1 | f1) & (t2 | f2)
                out.append((t1 & t2, (f1 | f2) & d))
        else:
            sub = self.value(f.arg)
            a = f.agent
            per_vertex = {}
            out = []
            for vb in self.vertex_by_color:
                v = vb.get(a)
                if v is None:
                    out.append((0, 0))
                    continue
                if v not in per_vertex:
                    d = fl = 0
                    for j in self.star[v]:
                        t, ff = sub[j]
                        d |= t | ff
                        fl |= ff
                    per_vertex[v] = (d & ~fl, fl)
                out.append(per_vertex[v])
        self.memo[f] = out
        return out

    def false_mask(self, f: Formula) -> int:
        out = 0
        for _, fl in self.value(f):
            out |= fl
        return out

    def tv(self, face_index: int, f: Formula, valuation: int) -> TV:
        t, fl = self.value(f)[face_index]
        if t >> valuation & 1:
            return TV.T
        if fl >> valuation & 1:
            return TV.F
        return TV.U


# -- countermodels -----------------------------------------------------------

def find_countermodel(f: Formula, b: Bounds, dedupe: bool = True):
    """First ``(model, face)`` within bounds where ``f`` is False, else None.

    Complexes are scanned in enumeration order; within a complex the lowest
    numbered falsifying valuation wins, and within that model the first
    falsified face in the model's face order.
    """
    variables = sorted(v for v in variables_of(f) if v.owner in b.agents)
    for m in _complex_list(b.agents, b.max_vertices_per_agent, dedupe):
        if b.max_facets is not None and len(m.facets) > b.max_facets:
            continue
        ev = MaskEvaluator(m, variables, facets_only=True)
        bad = ev.false_mask(f)
        if bad:
            idx = (bad & -bad).bit_length() - 1
            model = valuation_model(m, variables, idx)
            ref = Evaluator(model)
            face = next(x for x in model.faces if ref.value(x, f) is TV.F)
            assert eval3(model, face, f) is TV.F
            return model, face
    return None


# -- skeleton masks (used by the definability refuter) -----------------------

class _ComplexMasks:
    def __init__(self, m: SimplicialModel):
        self.model = m
        faces = m.faces
        self.all_faces = (1 << len(faces)) - 1
        index = {x: i for i, x in enumerate(faces)}
        self.alive = {}
        for a in m.agents:
            mask = 0
            for i, x in enumerate(faces):
                if any(m.vertices[v].color == a for v in x):
                    mask |= 1 << i
            self.alive[a] = mask
        self.star = {}
        for v, s in m.star.items():
            mask = 0
            for x in s:
                mask |= 1 << index[x]
            self.star.setdefault(m.vertices[v].color, []).append(mask)
        self._memo: dict = {}

    def mask(self, nf: frozenset) -> int:
        hit = self._memo.get(nf)
        if hit is not None:
            return hit
        out = self.all_faces
        for c in nf:
            if c[0] == "A":
                out &= self.alive.get(c[1], 0)
            else:
                body = self.mask(c[2])
                m = 0
                for st in self.star.get(c[1], ()):
                    if st & body:
                        m |= st
                out &= m
            if not out:
                break
        self._memo[nf] = out
        return out


@lru_cache(maxsize=None)
def complexes_with_masks(agents: tuple, bound: int) -> tuple:
    return tuple(_ComplexMasks(m) for m in _complex_list(agents, bound, True))


# -- soundness sweep ---------------------------------------------------------

@dataclass
class SweepReport:
    counts: dict = field(default_factory=dict)
    countermodels: list = field(default_factory=list)
    excluded_kdef: int = 0
    unrestricted_k_fails: bool | None = None

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def summary(self) -> str:
        rows = [f"{k:>6}: {v}" for k, v in sorted(self.counts.items())]
        rows.append(f" total: {self.total}")
        rows.append(f"countermodels: {len(self.countermodels)}")
        rows.append(f"K^def instances excluded (proviso not proven): {self.excluded_kdef}")
        if self.unrestricted_k_fails is not None:
            rows.append(f"unrestricted K instance falsified: {self.unrestricted_k_fails}")
        return "\n".join(rows)


class FormulaSampler:
    """Seeded random formulas over a fixed signature, by depth and size."""

    def __init__(self, agents: Sequence[str], variables: Sequence[Var], seed: int = 0,
                 max_depth: int = 2, max_size: int = 6):
        self.agents = list(agents)
        self.atoms = [Atom(v) for v in variables]
        self.rng = random.Random(seed)
        self.max_depth = max_depth
        self.max_size = max_size

    def formula(self, depth: int | None = None, budget: int | None = None) -> Formula:
        depth = self.max_depth if depth is None else depth
        budget = self.max_size if budget is None else budget
        rng = self.rng
        if budget <= 1:
            return rng.choice(self.atoms)
        kinds = ["atom", "not", "and"] + (["know", "know"] if depth > 0 else [])
        kind = rng.choice(kinds)
        if kind == "atom":
            return rng.choice(self.atoms)
        if kind == "not":
            return Not(self.formula(depth, budget - 1))
        if kind == "know":
            return Know(rng.choice(self.agents), self.formula(depth - 1, budget - 1))
        left = rng.randint(1, max(1, budget - 2))
        return And(self.formula(depth, left), self.formula(depth, budget - 1 - left))

    def agent(self) -> str:
        return self.rng.choice(self.agents)

    def atom_of(self, a: str) -> Atom:
        return self.rng.choice([x for x in self.atoms if x.var.owner == a])


_TAUTS: list[Callable] = [
    lambda p, q, r: Implies(p, Implies(q, p)),
    lambda p, q, r: Implies(And(p, q), p),
    lambda p, q, r: Implies(Not(Not(p)), p),
    lambda p, q, r: Or(p, Not(p)),
    lambda p, q, r: Implies(Implies(p, q), Implies(Not(q), Not(p))),
    lambda p, q, r: Implies(Implies(p, q), Implies(Implies(q, r), Implies(p, r))),
    lambda p, q, r: Implies(p, Implies(q, And(p, q))),
]


def soundness_sweep(b: Bounds, per_schema: int = 60, seed: int = 0,
                    sampler: FormulaSampler | None = None,
                    check: Callable[[Formula], object] | None = None) -> SweepReport:
    """Sample instances of every axiom schema and rule; search countermodels.

    ``K^def`` instances enter only when the proviso is Proven.  ``N`` and
    ``MP^def`` are applied to premises that were themselves swept clean.
    The unrestricted ``K`` instance ``K_a(p_c -> p_b) -> (K_a p_c -> K_a p_b)``
    is checked to fail, as a sanity check of the search (needs agents a, b, c).
    """
    from .calculus import axiom_instance
    from .defcons import check_defcons

    vs = b.variables() or [Var("p", a) for a in b.agents]
    sampler = sampler or FormulaSampler(b.agents, vs, seed)
    check = check or (lambda f: find_countermodel(f, b))
    report = SweepReport()
    valid_pool: list[Formula] = []

    def record(name: str, f: Formula):
        hit = check(f)
        report.counts[name] = report.counts.get(name, 0) + 1
        if hit is not None:
            report.countermodels.append((name, f, hit))
        else:
            valid_pool.append(f)

    s = sampler
    for _ in range(per_schema):
        a = s.agent()
        phi, psi = s.formula(), s.formula()
        record("T", axiom_instance("T", a, phi))
        record("4", axiom_instance("4", a, phi))
        record("5", axiom_instance("5", a, phi))
        record("L", axiom_instance("L", a, s.atom_of(a)))
        record("KKh", axiom_instance("KKh", a, phi, psi))
        record("Taut", s.rng.choice(_TAUTS)(phi, psi, s.formula()))
    attempts = 0
    got = 0
    while got < per_schema and attempts < per_schema * 50:
        attempts += 1
        a = s.agent()
        phi, psi = s.formula(), s.formula()
        if check_defcons([psi, Know(a, phi)], phi).status == "PROVEN":
            record("Kdef", axiom_instance("Kdef", a, phi, psi))
            got += 1
        else:
            report.excluded_kdef += 1
    pool = list(valid_pool)
    for _ in range(per_schema):
        premise = s.rng.choice(pool)
        record("N", Know(s.agent(), premise))
        other = s.formula()
        # from A and the tautology A -> (A | B) infer A | B; proviso (A | B) |x A holds
        concl = Or(premise, other)
        if check_defcons([concl], premise).status == "PROVEN":
            record("MPdef", concl)
    if {"a", "b", "c"} <= set(b.agents):
        pa, pb, pc = (Atom(Var(vs[0].name if vs else "p", x)) for x in "abc")
        bad = Implies(Know("a", Implies(pc, pb)), Implies(Know("a", pc), Know("a", pb)))
        report.unrestricted_k_fails = check(bad) is not None
    return report
