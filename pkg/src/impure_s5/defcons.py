"""Definability consequence ``Gamma |x psi`` and equidefinability.

Definability never consults the valuation, so each formula is first mapped
to a negation-free *skeleton* (:class:`Alive`, :class:`DAnd`,
:class:`DSome`).  Skeletons are positive-existential, which is what makes
the relation decidable: there is a least face satisfying the skeletons of a
finite ``Gamma``, namely the root of a tree-shaped model where every
``DSome(a, e)`` obligation gets its own witness face glued on along the
``a``-vertex.  Every other face satisfying ``Gamma`` receives a
color-preserving simplicial map from this tree, and skeleton satisfaction
is preserved along such maps, so ``Gamma |x psi`` holds iff the root
satisfies the skeleton of ``psi``.

:func:`check_defcons` runs a goal-directed prover over exactly that tree,
recording each inference as an instance of one of the structural rules or
the lettered consequence rules (``c``, ``d``, ``g``, ``h`` ...).  Traces
replay independently via :func:`replay`.  When the prover fails the
consequence is refuted, first by bounded enumeration of small complexes
(for a small witness) and otherwise by the tree model itself.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

from .complex import SimplicialModel, Vertex, dump_model
from .formula import (And, Atom, Formula, Know, Not, Var, agents_of, match_implies,
                      split_conj, subformulas, to_str)
from .semantics import is_defined

__all__ = [
    "Alive", "DAnd", "DSome", "DefFormula", "def_translate", "normalize", "satisfies",
    "Step", "Proven", "Refuted", "Unknown", "DefconsResult", "DefconsBudget",
    "check_defcons", "equidefinable", "replay", "refute_by_enumeration", "tree_model",
    "format_trace", "fresh_agent",
]


# -- skeletons ---------------------------------------------------------------

@dataclass(frozen=True)
class Alive:
    agent: str

    def __str__(self):
        return f"alive({self.agent})"


@dataclass(frozen=True)
class DAnd:
    left: "DefFormula"
    right: "DefFormula"

    def __str__(self):
        return f"({self.left} & {self.right})"


@dataclass(frozen=True)
class DSome:
    agent: str
    body: "DefFormula"

    def __str__(self):
        return f"some[{self.agent}] {self.body}"


DefFormula = Alive | DAnd | DSome


@lru_cache(maxsize=1 << 16)
def def_translate(f: Formula) -> DefFormula:
    if isinstance(f, Atom):
        return Alive(f.var.owner)
    if isinstance(f, Not):
        return def_translate(f.arg)
    if isinstance(f, And):
        return DAnd(def_translate(f.left), def_translate(f.right))
    return DSome(f.agent, def_translate(f.arg))


@lru_cache(maxsize=1 << 16)
def normalize(d: DefFormula) -> frozenset:
    """Flatten a skeleton into a set of conjuncts ``("A", a)`` / ``("S", a, body)``.

    Conjunction is idempotent and commutative for satisfaction, so equal
    normal forms have equal satisfaction sets.  ``DSome(a, .)`` already
    forces ``a`` alive, so a redundant ``Alive(a)`` is dropped.
    """
    out: set = set()
    stack = [d]
    while stack:
        e = stack.pop()
        if isinstance(e, DAnd):
            stack += [e.left, e.right]
        elif isinstance(e, Alive):
            out.add(("A", e.agent))
        else:
            out.add(("S", e.agent, normalize(e.body)))
    some = {c[1] for c in out if c[0] == "S"}
    return frozenset(c for c in out if not (c[0] == "A" and c[1] in some))


@lru_cache(maxsize=None)
def _nf(f: Formula) -> frozenset:
    return normalize(def_translate(f))


@lru_cache(maxsize=None)
def _nf_key(nf: frozenset) -> str:
    return repr(sorted(map(repr, nf)))


@lru_cache(maxsize=1 << 17)
def _agents(f: Formula) -> frozenset:
    if isinstance(f, Atom):
        return frozenset([f.var.owner])
    if isinstance(f, And):
        return _agents(f.left) | _agents(f.right)
    if isinstance(f, Know):
        return _agents(f.arg) | {f.agent}
    return _agents(f.arg)


def satisfies(m: SimplicialModel, x: Iterable[str], d: DefFormula) -> bool:
    x = m.check_face(x)
    return _sat(m, x, d, {})


def _sat(m, x, d, memo) -> bool:
    if isinstance(d, Alive):
        return m.vertex_of(x, d.agent) is not None
    if isinstance(d, DAnd):
        return _sat(m, x, d.left, memo) and _sat(m, x, d.right, memo)
    v = m.vertex_of(x, d.agent)
    if v is None:
        return False
    key = (v, d)
    if key not in memo:
        memo[key] = any(_sat(m, y, d.body, memo) for y in m.star[v])
    return memo[key]


def fresh_agent(used: Iterable[str]) -> str:
    used = set(used)
    for name in ["z", "y", "x", "w"] + [f"z{i}" for i in range(1, 1000)]:
        if name not in used:
            return name
    raise RuntimeError("no fresh agent name")


# -- results -----------------------------------------------------------------

class Step(NamedTuple):
    """One sequent ``gamma |x goal`` justified by ``rule`` from earlier steps.

    ``param`` names the formula a rule pivots on where that is ambiguous
    (the witness formula of ``h`` and ``i``).
    """

    gamma: frozenset
    goal: Formula
    rule: str
    premises: tuple = ()
    param: Formula | None = None

    def __str__(self) -> str:
        lhs = ", ".join(sorted(to_str(g) for g in self.gamma))
        prem = f" from {','.join(map(str, self.premises))}" if self.premises else ""
        return f"{lhs} |x {to_str(self.goal)}   [{self.rule}{prem}]"


@dataclass(frozen=True)
class Proven:
    gamma: frozenset
    psi: Formula
    trace: tuple

    status = "PROVEN"

    def __bool__(self):
        return True


@dataclass(frozen=True)
class Refuted:
    gamma: frozenset
    psi: Formula
    model: SimplicialModel
    face: frozenset
    method: str

    status = "REFUTED"

    def __bool__(self):
        return False


@dataclass(frozen=True)
class Unknown:
    gamma: frozenset
    psi: Formula
    report: str

    status = "UNKNOWN"

    def __bool__(self):
        return False


DefconsResult = Proven | Refuted | Unknown


@dataclass(frozen=True)
class DefconsBudget:
    prover_steps: int = 10_000
    vertex_bound: int = 2
    max_agents: int = 3


def format_trace(trace: Sequence[Step]) -> str:
    return "\n".join(f"{i:>3}. {s}" for i, s in enumerate(trace))


# -- replay ------------------------------------------------------------------

class ReplayError(ValueError):
    pass


def _is_k(f, a=None) -> bool:
    return isinstance(f, Know) and (a is None or f.agent == a)


def _k_conj(c: Formula, a: str) -> bool:
    return all(_is_k(x, a) for x in split_conj(c))


_OWN_CONTEXT = frozenset(("b", "h", "i"))


def _check_step(i: int, s: Step, trace: Sequence[Step]) -> None:
    r = s.rule
    prem = []
    for p in s.premises:
        if not 0 <= p < i:
            raise ReplayError(f"step {i}: premise {p} is not an earlier step")
        prem.append(trace[p])
    if r not in _OWN_CONTEXT:
        for p in prem:
            if not p.gamma <= s.gamma:
                raise ReplayError(f"step {i}: premise context not contained in conclusion context")
    g = s.goal

    def need(cond, why):
        if not cond:
            raise ReplayError(f"step {i} ({r}): {why}")

    if r == "refl":
        need(not prem and s.gamma == frozenset([g]), "reflexivity needs gamma = {goal}")
    elif r == "a":
        need(len(prem) == 1 and prem[0].goal == g, "weakening keeps the goal")
    elif r == "b":
        need(len(prem) >= 1, "cut needs premises")
        *sides, main = prem
        need(main.goal == g, "last premise must conclude the goal")
        covered = {p.goal for p in sides}
        need(main.gamma <= covered, "every cut formula must be established")
        need(all(p.gamma <= s.gamma for p in sides), "side contexts exceed conclusion")
    elif r == "neg-intro":
        need(len(prem) == 1 and isinstance(g, Not) and g.arg == prem[0].goal, "shape")
    elif r == "neg-elim":
        need(len(prem) == 1 and prem[0].goal == Not(g), "shape")
    elif r == "and-intro":
        need(len(prem) == 2 and isinstance(g, And)
             and (prem[0].goal, prem[1].goal) == (g.left, g.right), "shape")
    elif r == "and-elim":
        need(len(prem) == 1 and isinstance(prem[0].goal, And)
             and g in (prem[0].goal.left, prem[0].goal.right), "shape")
    elif r == "c":
        need(len(prem) == 1 and isinstance(g, Atom) and _is_k(prem[0].goal, g.var.owner),
             "K_a phi |x p_a")
    elif r == "d":
        p = prem[0].goal if len(prem) == 1 else None
        ok = (isinstance(g, Know) and isinstance(g.arg, Atom) and g.arg.var.owner == g.agent
              and p == g.arg) or (isinstance(g, Atom) and p == Know(g.var.owner, g))
        need(ok, "p_a =|x K_a p_a")
    elif r == "e":
        p = prem[0].goal if len(prem) == 1 else None
        ok = (_is_k(g) and g.arg == p and _is_k(p, g.agent)) or \
             (_is_k(p) and p.arg == g and _is_k(g, p.agent))
        need(ok, "K_a phi =|x K_a K_a phi")
    elif r == "f":
        p = prem[0].goal if len(prem) == 1 else None
        forms = set()
        if _is_k(p):
            forms = {Not(p), Know(p.agent, Not(p))}
        elif isinstance(p, Not) and _is_k(p.arg):
            forms = {p.arg, Know(p.arg.agent, p)}
        elif _is_k(p) is False and isinstance(p, Know):
            pass
        if isinstance(p, Know) and isinstance(p.arg, Not) and _is_k(p.arg.arg, p.agent):
            forms |= {p.arg.arg, p.arg}
        need(g in forms, "K_a phi =|x ~K_a phi =|x K_a ~K_a phi")
    elif r == "g":
        need(len(prem) == 2 and _is_k(g), "shape")
        goals = {prem[0].goal, prem[1].goal}
        need(g.arg in goals and any(_is_k(x, g.agent) for x in goals),
             "K_a theta, phi |x K_a phi")
    elif r in ("h", "i"):
        need(len(prem) == 1 and _is_k(g) and prem[0].goal == g and s.param is not None,
             "shape")
        a = g.agent
        phi = s.param
        inner = phi if r == "h" else Not(phi)
        outer = Know(a, phi) if r == "h" else Not(Know(a, phi))
        pg = prem[0].gamma
        need(inner in pg, "witness formula missing from premise context")
        rest = pg - {inner}
        need(all(_is_k(x, a) for x in rest), "premise context must be K_a Gamma plus one formula")
        need(s.gamma == rest | {outer}, "conclusion context must replace the witness by K_a of it")
    elif r in ("j", "k"):
        p = prem[0].goal if len(prem) == 1 else None
        ok = False
        if _is_k(g) and p is not None:
            imp_goal = match_implies(g.arg)
            imp_prem = match_implies(p)
            if imp_goal and imp_prem:
                conj, theta = imp_goal
                lhs, rhs = imp_prem
                tail = Know(g.agent, theta) if r == "j" else Not(Know(g.agent, Not(theta)))
                ok = (_k_conj(conj, g.agent) and lhs == Know(g.agent, conj) and rhs == tail)
        need(ok, "K_a(/\\K_a psi_i) -> K_a theta |x K_a(/\\K_a psi_i -> theta)")
    elif r == "l":
        p = prem[0].goal if len(prem) == 1 else None
        ok = (_is_k(g) and p == g.arg and _k_conj(p, g.agent)) or \
             (_is_k(p) and g == p.arg and _k_conj(g, p.agent))
        need(ok, "/\\K_a psi_i =|x K_a(/\\K_a psi_i)")
    else:
        raise ReplayError(f"step {i}: unknown rule {r!r}")


def replay(trace: Sequence[Step], gamma: Iterable[Formula], psi: Formula) -> bool:
    """Re-check every step; raises :class:`ReplayError` on the first bad one."""
    gamma = frozenset(gamma)
    if not trace:
        raise ReplayError("empty trace")
    for i, s in enumerate(trace):
        _check_step(i, s, trace)
    last = trace[-1]
    if last.goal != psi:
        raise ReplayError("trace does not conclude psi")
    if not last.gamma or not last.gamma <= gamma:
        raise ReplayError("trace context is not a nonempty subset of gamma")
    return True


# -- prover ------------------------------------------------------------------

class _Budget(Exception):
    pass


@dataclass(eq=False)
class _Node:
    parent: "_Node | None"
    agent: str | None          # agent whose vertex is shared with the parent
    own: tuple                 # formulas assumed at this node (root: gamma; child: (phi,))
    witness_of: Formula | None  # K_a phi at the parent that spawned this node
    facts: dict = field(default_factory=dict)   # formula -> (rule, refs, param)
    own_facts: frozenset = frozenset()          # facts from decomposing `own`
    children: list = field(default_factory=list)
    kbest: dict = field(default_factory=dict)    # agent -> least K_a fact
    kfacts: dict = field(default_factory=dict)   # agent -> K_a facts in order of arrival
    kcount: int = 0


@dataclass(frozen=True)
class _Template:
    facts: tuple          # (formula, justification) in insertion order
    own_facts: frozenset
    kfacts: dict
    kbest: dict
    kcount: int
    children: tuple       # K facts that get a witness node, in order


@lru_cache(maxsize=1 << 15)
def _decompose(own: tuple) -> _Template:
    """Initial facts of a node assuming ``own``: strip negations, split conjunctions."""
    facts: dict = {}
    for f in own:
        facts.setdefault(f, ("hyp", (), None))
    own_facts = set()
    queue = list(own)
    while queue:
        f = queue.pop(0)
        own_facts.add(f)
        if isinstance(f, Not):
            if f.arg not in facts:
                facts[f.arg] = ("neg-elim", (f,), None)
                queue.append(f.arg)
        elif isinstance(f, And):
            for part in (f.left, f.right):
                if part not in facts:
                    facts[part] = ("and-elim", (f,), None)
                    queue.append(part)
    kfacts: dict = {}
    kbest: dict = {}
    for f in facts:
        if isinstance(f, Know):
            kfacts.setdefault(f.agent, []).append(f)
            if f.agent not in kbest or _goal_key(f) < _goal_key(kbest[f.agent]):
                kbest[f.agent] = f
    kids = tuple(f for f in sorted(own_facts, key=_str) if isinstance(f, Know))
    return _Template(tuple(facts.items()), frozenset(own_facts),
                     {a: tuple(v) for a, v in kfacts.items()}, kbest,
                     sum(len(v) for v in kfacts.values()), kids)


class _Prover:
    def __init__(self, gamma: Sequence[Formula], psi: Formula, steps: int):
        self.psi = psi
        self.goals = _goals(psi)
        self.budget = steps
        self.used = 0
        self.root = self._make(None, None, tuple(gamma), None)

    def _tick(self):
        self.used += 1
        if self.used > self.budget:
            raise _Budget()

    def _make(self, parent, agent, own, witness_of) -> _Node:
        t = _decompose(own)
        n = _Node(parent, agent, own, witness_of, dict(t.facts), t.own_facts)
        n.kfacts = {a: list(v) for a, v in t.kfacts.items()}
        n.kbest = dict(t.kbest)
        n.kcount = t.kcount
        self.used += len(t.facts)
        if self.used > self.budget:
            raise _Budget()
        for f in t.children:
            n.children.append(self._make(n, f.agent, (f.arg,), f))
        return n

    def _add(self, n: _Node, f: Formula, just) -> bool:
        if f in n.facts:
            return False
        self._tick()
        n.facts[f] = just
        if isinstance(f, Know):
            n.kcount += 1
            n.kfacts.setdefault(f.agent, []).append(f)
            best = n.kbest.get(f.agent)
            if best is None or _goal_key(f) < _goal_key(best):
                n.kbest[f.agent] = f
        return True

    def _nodes(self, n=None):
        n = n or self.root
        yield n
        for c in n.children:
            yield from self._nodes(c)

    def _k_witness(self, n: _Node, a: str) -> Formula | None:
        """Some fact ``K_a theta`` at ``n``, creating ``K_a p_a`` via (d) if needed."""
        best = n.kbest.get(a)
        if best is not None:
            return best
        atoms = sorted((f for f in n.facts if isinstance(f, Atom) and f.var.owner == a),
                       key=_str)
        if atoms:
            k = Know(a, atoms[0])
            self._add(n, k, ("d", (atoms[0],), None))
            return k
        return None

    def _process(self, n: _Node):
        # inherit the K_a facts of the parent along the shared a-vertex
        if n.parent is not None:
            for f in list(n.parent.kfacts.get(n.agent, ())):
                if f not in n.facts:
                    self._add(n, f, ("inherit", (f,), None))
        # goals come in size order, so one pass settles everything except
        # goals that wait on a K fact added later in the pass
        local = True
        while local:
            k0, missed = n.kcount, False
            for g in self.goals:
                if g in n.facts:
                    continue
                just = self._intro(n, g)
                if just is None:
                    missed = True
                else:
                    self._add(n, g, just)
            local = missed and n.kcount != k0

    def _intro(self, n: _Node, g: Formula):
        facts = n.facts
        if isinstance(g, Atom):
            k = self._k_witness(n, g.var.owner)
            return None if k is None else ("c", (k,), None)
        if isinstance(g, Not):
            return ("neg-intro", (g.arg,), None) if g.arg in facts else None
        if isinstance(g, And):
            if g.left in facts and g.right in facts:
                return ("and-intro", (g.left, g.right), None)
            return None
        # g = K_a chi
        a = g.agent
        if g.arg in facts:
            k = self._k_witness(n, a)
            if k is not None:
                return ("g", (k, g.arg), None)
        for c in n.children:
            if c.agent == a and g in c.facts and c.facts[g][0] != "inherit":
                return ("h", (g,), c)
        return None

    def run(self) -> bool:
        """Saturate until ``psi`` holds at the root or nothing changes.

        A node is revisited only when its parent gained K facts it inherits
        or when it or a child gained facts.
        """
        order = list(self._nodes())
        dirty = set(order)
        root, psi = self.root, self.psi
        while dirty:
            for n in order:
                if n not in dirty:
                    continue
                dirty.discard(n)
                before = len(n.facts)
                kin = [len(n.kfacts.get(c.agent, ())) for c in n.children]
                self._process(n)
                if psi in root.facts:
                    return True
                if len(n.facts) != before:
                    if n.parent is not None:
                        dirty.add(n.parent)
                    for c, k in zip(n.children, kin):
                        if len(n.kfacts.get(c.agent, ())) != k:
                            dirty.add(c)
        return psi in root.facts

    # -- trace extraction --

    def extract(self) -> tuple:
        steps: list[Step] = []
        memo: dict = {}

        def emit(step: Step) -> int:
            steps.append(step)
            return len(steps) - 1

        def prove(n: _Node, f: Formula) -> int:
            nm = memo.get(n)
            if nm is None:
                nm = memo[n] = {}
            elif f in nm:
                return nm[f]
            rule, refs, extra = n.facts[f]
            if rule == "hyp" or rule == "inherit":
                steps.append(Step(frozenset((f,)), f, "refl"))
            elif rule == "h":
                child = extra
                ci = prove(child, f)
                cs = steps[ci]
                phi = child.witness_of.arg
                if phi in cs.gamma and not (isinstance(phi, Know) and phi.agent == child.agent
                                            and phi in child.facts
                                            and child.facts[phi][0] == "inherit"):
                    rest = cs.gamma - {phi}
                    hi = emit(Step(rest | {child.witness_of}, f, "h", (ci,), phi))
                else:
                    hi = ci
                hs = steps[hi]
                side = [prove(n, x) for x in sorted(hs.gamma, key=_str)]
                ctx = frozenset().union(*(steps[s].gamma for s in side))
                steps.append(Step(ctx, f, "b", tuple(side) + (hi,)))
            elif len(refs) == 1:
                p = prove(n, refs[0])
                steps.append(Step(steps[p].gamma, f, rule, (p,)))
            else:
                ps = tuple([prove(n, r) for r in refs])
                ctx = frozenset().union(*[steps[p].gamma for p in ps])
                steps.append(Step(ctx, f, rule, ps))
            idx = nm[f] = len(steps) - 1
            return idx

        prove(self.root, self.psi)
        return tuple(steps)

    # -- canonical tree model --

    def tree_model(self) -> tuple[SimplicialModel, frozenset]:
        verts: dict[str, Vertex] = {}
        facets: list[frozenset] = []
        agents: set[str] = set()
        counter = [0]

        def fresh(color):
            counter[0] += 1
            vid = f"t{counter[0]}_{color}"
            verts[vid] = Vertex(vid, color)
            agents.add(color)
            return vid

        def build(n: _Node, shared: str | None) -> frozenset:
            colors = set()
            for f in n.own_facts:
                if isinstance(f, Atom):
                    colors.add(f.var.owner)
                elif isinstance(f, Know):
                    colors.add(f.agent)
            face = {shared} if shared else set()
            for c in sorted(colors - ({n.agent} if shared else set())):
                face.add(fresh(c))
            face = frozenset(face)
            facets.append(face)
            for c in n.children:
                build(c, next(v for v in face if verts[v].color == c.agent))
            return face

        root = build(self.root, None)
        maximal = [f for f in set(facets) if not any(f < g for g in facets)]
        return SimplicialModel(agents, verts, maximal), root


# Sort keys, built bottom-up so each new formula costs one step per node.

@lru_cache(maxsize=1 << 17)
def _size(f: Formula) -> int:
    if isinstance(f, Atom):
        return 1
    if isinstance(f, And):
        return 1 + _size(f.left) + _size(f.right)
    return 1 + _size(f.arg)


@lru_cache(maxsize=1 << 17)
def _str(f: Formula) -> str:
    """``to_str(f)``."""
    if isinstance(f, Atom):
        return str(f.var)
    if isinstance(f, Know):
        return f"K[{f.agent}] {_str(f.arg)}"
    if isinstance(f, And):
        return f"({_str(f.left)} & {_str(f.right)})"
    return "~" + _str(f.arg)


@lru_cache(maxsize=1 << 17)
def _goal_key(f: Formula) -> tuple:
    return (_size(f), _str(f))


@lru_cache(maxsize=1 << 16)
def _goals(psi: Formula) -> tuple:
    return tuple(sorted(set(subformulas(psi)), key=_goal_key))


def tree_model(gamma: Iterable[Formula]) -> tuple[SimplicialModel, frozenset]:
    """The least model of a nonempty ``gamma``'s skeletons and its root face."""
    gamma = tuple(sorted(set(gamma), key=to_str))
    if not gamma:
        raise ValueError("tree model needs a nonempty gamma")
    return _Prover(gamma, gamma[0], 10 ** 9).tree_model()


# -- refutation by enumeration -----------------------------------------------

def _verify_witness(m, x, gamma, psi) -> bool:
    return all(is_defined(m, x, g) for g in gamma) and not is_defined(m, x, psi)


@lru_cache(maxsize=None)
def _refute_key(agents: tuple, gamma_nf: tuple, psi_nf: frozenset, bound: int):
    from .search import complexes_with_masks
    for cm in complexes_with_masks(agents, bound):
        mask = cm.all_faces
        for s in gamma_nf:
            mask &= cm.mask(s)
            if not mask:
                break
        bad = mask & ~cm.mask(psi_nf)
        if bad:
            idx = (bad & -bad).bit_length() - 1
            return cm.model, cm.model.faces[idx]
    return None


def refute_by_enumeration(gamma: Iterable[Formula], psi: Formula,
                          max_vertices_per_agent: int = 2):
    """First ``(model, face)`` in enumeration order where all of ``gamma`` is
    defined and ``psi`` is not, or ``None``.

    Complexes range over the agents of the query; for empty ``gamma`` one
    fresh agent is added, since otherwise a query like ``p_a`` over the
    single agent ``a`` has no witness at all.
    """
    gamma = frozenset(gamma)
    agents = set(_agents(psi)).union(*(_agents(g) for g in gamma))
    if not gamma:
        agents.add(fresh_agent(agents))
    gamma_nf = tuple(sorted({_nf(g) for g in gamma}, key=_nf_key))
    hit = _refute_key(tuple(sorted(agents)), gamma_nf, _nf(psi), max_vertices_per_agent)
    if hit is None:
        return None
    m, x = hit
    assert _verify_witness(m, x, gamma, psi), "refuter produced an unverifiable witness"
    return hit


# -- entry points ------------------------------------------------------------

def check_defcons(gamma: Iterable[Formula], psi: Formula,
                  budget: DefconsBudget | None = None) -> DefconsResult:
    budget = budget or DefconsBudget()
    gamma = frozenset(gamma)
    return _check(gamma, psi, budget)


@lru_cache(maxsize=200_000)
def _check(gamma: frozenset, psi: Formula, budget: DefconsBudget) -> DefconsResult:
    if not gamma:
        hit = refute_by_enumeration(gamma, psi, 1)
        return Refuted(gamma, psi, hit[0], hit[1], "empty gamma")
    ordered = tuple(sorted(gamma, key=_str))
    prover = None
    try:
        prover = _Prover(ordered, psi, budget.prover_steps)
        if prover.run():
            trace = prover.extract()
            replay(trace, gamma, psi)
            return Proven(gamma, psi, trace)
    except _Budget:
        prover = None
    agents = set(_agents(psi)).union(*(_agents(g) for g in gamma))
    if len(agents) <= budget.max_agents:
        hit = refute_by_enumeration(gamma, psi, budget.vertex_bound)
        if hit is not None:
            return Refuted(gamma, psi, hit[0], hit[1], "enumeration")
    if prover is not None:
        m, x = prover.tree_model()
        if _verify_witness(m, x, gamma, psi):
            return Refuted(gamma, psi, m, x, "tree model")
        report = "prover incomplete on this query (tree model satisfies psi)"
    else:
        report = f"prover budget of {budget.prover_steps} steps exhausted"
    return Unknown(gamma, psi, report)


def equidefinable(f: Formula, g: Formula, budget: DefconsBudget | None = None
                  ) -> tuple[DefconsResult, DefconsResult]:
    return check_defcons([f], g, budget), check_defcons([g], f, budget)
