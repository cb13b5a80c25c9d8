"""Epistemic formulas: AST, concrete syntax, and structural queries.

The primitive connectives are atoms, negation, conjunction and ``K[a]``.
Disjunction, implication, equivalence and ``Kh[a]`` (the dual modality) are
surface syntax and are desugared by the parser and by the helper
constructors below.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Agent", "Var", "Formula", "Atom", "Not", "And", "Know",
    "ParseError", "parse", "to_str", "agents_of", "variables_of",
    "modal_depth", "size", "subformulas", "enumerate_formulas", "sort_key",
    "atom", "Or", "Implies", "Iff", "Hat", "top", "conj", "split_conj",
    "match_implies", "rename_agents",
]

Agent = str

_IDENT = r"[A-Za-z][A-Za-z0-9']*"


@dataclass(frozen=True, order=True)
class Var:
    """A local variable ``name_owner``; every variable belongs to one agent."""

    name: str
    owner: Agent

    def __str__(self) -> str:
        return f"{self.name}_{self.owner}"


class Formula:
    __slots__ = ()

    def __str__(self) -> str:
        return to_str(self)

    def __repr__(self) -> str:
        return f"<{to_str(self)}>"

    # operator sugar, handy in tests and scripts
    def __invert__(self) -> "Formula":
        return Not(self)

    def __and__(self, other: "Formula") -> "Formula":
        return And(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return Or(self, other)

    def __rshift__(self, other: "Formula") -> "Formula":
        return Implies(self, other)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((type(self).__name__,) + self._key()))


def _cached_hash(cls):
    # Formulas are hashed constantly as memo keys; recursive dataclass
    # hashing would be quadratic on deep trees.
    def __hash__(self):
        return self._hash

    cls.__hash__ = __hash__
    return cls


@_cached_hash
@dataclass(frozen=True, eq=True)
class Atom(Formula):
    var: Var
    _hash: int = field(init=False, repr=False, compare=False)

    def _key(self):
        return (self.var.name, self.var.owner)


@_cached_hash
@dataclass(frozen=True, eq=True)
class Not(Formula):
    arg: Formula
    _hash: int = field(init=False, repr=False, compare=False)

    def _key(self):
        return (self.arg,)


@_cached_hash
@dataclass(frozen=True, eq=True)
class And(Formula):
    left: Formula
    right: Formula
    _hash: int = field(init=False, repr=False, compare=False)

    def _key(self):
        return (self.left, self.right)


@_cached_hash
@dataclass(frozen=True, eq=True)
class Know(Formula):
    agent: Agent
    arg: Formula
    _hash: int = field(init=False, repr=False, compare=False)

    def _key(self):
        return (self.agent, self.arg)


# -- sugar -------------------------------------------------------------------

def atom(text: str) -> Atom:
    """``atom("p_a")`` -> ``Atom(Var("p", "a"))``."""
    name, _, owner = text.partition("_")
    if not owner:
        raise ValueError(f"variable {text!r} has no owner suffix")
    return Atom(Var(name, owner))


def Or(f: Formula, g: Formula) -> Formula:
    return Not(And(Not(f), Not(g)))


def Implies(f: Formula, g: Formula) -> Formula:
    return Not(And(f, Not(g)))


def Iff(f: Formula, g: Formula) -> Formula:
    return And(Implies(f, g), Implies(g, f))


def Hat(agent: Agent, f: Formula) -> Formula:
    return Not(Know(agent, Not(f)))


def top(agent: Agent, name: str = "p") -> Formula:
    """Local constant ``(p_a | ~p_a)``: never false, true iff ``a`` is alive."""
    p = Atom(Var(name, agent))
    return Or(p, Not(p))


def conj(fs: Sequence[Formula]) -> Formula:
    """Right-associated conjunction of a nonempty sequence."""
    if not fs:
        raise ValueError("empty conjunction")
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = And(f, out)
    return out


def split_conj(f: Formula, n: int | None = None) -> list[Formula]:
    """Inverse of :func:`conj`; with ``n`` given, split into exactly ``n`` parts."""
    parts = []
    while isinstance(f, And) and (n is None or len(parts) < n - 1):
        parts.append(f.left)
        f = f.right
    parts.append(f)
    if n is not None and len(parts) != n:
        raise ValueError(f"not a {n}-fold conjunction")
    return parts


def match_implies(f: Formula) -> tuple[Formula, Formula] | None:
    """Return ``(antecedent, consequent)`` if ``f`` is ``~(x & ~y)``."""
    if isinstance(f, Not) and isinstance(f.arg, And) and isinstance(f.arg.right, Not):
        return f.arg.left, f.arg.right.arg
    return None


# -- parsing -----------------------------------------------------------------

class ParseError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


_TOKEN = re.compile(rf"\s*(?:(?P<op><->|->|[~&|()\[\]_])|(?P<ident>{_IDENT}))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[start]!r}", start)
        kind = "op" if m.group("op") else "ident"
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, agents: Iterable[Agent] | None):
        self.toks = _tokenize(text)
        self.i = 0
        self.agents = None if agents is None else set(agents)

    def peek(self, k: int = 0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def take(self, value: str | None = None, kind: str | None = None):
        tok = self.peek()
        if (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            want = value if value is not None else kind
            got = tok[1] or "end of input"
            raise ParseError(f"expected {want!r}, got {got!r}", tok[2])
        self.i += 1
        return tok

    def agent(self) -> Agent:
        kind, name, pos = self.take(kind="ident")
        if self.agents is not None and name not in self.agents:
            raise ParseError(f"undeclared agent {name!r}", pos)
        return name

    def formula(self) -> Formula:
        kind, val, pos = self.peek()
        if val == "~":
            self.take()
            return Not(self.formula())
        if val == "(":
            self.take()
            left = self.formula()
            op = self.peek()
            if op[1] not in ("&", "|", "->", "<->"):
                raise ParseError(f"expected binary operator, got {op[1] or 'end of input'!r}", op[2])
            self.take()
            right = self.formula()
            self.take(")")
            return {"&": And, "|": Or, "->": Implies, "<->": Iff}[op[1]](left, right)
        if kind == "ident" and val in ("K", "Kh") and self.peek(1)[1] == "[":
            self.take()
            self.take("[")
            a = self.agent()
            self.take("]")
            body = self.formula()
            return Know(a, body) if val == "K" else Hat(a, body)
        if kind == "ident":
            self.take()
            self.take("_")
            owner = self.agent()
            return Atom(Var(val, owner))
        raise ParseError(f"unexpected token {val or 'end of input'!r}", pos)


def parse(text: str, agents: Iterable[Agent] | None = None) -> Formula:
    """Parse the concrete syntax into a primitive AST.

    When ``agents`` is given, variable owners and modality indices must be
    drawn from it.
    """
    p = _Parser(text, agents)
    f = p.formula()
    kind, val, pos = p.peek()
    if kind != "eof":
        raise ParseError(f"trailing input {val!r}", pos)
    return f


# -- printing ----------------------------------------------------------------

def to_str(f: Formula, sugar: bool = False) -> str:
    """Print ``f`` in the concrete syntax; ``parse(to_str(f)) == f``.

    With ``sugar=True``, ``~K[a]~`` prints as ``Kh[a]`` and the boolean
    abbreviations are restored where they match.
    """
    if isinstance(f, Atom):
        return str(f.var)
    if isinstance(f, Know):
        return f"K[{f.agent}] {to_str(f.arg, sugar)}"
    if isinstance(f, And):
        if sugar:
            imp1, imp2 = match_implies(f.left), match_implies(f.right)
            if imp1 and imp2 and imp1 == imp2[::-1]:
                return f"({to_str(imp1[0], sugar)} <-> {to_str(imp1[1], sugar)})"
        return f"({to_str(f.left, sugar)} & {to_str(f.right, sugar)})"
    assert isinstance(f, Not)
    if sugar:
        g = f.arg
        if isinstance(g, Know) and isinstance(g.arg, Not):
            return f"Kh[{g.agent}] {to_str(g.arg.arg, sugar)}"
        if isinstance(g, And) and isinstance(g.left, Not) and isinstance(g.right, Not):
            return f"({to_str(g.left.arg, sugar)} | {to_str(g.right.arg, sugar)})"
        imp = match_implies(f)
        if imp:
            return f"({to_str(imp[0], sugar)} -> {to_str(imp[1], sugar)})"
    return f"~{to_str(f.arg, sugar)}"


# -- structural queries ------------------------------------------------------

def agents_of(f: Formula) -> frozenset[Agent]:
    out: set[Agent] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Atom):
            out.add(g.var.owner)
        elif isinstance(g, Know):
            out.add(g.agent)
            stack.append(g.arg)
        elif isinstance(g, Not):
            stack.append(g.arg)
        else:
            stack += [g.left, g.right]
    return frozenset(out)


def rename_agents(f: Formula, mapping: dict) -> Formula:
    """Apply an agent renaming to modalities and variable owners."""
    if isinstance(f, Atom):
        v = f.var
        return Atom(Var(v.name, mapping.get(v.owner, v.owner)))
    if isinstance(f, Not):
        return Not(rename_agents(f.arg, mapping))
    if isinstance(f, And):
        return And(rename_agents(f.left, mapping), rename_agents(f.right, mapping))
    return Know(mapping.get(f.agent, f.agent), rename_agents(f.arg, mapping))


def variables_of(f: Formula) -> frozenset[Var]:
    return frozenset(g.var for g in subformulas(f) if isinstance(g, Atom))


def subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order traversal, duplicates included."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        if isinstance(g, (Not, Know)):
            stack.append(g.arg)
        elif isinstance(g, And):
            stack += [g.right, g.left]


def modal_depth(f: Formula) -> int:
    if isinstance(f, Atom):
        return 0
    if isinstance(f, Not):
        return modal_depth(f.arg)
    if isinstance(f, And):
        return max(modal_depth(f.left), modal_depth(f.right))
    return 1 + modal_depth(f.arg)


def size(f: Formula) -> int:
    """Number of AST nodes."""
    return sum(1 for _ in subformulas(f))


_TAG = {Atom: 0, Not: 1, And: 2, Know: 3}


def sort_key(f: Formula) -> tuple:
    """Total order: by size, then constructor (atom < ~ < & < K), then children."""
    return (size(f), _struct_key(f))


def _struct_key(f: Formula) -> tuple:
    if isinstance(f, Atom):
        return (0, f.var.owner, f.var.name)
    if isinstance(f, Not):
        return (1, _struct_key(f.arg))
    if isinstance(f, And):
        return (2, size(f.left), _struct_key(f.left), _struct_key(f.right))
    return (3, f.agent, _struct_key(f.arg))


def enumerate_formulas(agents: Iterable[Agent], variables: Iterable[Var | str],
                       max_size: int) -> list[Formula]:
    """All primitive formulas with at most ``max_size`` nodes, each once.

    Ordered by size, then by :func:`sort_key`.
    """
    if max_size < 1:
        raise ValueError("max_size must be >= 1")
    agents = sorted(set(agents))
    vs = sorted({v if isinstance(v, Var) else atom(v).var for v in variables},
                key=lambda v: (v.owner, v.name))
    if not vs:
        raise ValueError("empty signature: at least one variable is required")
    by_size: dict[int, list[Formula]] = {1: [Atom(v) for v in vs]}
    for n in range(2, max_size + 1):
        level: list[Formula] = [Not(g) for g in by_size[n - 1]]
        for i in range(1, n - 1):
            level += [And(l, r) for l, r in product(by_size[i], by_size[n - 1 - i])]
        level += [Know(a, g) for a in agents for g in by_size[n - 1]]
        level.sort(key=_struct_key)
        by_size[n] = level
    return [f for n in range(1, max_size + 1) for f in by_size[n]]
