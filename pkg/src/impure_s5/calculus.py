"""Hilbert-style derivations with definability side conditions.

A :class:`Derivation` is a list of lines, each a formula with a
justification: a tautology, an axiom instance, rule ``N``, the restricted
modus ponens ``MP``, a premise (a line "derivable by assumption", which
turns the derivation into a derived rule), or a macro standing for a
derived rule.  :func:`check_derivation` expands macros into primitive lines
(keeping their provenance) and checks every line, discharging the
definability provisos of ``Kdef`` and ``MP`` with :func:`check_defcons`.

Axiom names: ``T``, ``4``, ``5``, ``L``, ``Kdef`` (normality restricted by
``psi, K_a phi |x phi``) and ``KKh``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .defcons import DefconsBudget, check_defcons
from .formula import (And, Atom, Formula, Hat, Implies, Know, Not, Or, ParseError, conj, match_implies,
                      parse, to_str)

__all__ = [
    "Taut", "Ax", "RuleN", "RuleMP", "Premise", "Macro", "Line", "Derivation",
    "AxiomInstance", "match_axiom", "axiom_instance", "AXIOMS", "tautology_check",
    "ProvisoRecord", "CheckReport", "check_derivation", "check_hypothesis_derivation",
    "check_inconsistency_witness", "flatten", "MacroError", "parse_derivation",
    "format_derivation", "match_conj",
]

AXIOMS = ("T", "4", "5", "L", "Kdef", "KKh")


# -- justifications ----------------------------------------------------------

@dataclass(frozen=True)
class Taut:
    def __str__(self):
        return "taut"


@dataclass(frozen=True)
class Ax:
    name: str

    def __str__(self):
        return f"ax {self.name}"


@dataclass(frozen=True)
class RuleN:
    step: int

    def __str__(self):
        return f"N {self.step + 1}"


@dataclass(frozen=True)
class RuleMP:
    """Either premise order is accepted; the checker finds the implication."""

    major: int
    minor: int

    def __str__(self):
        return f"MP {self.major + 1} {self.minor + 1}"


@dataclass(frozen=True)
class Premise:
    def __str__(self):
        return "premise"


@dataclass(frozen=True)
class Macro:
    name: str
    args: tuple = ()

    def __str__(self):
        return f"macro {self.name}({','.join(str(a + 1) for a in self.args)})"


Justification = Taut | Ax | RuleN | RuleMP | Premise | Macro


@dataclass(frozen=True)
class Line:
    formula: Formula
    just: Justification
    origin: str = ""   # macro provenance, e.g. "HS@6"
    label: str = ""


class MacroError(ValueError):
    pass


class Derivation:
    """Append-only list of lines with builder helpers.

    Each helper returns the 0-based index of the new line.
    """

    def __init__(self, lines: Iterable[Line] = ()):
        self.lines: list[Line] = list(lines)

    def __len__(self):
        return len(self.lines)

    def __getitem__(self, i) -> Line:
        return self.lines[i]

    def f(self, i: int) -> Formula:
        return self.lines[i].formula

    @property
    def conclusion(self) -> Formula:
        return self.lines[-1].formula

    def add(self, formula: Formula, just: Justification, label: str = "") -> int:
        self.lines.append(Line(formula, just, "", label or str(len(self.lines) + 1)))
        return len(self.lines) - 1

    def premise(self, f: Formula) -> int:
        return self.add(f, Premise())

    def taut(self, f: Formula) -> int:
        return self.add(f, Taut())

    def ax(self, name: str, f: Formula) -> int:
        return self.add(f, Ax(name))

    def n(self, i: int, agent: str) -> int:
        return self.add(Know(agent, self.f(i)), RuleN(i))

    def mp(self, i: int, j: int) -> int:
        """Modus ponens on lines ``i`` and ``j`` (in either order)."""
        for major, minor in ((i, j), (j, i)):
            imp = match_implies(self.f(major))
            if imp and imp[0] == self.f(minor):
                return self.add(imp[1], RuleMP(i, j))
        raise MacroError(f"lines {i + 1} and {j + 1} do not fit modus ponens")

    def macro(self, name: str, *args: int, target: Formula | None = None) -> int:
        from .derived import expand_macro
        sub = expand_macro(name, [self.f(a) for a in args], target)
        return self.add(sub.conclusion, Macro(name, tuple(args)))

    def premises(self) -> list[int]:
        return [i for i, l in enumerate(self.lines) if isinstance(l.just, Premise)]


# -- axioms ------------------------------------------------------------------

@dataclass(frozen=True)
class AxiomInstance:
    name: str
    agent: str
    phi: Formula
    psi: Formula | None = None

    @property
    def proviso(self) -> tuple[frozenset, Formula] | None:
        """``(gamma, psi)`` to discharge, ``Kdef`` only."""
        if self.name == "Kdef":
            return frozenset([self.psi, Know(self.agent, self.phi)]), self.phi
        return None


def axiom_instance(name: str, agent: str, phi: Formula, psi: Formula | None = None) -> Formula:
    """Build the instance of schema ``name``; for ``L`` ``phi`` is the atom."""
    a = agent
    if name == "T":
        return Implies(Know(a, phi), phi)
    if name == "4":
        return Implies(Know(a, phi), Know(a, Know(a, phi)))
    if name == "5":
        return Implies(Not(Know(a, phi)), Know(a, Not(Know(a, phi))))
    if name == "L":
        if not (isinstance(phi, Atom) and phi.var.owner == a):
            raise ValueError(f"L needs a variable of agent {a}")
        return Or(Know(a, phi), Know(a, Not(phi)))
    if name == "Kdef":
        return Implies(Know(a, Implies(phi, psi)), Implies(Know(a, phi), Know(a, psi)))
    if name == "KKh":
        return Implies(Know(a, Implies(phi, psi)), Implies(Know(a, phi), Hat(a, psi)))
    raise ValueError(f"unknown axiom {name!r}")


def match_axiom(name: str, f: Formula) -> AxiomInstance | None:
    """Match ``f`` against schema ``name``; ``None`` if it is not an instance."""
    if name not in AXIOMS:
        raise ValueError(f"unknown axiom {name!r}")
    imp = match_implies(f)
    if name == "L":
        if isinstance(f, Not) and isinstance(f.arg, And):
            l, r = f.arg.left, f.arg.right
            if (isinstance(l, Not) and isinstance(r, Not) and isinstance(l.arg, Know)
                    and isinstance(l.arg.arg, Atom)):
                a, p = l.arg.agent, l.arg.arg
                if p.var.owner == a and r.arg == Know(a, Not(p)):
                    return AxiomInstance("L", a, p)
        return None
    if imp is None:
        return None
    lhs, rhs = imp
    if name == "T":
        if isinstance(lhs, Know) and lhs.arg == rhs:
            return AxiomInstance("T", lhs.agent, rhs)
    elif name == "4":
        if isinstance(lhs, Know) and rhs == Know(lhs.agent, lhs):
            return AxiomInstance("4", lhs.agent, lhs.arg)
    elif name == "5":
        if isinstance(lhs, Not) and isinstance(lhs.arg, Know) and rhs == Know(lhs.arg.agent, lhs):
            return AxiomInstance("5", lhs.arg.agent, lhs.arg.arg)
    elif name in ("Kdef", "KKh"):
        if not isinstance(lhs, Know):
            return None
        a = lhs.agent
        inner, tail = match_implies(lhs.arg), match_implies(rhs)
        if inner is None or tail is None:
            return None
        phi, psi = inner
        want = Know(a, psi) if name == "Kdef" else Hat(a, psi)
        if tail == (Know(a, phi), want):
            return AxiomInstance(name, a, phi, psi)
    else:
        raise ValueError(f"unknown axiom {name!r}")
    return None


# -- tautologies -------------------------------------------------------------

def tautology_check(f: Formula) -> bool:
    """Classical validity with atoms and ``K``-formulas read as letters.

    All assignments are evaluated at once: letter ``i`` is the bitmask of
    rows in which it is true.
    """
    letters: dict[Formula, int] = {}

    def collect(g):
        if isinstance(g, Not):
            collect(g.arg)
        elif isinstance(g, And):
            collect(g.left)
            collect(g.right)
        elif g not in letters:
            letters[g] = len(letters)

    collect(f)
    n = len(letters)
    rows = 1 << n
    full = (1 << rows) - 1
    masks = {}
    for g, i in letters.items():
        m = 0
        for r in range(rows):
            if r >> i & 1:
                m |= 1 << r
        masks[g] = m

    def ev(g) -> int:
        if isinstance(g, Not):
            return full & ~ev(g.arg)
        if isinstance(g, And):
            return ev(g.left) & ev(g.right)
        return masks[g]

    return ev(f) == full


# -- flattening --------------------------------------------------------------

def flatten(d: Derivation) -> tuple[list[Line], list[int]]:
    """Expand macros recursively.

    Returns the primitive lines and, for each line of ``d``, the index of
    the primitive line holding its formula.  Macro lines keep their
    provenance in ``origin``.
    """
    from .derived import expand_macro
    flat: list[Line] = []
    where: list[int] = []
    for i, line in enumerate(d.lines):
        j = line.just
        label = line.label or str(i + 1)
        if not isinstance(j, Macro):
            flat.append(Line(line.formula, _remap(j, where), line.origin, label))
            where.append(len(flat) - 1)
            continue
        for a in j.args:
            if not 0 <= a < i:
                raise MacroError(f"line {label}: macro argument {a + 1} is not an earlier line")
        sub = expand_macro(j.name, [d.f(a) for a in j.args], line.formula)
        if sub.conclusion != line.formula:
            raise MacroError(f"line {label}: {j.name} concludes {to_str(sub.conclusion)}")
        sflat, _ = flatten(sub)
        local: list[int] = []
        tag = f"{j.name}@{label}"
        k_prem = 0
        for sl in sflat:
            if isinstance(sl.just, Premise):
                if k_prem >= len(j.args):
                    raise MacroError(f"line {label}: {j.name} has an undeclared premise")
                local.append(where[j.args[k_prem]])
                k_prem += 1
                continue
            origin = tag + ("/" + sl.origin if sl.origin else "")
            flat.append(Line(sl.formula, _remap(sl.just, local), origin, label))
            local.append(len(flat) - 1)
        where.append(local[-1])
    return flat, where


def _remap(j, where):
    if isinstance(j, RuleN):
        return RuleN(_ref(where, j.step))
    if isinstance(j, RuleMP):
        return RuleMP(_ref(where, j.major), _ref(where, j.minor))
    return j


def _ref(where, i):
    # forward references survive remapping as out-of-range indices
    return where[i] if 0 <= i < len(where) else 10 ** 9 + i


# -- checking ----------------------------------------------------------------

@dataclass(frozen=True)
class ProvisoRecord:
    step: int          # primitive line index
    label: str         # line label in the unexpanded derivation
    rule: str
    gamma: frozenset
    psi: Formula
    status: str        # PROVEN | ASSUMED | FAILED


@dataclass
class CheckReport:
    verdict: str                      # ACCEPTED | REJECTED
    step: int | None = None           # failing primitive line
    label: str | None = None          # failing line label
    reason: str = ""
    provisos: list = field(default_factory=list)
    premises: list = field(default_factory=list)   # premise formulas
    lines: list = field(default_factory=list)      # primitive lines
    top_lines: int = 0
    conclusion: Formula | None = None

    @property
    def accepted(self) -> bool:
        return self.verdict == "ACCEPTED"

    def __bool__(self):
        return self.accepted

    @property
    def all_proven(self) -> bool:
        return all(p.status == "PROVEN" for p in self.provisos)

    def summary(self) -> str:
        out = [self.verdict if self.accepted
               else f"REJECTED at line {self.label} (step {self.step + 1}): {self.reason}"]
        if self.premises:
            out.append("premises: " + "; ".join(to_str(p, sugar=True) for p in self.premises))
        out.append(f"{self.top_lines} lines, {len(self.lines)} primitive steps")
        if self.provisos:
            out.append("provisos:")
            for p in self.provisos:
                g = ", ".join(sorted(to_str(x, sugar=True) for x in p.gamma))
                out.append(f"  step {p.step + 1:>3} [{p.label}] {p.rule:<4} "
                           f"{g} |x {to_str(p.psi, sugar=True)}   {p.status}")
        return "\n".join(out)


def check_derivation(d: Derivation, policy: str = "require-proven",
                     budget: DefconsBudget | None = None) -> CheckReport:
    """Validate ``d``; the first failing line rejects.

    ``policy`` is ``require-proven`` or ``allow-assumed``.  Under the latter
    a proviso the definability checker can neither prove nor refute is
    recorded as ASSUMED; a refuted proviso always rejects.
    """
    if policy not in ("require-proven", "allow-assumed"):
        raise ValueError(f"unknown proviso policy {policy!r}")
    report = CheckReport("ACCEPTED", top_lines=len(d))
    try:
        flat, _ = flatten(d)
    except MacroError as e:
        report.verdict, report.reason = "REJECTED", str(e)
        m = re.match(r"line (\S+):", str(e))
        report.label = m.group(1) if m else "?"
        report.step = 0
        return report
    report.lines = flat
    if not flat:
        report.verdict, report.reason, report.step, report.label = "REJECTED", "empty derivation", 0, "?"
        return report

    def reject(i, why):
        report.verdict, report.step, report.label, report.reason = "REJECTED", i, flat[i].label, why
        return report

    def discharge(i, rule, gamma, psi) -> str | None:
        r = check_defcons(gamma, psi, budget)
        if r.status == "PROVEN":
            status = "PROVEN"
        elif r.status == "UNKNOWN" and policy == "allow-assumed":
            status = "ASSUMED"
        else:
            status = "FAILED"
        report.provisos.append(ProvisoRecord(i, flat[i].label, rule, frozenset(gamma), psi, status))
        if status == "FAILED":
            g = ", ".join(sorted(to_str(x, sugar=True) for x in gamma))
            return f"proviso {g} |x {to_str(psi, sugar=True)} is {r.status.lower()}"
        return None

    for i, line in enumerate(flat):
        f, j = line.formula, line.just
        if isinstance(j, Premise):
            report.premises.append(f)
        elif isinstance(j, Taut):
            if not tautology_check(f):
                return reject(i, "not a propositional tautology")
        elif isinstance(j, Ax):
            if j.name not in AXIOMS:
                return reject(i, f"unknown axiom {j.name!r}")
            inst = match_axiom(j.name, f)
            if inst is None:
                return reject(i, f"not an instance of axiom {j.name}")
            if inst.proviso is not None:
                why = discharge(i, "Kdef", *inst.proviso)
                if why:
                    return reject(i, why)
        elif isinstance(j, RuleN):
            if not 0 <= j.step < i:
                return reject(i, "N refers to a line that is not earlier")
            if not (isinstance(f, Know) and f.arg == flat[j.step].formula):
                return reject(i, "N must conclude K_a of the referenced line")
        elif isinstance(j, RuleMP):
            if not (0 <= j.major < i and 0 <= j.minor < i):
                return reject(i, "MP refers to a line that is not earlier")
            minor = None
            for x, y in ((j.major, j.minor), (j.minor, j.major)):
                imp = match_implies(flat[x].formula)
                if imp and imp == (flat[y].formula, f):
                    minor = flat[y].formula
                    break
            if minor is None:
                return reject(i, "MP needs lines phi -> psi and phi concluding psi")
            why = discharge(i, "MP", frozenset([f]), minor)
            if why:
                return reject(i, why)
        else:
            return reject(i, f"unexpanded justification {j}")
    report.conclusion = flat[-1].formula
    return report


def match_conj(c: Formula, pool: Iterable[Formula]) -> list[Formula] | None:
    """Split ``c`` into a right-associated conjunction of members of ``pool``."""
    pool = set(pool)
    if c in pool:
        return [c]
    if isinstance(c, And) and c.left in pool:
        rest = match_conj(c.right, pool)
        if rest is not None:
            return [c.left] + rest
    return None


def check_hypothesis_derivation(gamma: Iterable[Formula], phi: Formula, d: Derivation,
                                gamma0: Sequence[Formula] | None = None,
                                policy: str = "require-proven") -> CheckReport:
    """``gamma |- phi`` witnessed by ``d``.

    ``d`` must be premise-free and conclude either ``phi`` or
    ``conj(gamma0) -> phi`` for a nonempty ``gamma0`` drawn from ``gamma``
    (right-associated; inferred from the conclusion when not declared).
    """
    gamma = frozenset(gamma)
    rep = check_derivation(d, policy)
    if not rep.accepted:
        return rep
    last = len(rep.lines) - 1

    def fail(why):
        rep.verdict, rep.step, rep.label, rep.reason = "REJECTED", last, rep.lines[last].label, why
        return rep

    if rep.premises:
        return fail("a derivation from hypotheses may not use premise lines")
    c = rep.conclusion
    if c == phi:
        return rep
    imp = match_implies(c)
    if imp is None or imp[1] != phi:
        return fail("conclusion is neither phi nor an implication with consequent phi")
    if gamma0 is not None:
        if not gamma0 or not set(gamma0) <= gamma:
            return fail("declared gamma0 must be a nonempty subset of gamma")
        if imp[0] != conj(list(gamma0)):
            return fail("antecedent is not the conjunction of the declared gamma0")
        return rep
    if match_conj(imp[0], gamma) is None:
        return fail("antecedent is not a conjunction of members of gamma")
    return rep


def check_inconsistency_witness(gamma: Iterable[Formula], d: Derivation,
                                gamma0: Sequence[Formula] | None = None) -> bool:
    """True iff ``d`` is accepted, premise-free, and concludes ``~conj(gamma0)``."""
    gamma = frozenset(gamma)
    if not gamma:
        return False
    rep = check_derivation(d)
    if not rep.accepted or rep.premises:
        return False
    c = rep.conclusion
    if not isinstance(c, Not):
        return False
    if gamma0 is not None:
        return bool(gamma0) and set(gamma0) <= gamma and c.arg == conj(list(gamma0))
    return match_conj(c.arg, gamma) is not None


# -- file format -------------------------------------------------------------

_LINE = re.compile(r"^\s*(\S+)\s+(.*?)\s*;\s*(.+?)\s*$")


def parse_derivation(text: str, agents: Iterable[str] | None = None) -> Derivation:
    """Read the line format ``<label> <formula> ; <justification>``.

    Justifications: ``taut``, ``premise``, ``ax <name>``, ``N <i>``,
    ``MP <i> <j>``, ``macro <name>(<i>,...)``; references use labels.
    """
    d = Derivation()
    index: dict[str, int] = {}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = _LINE.match(line)
        if not m:
            raise ValueError(f"line {n}: expected '<label> <formula> ; <justification>'")
        label, ftext, jtext = m.groups()
        if label in index:
            raise ValueError(f"line {n}: duplicate label {label}")
        try:
            f = parse(ftext, agents)
        except ParseError as e:
            raise ValueError(f"line {n}: {e}") from None

        def ref(tok):
            if tok not in index:
                # a forward or unknown reference; the checker rejects it
                return 10 ** 9
            return index[tok]

        parts = jtext.split()
        head = parts[0]
        if head == "taut" and len(parts) == 1:
            j = Taut()
        elif head == "premise" and len(parts) == 1:
            j = Premise()
        elif head == "ax" and len(parts) == 2:
            j = Ax(parts[1])
        elif head == "N" and len(parts) == 2:
            j = RuleN(ref(parts[1]))
        elif head == "MP" and len(parts) == 3:
            j = RuleMP(ref(parts[1]), ref(parts[2]))
        elif head == "macro":
            mm = re.fullmatch(r"macro\s+([A-Za-z_0-9]+)\s*\(([^)]*)\)", jtext.strip())
            if not mm:
                raise ValueError(f"line {n}: malformed macro call")
            args = tuple(ref(a.strip()) for a in mm.group(2).split(",") if a.strip())
            j = Macro(mm.group(1), args)
        else:
            raise ValueError(f"line {n}: unknown justification {jtext!r}")
        index[label] = len(d.lines)
        d.lines.append(Line(f, j, "", label))
    return d


def format_derivation(d: Derivation, sugar: bool = True) -> str:
    labels = [l.label or str(i + 1) for i, l in enumerate(d.lines)]

    def lab(i):
        return labels[i] if 0 <= i < len(labels) else "?"

    out = []
    for i, l in enumerate(d.lines):
        j = l.just
        if isinstance(j, RuleN):
            js = f"N {lab(j.step)}"
        elif isinstance(j, RuleMP):
            js = f"MP {lab(j.major)} {lab(j.minor)}"
        elif isinstance(j, Macro):
            js = f"macro {j.name}({','.join(lab(a) for a in j.args)})"
        else:
            js = str(j)
        out.append(f"{labels[i]} {to_str(l.formula, sugar)} ; {js}")
    return "\n".join(out) + "\n"
