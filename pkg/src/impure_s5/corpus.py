"""Named example models and bounded truth-set comparisons.

Each model comes with *landmarks*: labelled faces such as ``X`` or ``U_l``.
One local variable ``p`` per agent; a vertex label like ``1_b`` in a
drawing becomes a ``b``-vertex with ``p_b`` true.

Truth sets of faces are infinite, so the comparisons here are over a
finite list of formulas (by default every formula up to size 7 over the
model's agents and one variable per agent).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .complex import SimplicialModel, build_model, dump_model
from .formula import (Atom, Formula, Hat, Implies, Know, Not, Or, Var, And, enumerate_formulas,
                      parse, to_str, top)
from .semantics import TV, Evaluator, eval3, model_valid

__all__ = [
    "NamedModel", "build", "MODEL_NAMES", "Agree", "Disagree", "bounded_truth_agreement",
    "Holds", "Fails", "bounded_subset", "ka_local_fragment", "default_formulas",
    "DEMOS", "demo", "DemoReport", "export", "read_landmarks", "psi_mp", "phi_mp", "bad_k",
]

AGENTS = ("a", "b", "c")


@dataclass
class NamedModel:
    name: str
    model: SimplicialModel
    landmarks: dict = field(default_factory=dict)   # label -> frozenset of vertex ids
    note: str = ""

    def face(self, label: str) -> frozenset:
        try:
            return self.landmarks[label]
        except KeyError:
            raise KeyError(f"{self.name} has no landmark {label!r}; "
                           f"known: {', '.join(self.landmarks)}") from None


def _v(vid, color, value: bool):
    return (vid, color, ["p"] if value else [])


def _named(name, verts, facets, landmarks, note="") -> NamedModel:
    m = build_model(AGENTS, verts, facets)
    marks = {k: m.check_face(v) for k, v in landmarks.items()}
    return NamedModel(name, m, marks, note)


def _fig1_left():
    verts = [_v("v_b1", "b", 1), _v("v_a0", "a", 0), _v("v_c1", "c", 1),
             _v("v_b0", "b", 0), _v("v_c1'", "c", 1)]
    return _named("fig1_left", verts,
                  [["v_b1", "v_a0", "v_c1"], ["v_a0", "v_b0", "v_c1'"]],
                  {"L": ["v_b1", "v_a0", "v_c1"], "R": ["v_a0", "v_b0", "v_c1'"]},
                  "two triangles sharing the a-vertex")


def _fig1_mid():
    verts = [_v("v_b1", "b", 1), _v("v_a0", "a", 0), _v("v_c1", "c", 1), _v("v_b0", "b", 0)]
    return _named("fig1_mid", verts,
                  [["v_b1", "v_a0", "v_c1"], ["v_a0", "v_b0", "v_c1"]],
                  {"L": ["v_b1", "v_a0", "v_c1"], "R": ["v_a0", "v_b0", "v_c1"]},
                  "two triangles sharing the ac-edge")


def _single_triangle(name):
    verts = [_v("v_a0", "a", 0), _v("v_b1", "b", 1), _v("v_c1", "c", 1)]
    return _named(name, verts, [["v_a0", "v_b1", "v_c1"]], {"T": ["v_a0", "v_b1", "v_c1"]},
                  "one triangle")


def _fig2_left():
    verts = [_v("v_b1", "b", 1), _v("v_a0", "a", 0), _v("v_b1'", "b", 1), _v("v_c1", "c", 1)]
    return _named("fig2_left", verts,
                  [["v_b1", "v_a0"], ["v_a0", "v_b1'", "v_c1"]],
                  {"E": ["v_b1", "v_a0"], "T": ["v_a0", "v_b1'", "v_c1"]},
                  "a is unsure whether c is alive")


def _fig2_mid():
    verts = [_v("v_b1", "b", 1), _v("v_a0", "a", 0), _v("v_c1", "c", 1)]
    return _named("fig2_mid", verts,
                  [["v_b1", "v_a0"], ["v_a0", "v_c1"]],
                  {"ab": ["v_b1", "v_a0"], "ac": ["v_a0", "v_c1"]},
                  "a is unsure whether b or c has crashed")


def _c_k():
    verts = [_v("v_b0", "b", 0), _v("v_a0", "a", 0), _v("v_b1", "b", 1), _v("v_c1", "c", 1)]
    return _named("c_K", verts,
                  [["v_b0", "v_a0"], ["v_a0", "v_b1", "v_c1"]],
                  {"X": ["v_b0", "v_a0"], "Y": ["v_a0", "v_b1", "v_c1"]},
                  "counterexample to unrestricted K")


def _c_mp():
    # a and b values are not drawn; they default to false
    verts = [_v("c", "c", 0), _v("a_tr", "a", 0), _v("b_tl", "b", 0), _v("a_bl", "a", 0),
             _v("b_br", "b", 0), _v("c1_left", "c", 1), _v("c0_right", "c", 0)]
    edges = {"X": ["c", "a_tr"], "Y": ["c", "b_tl"], "V": ["a_bl", "b_tl"],
             "U": ["a_bl", "c1_left"], "W": ["b_br", "a_tr"], "Z": ["b_br", "c0_right"]}
    return _named("c_MP", verts, list(edges.values()), edges,
                  "counterexample to unrestricted modus ponens")


def _xmas(valuation: Sequence[bool] = (False, False, False)):
    va, vb, vc = (bool(x) for x in valuation)
    verts = [_v("va_l", "a", va), _v("vb_l", "b", vb), _v("vc_l", "c", vc),
             _v("va_r", "a", va), _v("vb_r", "b", vb), _v("vc_r", "c", vc)]
    marks = {"U_l": ["va_l", "vb_l", "vc_l"], "U_r": ["va_r", "vb_r", "vc_r"],
             "Z_l": ["va_l", "vc_r"], "Z_r": ["vc_l", "va_r"],
             "W_l": ["va_l", "vc_l"], "W_r": ["va_r", "vc_r"]}
    facets = [marks[k] for k in ("U_l", "U_r", "Z_l", "Z_r")]
    nm = _named("xmas", verts, facets, marks, "Christmas cracker model")
    nm.note += f" with valuation a={int(va)} b={int(vb)} c={int(vc)}"
    return nm


def _b_dead_edge():
    verts = [_v("v_a", "a", 0), _v("v_c", "c", 0)]
    return _named("b_dead_edge", verts, [["v_a", "v_c"]], {"U": ["v_a", "v_c"]},
                  "agent b is dead everywhere")


_BUILDERS: dict[str, Callable[..., NamedModel]] = {
    "fig1_left": _fig1_left, "fig1_mid": _fig1_mid,
    "fig1_right": lambda: _single_triangle("fig1_right"),
    "fig2_left": _fig2_left, "fig2_mid": _fig2_mid,
    "fig2_right": lambda: _single_triangle("fig2_right"),
    "c_K": _c_k, "c_MP": _c_mp, "xmas": _xmas, "b_dead_edge": _b_dead_edge,
}
MODEL_NAMES = tuple(_BUILDERS)


def build(name: str, valuation: Sequence[bool] | None = None) -> NamedModel:
    """Build a named model; ``valuation`` (a, b, c) applies to ``xmas`` only."""
    if name not in _BUILDERS:
        raise KeyError(f"unknown model {name!r}; known: {', '.join(MODEL_NAMES)}")
    if valuation is not None:
        if name != "xmas":
            raise ValueError("only xmas takes a valuation triple")
        return _xmas(valuation)
    return _BUILDERS[name]()


def export(name: str, valuation: Sequence[bool] | None = None) -> str:
    """Model file text, with landmarks as ``# @label v1 v2`` comment lines."""
    nm = build(name, valuation)
    m = nm.model
    lines = [f"# {nm.name}: {nm.note}"]
    for label, x in nm.landmarks.items():
        lines.append(f"# @{label} " + " ".join(sorted(x, key=lambda v: (m.color(v), v))))
    return "\n".join(lines) + "\n" + dump_model(m)


def read_landmarks(text: str) -> dict:
    out = {}
    for line in text.splitlines():
        s = line.strip()
        if s.startswith("# @"):
            label, *ids = s[3:].split()
            out[label] = frozenset(ids)
    return out


# -- the formulas the examples are about ---------------------------------------

def _p(a):
    return Atom(Var("p", a))


def bad_k() -> Formula:
    """``K_a(p_c -> p_b) -> (K_a p_c -> K_a p_b)``."""
    return Implies(Know("a", Implies(_p("c"), _p("b"))),
                   Implies(Know("a", _p("c")), Know("a", _p("b"))))


def phi_mp() -> Formula:
    return And(top("a"), top("b"))


def psi_mp() -> Formula:
    return Or(Hat("c", Hat("a", Hat("b", _p("c")))), Hat("c", Hat("b", Hat("a", Not(_p("c"))))))


# -- bounded truth sets --------------------------------------------------------

def default_formulas(max_size: int = 7, agents: Iterable[str] = AGENTS) -> list[Formula]:
    agents = sorted(agents)
    return enumerate_formulas(agents, [Var("p", a) for a in agents], max_size)


@dataclass(frozen=True)
class Agree:
    checked: int
    status = "AGREE"

    def __bool__(self):
        return True


@dataclass(frozen=True)
class Disagree:
    witness: Formula
    values: tuple
    status = "DISAGREE"

    def __bool__(self):
        return False


@dataclass(frozen=True)
class Holds:
    strict: bool
    witnesses: tuple   # formulas true at Y but not at X, in list order
    status = "HOLDS"

    def __bool__(self):
        return True


@dataclass(frozen=True)
class Fails:
    witness: Formula
    status = "FAILS"

    def __bool__(self):
        return False


def bounded_truth_agreement(m: SimplicialModel, x, y, fs: Sequence[Formula]):
    """Compare all three truth values at faces ``x`` and ``y`` on ``fs``."""
    x, y = m.check_face(x), m.check_face(y)
    ev = Evaluator(m)
    for f in fs:
        vx, vy = ev.value(x, f), ev.value(y, f)
        if vx is not vy:
            return Disagree(f, (vx, vy))
    return Agree(len(fs))


def bounded_subset(m: SimplicialModel, x, y, fs: Sequence[Formula], max_witnesses: int = 10):
    """Is every formula of ``fs`` true at ``x`` also true at ``y``?"""
    x, y = m.check_face(x), m.check_face(y)
    ev = Evaluator(m)
    extra = []
    for f in fs:
        tx, ty = ev.value(x, f) is TV.T, ev.value(y, f) is TV.T
        if tx and not ty:
            return Fails(f)
        if ty and not tx and len(extra) < max_witnesses:
            extra.append(f)
    return Holds(bool(extra), tuple(extra))


def ka_local_fragment(m: SimplicialModel, x, a: str, fs: Sequence[Formula]) -> frozenset:
    """``{K_a phi in fs : K_a phi true at x}``."""
    x = m.check_face(x)
    ev = Evaluator(m)
    return frozenset(f for f in fs if isinstance(f, Know) and f.agent == a
                     and ev.value(x, f) is TV.T)


# -- demos ---------------------------------------------------------------------

@dataclass
class DemoReport:
    name: str
    rows: list = field(default_factory=list)   # (claim, expected, computed, ok)

    @property
    def passed(self) -> bool:
        return all(r[3] for r in self.rows)

    def check(self, claim: str, expected, computed):
        self.rows.append((claim, str(expected), str(computed), str(expected) == str(computed)))

    def text(self) -> str:
        out = [f"== {self.name}"]
        for claim, exp, got, ok in self.rows:
            out.append(f"  [{'ok' if ok else 'XX'}] {claim}: expected {exp}, computed {got}")
        out.append("PASS" if self.passed else "FAIL")
        return "\n".join(out)


def _demo_lemma_4_2(max_size=7) -> DemoReport:
    from .search import Bounds, find_countermodel
    r = DemoReport("lemma_4_2")
    nm = build("c_K")
    m, f = nm.model, bad_k()
    for lab in ("X", "Y"):
        r.check(f"unrestricted K instance at {lab}", "F", eval3(m, nm.face(lab), f))
        r.check(f"K[a]p_b at {lab}", "F", eval3(m, nm.face(lab), Know("a", _p("b"))))
        r.check(f"K[a]p_c at {lab}", "T", eval3(m, nm.face(lab), Know("a", _p("c"))))
    r.check("negation valid in c_K", True, model_valid(m, Not(f))[0])
    hit = find_countermodel(f, Bounds(AGENTS, 2, 1))
    r.check("bounded search finds a countermodel", True, hit is not None)
    return r


def _demo_lemma_4_3(max_size=7) -> DemoReport:
    from .search import Bounds, find_countermodel
    r = DemoReport("lemma_4_3")
    nm = build("c_MP")
    m = nm.model
    psi, phi = psi_mp(), phi_mp()
    r.check("psi at X", "F", eval3(m, nm.face("X"), psi))
    r.check("faces of c_MP", 13, len(m.faces))
    undefined = sum(eval3(m, x, Implies(phi, psi)) is TV.U for x in m.faces)
    r.check("faces where (T_a & T_b) -> psi is undefined", 13, undefined)
    b = Bounds(AGENTS, 2, 1)
    r.check("countermodel to T_a & T_b within bounds", None, find_countermodel(phi, b))
    r.check("countermodel to (T_a & T_b) -> psi within bounds", None,
            find_countermodel(Implies(phi, psi), b))
    r.check("psi valid in c_MP", False, model_valid(m, psi)[0])
    return r


def _xmas_triples():
    return list(itertools.product([False, True], repeat=3))


def _demo_example_6_1(max_size=7) -> DemoReport:
    r = DemoReport("example_6_1")
    fs = default_formulas(max_size)
    for val in _xmas_triples():
        nm = build("xmas", val)
        m = nm.model
        tag = "".join(str(int(v)) for v in val)
        r.check(f"[{tag}] U_l ~ U_r", "AGREE",
                bounded_truth_agreement(m, nm.face("U_l"), nm.face("U_r"), fs).status)
        r.check(f"[{tag}] Z_l ~ Z_r", "AGREE",
                bounded_truth_agreement(m, nm.face("Z_l"), nm.face("Z_r"), fs).status)
        r.check(f"[{tag}] W_l ~ W_r", "AGREE",
                bounded_truth_agreement(m, nm.face("W_l"), nm.face("W_r"), fs).status)
        for a in ("a", "c"):
            same = (ka_local_fragment(m, nm.face("Z_l"), a, fs)
                    == ka_local_fragment(m, nm.face("U_l"), a, fs))
            r.check(f"[{tag}] K_{a} fragments of Z_l and U_l equal", True, same)
    return r


def _demo_lemma_6_2(max_size=7) -> DemoReport:
    r = DemoReport("lemma_6_2")
    fs = default_formulas(max_size)
    for val in _xmas_triples():
        nm = build("xmas", val)
        m = nm.model
        tag = "".join(str(int(v)) for v in val)
        res = bounded_subset(m, nm.face("Z_l"), nm.face("U_l"), fs)
        want = _p("b") if val[1] else Not(_p("b"))
        r.check(f"[{tag}] truth set of Z_l within U_l", "HOLDS", res.status)
        r.check(f"[{tag}] strict, first witness", to_str(want),
                to_str(res.witnesses[0]) if res and res.strict else None)
        back = bounded_subset(m, nm.face("U_l"), nm.face("Z_l"), fs)
        r.check(f"[{tag}] reverse inclusion fails at", to_str(want),
                to_str(back.witness) if not back else None)
    return r


def _demo_example_6_3(max_size=7) -> DemoReport:
    r = DemoReport("example_6_3")
    nm = build("b_dead_edge")
    m, u = nm.model, nm.face("U")
    kb = Know("a", _p("b"))
    for f in (kb, Not(kb), Know("a", Not(kb)), Hat("a", _p("b")), Hat("a", Not(_p("b")))):
        r.check(f"{to_str(f, sugar=True)} at U", "U", eval3(m, u, f))
    r.check("U is the only facet", 1, len(m.facets))
    fs = default_formulas(min(max_size, 5))
    r.check("K_b fragment at U", 0, len(ka_local_fragment(m, u, "b", fs)))
    return r


def _demo_fig2(max_size=7) -> DemoReport:
    r = DemoReport("fig2")
    left = build("fig2_left")
    r.check("fig2_left: K[a]p_c at the edge", "T", eval3(left.model, left.face("E"), Know("a", _p("c"))))
    mid = build("fig2_mid")
    for lab in ("ab", "ac"):
        x = mid.face(lab)
        r.check(f"fig2_mid: K[a]p_b at {lab}", "T", eval3(mid.model, x, Know("a", _p("b"))))
        r.check(f"fig2_mid: K[a]p_c at {lab}", "T", eval3(mid.model, x, Know("a", _p("c"))))
        r.check(f"fig2_mid: K[a](p_b & p_c) at {lab}", "U",
                eval3(mid.model, x, Know("a", And(_p("b"), _p("c")))))
    return r


DEMOS: dict[str, Callable[..., DemoReport]] = {
    "lemma_4_2": _demo_lemma_4_2, "lemma_4_3": _demo_lemma_4_3,
    "example_6_1": _demo_example_6_1, "lemma_6_2": _demo_lemma_6_2,
    "example_6_3": _demo_example_6_3, "fig2": _demo_fig2,
}


def demo(name: str, max_size: int = 7) -> DemoReport:
    if name not in DEMOS:
        raise KeyError(f"unknown demo {name!r}; known: {', '.join(DEMOS)}")
    return DEMOS[name](max_size)
