"""Three-valued definability and truth on simplicial models.

``eval3`` follows the recursive clauses literally: the ``K[a]`` clause
ranges over every face sharing the ``a``-vertex of the current face, not
just facets.
"""
from __future__ import annotations

import enum
from typing import Iterable, Sequence

from .complex import SimplicialModel
from .formula import And, Atom, Formula, Know, Not

__all__ = ["TV", "Evaluator", "is_defined", "eval3", "model_valid", "facet_valid",
           "truth_partition"]


class TV(enum.Enum):
    T = "T"
    F = "F"
    U = "U"

    def __str__(self) -> str:
        return self.value

    @property
    def defined(self) -> bool:
        return self is not TV.U


_NEG = {TV.T: TV.F, TV.F: TV.T, TV.U: TV.U}


class Evaluator:
    """Memoizing evaluator bound to one model.

    ``K[a]`` values are cached per ``(a-vertex, formula)`` since they do not
    depend on the rest of the face.
    """

    def __init__(self, m: SimplicialModel):
        self.m = m
        self._face: dict[tuple, TV] = {}
        self._know: dict[tuple, TV] = {}

    def value(self, x: frozenset, f: Formula) -> TV:
        key = (x, f)
        hit = self._face.get(key)
        if hit is not None:
            return hit
        if isinstance(f, Atom):
            v = self.m.vertex_of(x, f.var.owner)
            if v is None:
                out = TV.U
            else:
                out = TV.T if f.var in self.m.vertices[v].trues else TV.F
        elif isinstance(f, Not):
            out = _NEG[self.value(x, f.arg)]
        elif isinstance(f, And):
            l = self.value(x, f.left)
            r = self.value(x, f.right)
            if l is TV.U or r is TV.U:
                out = TV.U
            elif l is TV.T and r is TV.T:
                out = TV.T
            else:
                out = TV.F
        elif isinstance(f, Know):
            v = self.m.vertex_of(x, f.agent)
            out = TV.U if v is None else self._k(v, f)
        else:
            raise TypeError(f"not a formula: {f!r}")
        self._face[key] = out
        return out

    def _k(self, v: str, f: Know) -> TV:
        key = (v, f)
        hit = self._know.get(key)
        if hit is not None:
            return hit
        seen_defined = False
        out = None
        for y in self.m.star[v]:
            val = self.value(y, f.arg)
            if val is TV.F:
                out = TV.F
                break
            if val is TV.T:
                seen_defined = True
        if out is None:
            out = TV.T if seen_defined else TV.U
        self._know[key] = out
        return out


def is_defined(m: SimplicialModel, x: Iterable[str], f: Formula) -> bool:
    return eval3(m, x, f) is not TV.U


def eval3(m: SimplicialModel, x: Iterable[str], f: Formula) -> TV:
    return Evaluator(m).value(m.check_face(x), f)


def model_valid(m: SimplicialModel, f: Formula) -> tuple[bool, list[frozenset]]:
    """``(valid, falsifying faces)``: valid iff ``f`` is never False."""
    ev = Evaluator(m)
    bad = [x for x in m.faces if ev.value(x, f) is TV.F]
    return (not bad, bad)


def facet_valid(m: SimplicialModel, f: Formula) -> bool:
    ev = Evaluator(m)
    return all(ev.value(x, f) is not TV.F for x in m.facets)


def truth_partition(m: SimplicialModel, x: Iterable[str], fs: Sequence[Formula]
                    ) -> tuple[list[Formula], list[Formula], list[Formula]]:
    """Split ``fs`` into (true, false, undefined) at face ``x``, keeping order."""
    ev = Evaluator(m)
    x = m.check_face(x)
    out: dict[TV, list[Formula]] = {TV.T: [], TV.F: [], TV.U: []}
    for f in fs:
        out[ev.value(x, f)].append(f)
    return out[TV.T], out[TV.F], out[TV.U]
