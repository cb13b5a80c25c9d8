"""Chromatic simplicial models.

A model is given by its facets; every nonempty subset of a facet is a face.
Faces are represented as frozensets of vertex ids.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Sequence

from .formula import Agent, Var

__all__ = [
    "Vertex", "Face", "SimplicialModel", "ModelError", "build_model",
    "alive", "a_adjacent", "is_facet", "facets", "faces", "dimension", "is_pure",
    "parse_model", "dump_model", "read_model", "parse_face",
]

Face = frozenset


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class Vertex:
    id: str
    color: Agent
    trues: frozenset = frozenset()  # of Var, all owned by ``color``

    def __post_init__(self):
        for v in self.trues:
            if v.owner != self.color:
                raise ModelError(
                    f"vertex {self.id} has color {self.color} but variable {v} belongs to {v.owner}")


def _subfaces(facet: frozenset) -> Iterator[frozenset]:
    items = sorted(facet)
    for k in range(1, len(items) + 1):
        for c in combinations(items, k):
            yield frozenset(c)


class SimplicialModel:
    """Immutable chromatic simplicial model with precomputed faces.

    Use :func:`build_model` to construct one from declarations.
    """

    def __init__(self, agents: Iterable[Agent], vertices: Mapping[str, Vertex],
                 facets: Iterable[frozenset]):
        self.agents: tuple[Agent, ...] = tuple(sorted(set(agents)))
        self.vertices: dict[str, Vertex] = dict(vertices)
        self.facets: tuple[frozenset, ...] = tuple(sorted(facets, key=_face_key))
        seen: set[frozenset] = set()
        for f in self.facets:
            seen.update(_subfaces(f))
        self.faces: tuple[frozenset, ...] = tuple(sorted(seen, key=_face_key))
        self._face_set = frozenset(seen)
        self._facet_set = frozenset(self.facets)
        # star: vertex id -> faces containing it
        star: dict[str, list[frozenset]] = {v: [] for v in self.vertices}
        for x in self.faces:
            for v in x:
                star[v].append(x)
        self.star: dict[str, tuple[frozenset, ...]] = {v: tuple(s) for v, s in star.items()}
        fstar: dict[str, list[frozenset]] = {v: [] for v in self.vertices}
        for x in self.facets:
            for v in x:
                fstar[v].append(x)
        self.facet_star: dict[str, tuple[frozenset, ...]] = {v: tuple(s) for v, s in fstar.items()}

    def color(self, v: str) -> Agent:
        return self.vertices[v].color

    def vertex_of(self, x: frozenset, a: Agent) -> str | None:
        """The ``a``-colored vertex of face ``x``, if any."""
        for v in x:
            if self.vertices[v].color == a:
                return v
        return None

    def has_face(self, x: Iterable[str]) -> bool:
        return frozenset(x) in self._face_set

    def check_face(self, x: Iterable[str]) -> frozenset:
        x = frozenset(x)
        if x not in self._face_set:
            raise ModelError(f"{{{', '.join(sorted(x))}}} is not a face of the model")
        return x

    def variables(self) -> frozenset:
        return frozenset(v for vx in self.vertices.values() for v in vx.trues)

    def with_valuation(self, trues: Mapping[str, Iterable[Var]]) -> "SimplicialModel":
        """Copy of the model with the valuation replaced (missing ids -> empty)."""
        vs = {i: Vertex(i, vx.color, frozenset(trues.get(i, ()))) for i, vx in self.vertices.items()}
        return SimplicialModel(self.agents, vs, self.facets)

    def face_str(self, x: Iterable[str]) -> str:
        return ",".join(sorted(x, key=lambda v: (self.vertices[v].color, v)))

    def __repr__(self) -> str:
        fs = " ".join("{" + self.face_str(f) + "}" for f in self.facets)
        return f"SimplicialModel(agents={''.join(self.agents)}, facets={fs})"

    def __eq__(self, other) -> bool:
        return (isinstance(other, SimplicialModel) and self.agents == other.agents
                and self.vertices == other.vertices and self._facet_set == other._facet_set)

    def __hash__(self) -> int:
        return hash((self.agents, self._facet_set))


def _face_key(x: frozenset) -> tuple:
    return (len(x), sorted(x))


def build_model(agents: Iterable[Agent],
                vertices: Iterable[Vertex | tuple],
                facets: Iterable[Iterable[str]]) -> SimplicialModel:
    """Validate declarations and build a model.

    ``vertices`` holds :class:`Vertex` objects or ``(id, color[, trues])``
    tuples, where ``trues`` may list variable names without owner suffix.
    Declared facets contained in another facet are dropped with a warning.
    """
    agents = set(agents)
    if not agents:
        raise ModelError("no agents declared")
    vmap: dict[str, Vertex] = {}
    for decl in vertices:
        if not isinstance(decl, Vertex):
            vid, color, *rest = decl
            trues = rest[0] if rest else ()
            decl = Vertex(vid, color, frozenset(
                t if isinstance(t, Var) else Var(t, color) for t in trues))
        if decl.id in vmap:
            raise ModelError(f"vertex {decl.id} declared twice")
        if decl.color not in agents:
            raise ModelError(f"vertex {decl.id} has undeclared color {decl.color}")
        vmap[decl.id] = decl

    fs: list[frozenset] = []
    for raw in facets:
        f = frozenset(raw)
        if not f:
            raise ModelError("empty facet")
        for v in f:
            if v not in vmap:
                raise ModelError(f"vertex {v} used in a facet but not declared")
        colors = [vmap[v].color for v in f]
        if len(set(colors)) != len(colors):
            dup = next(c for c in colors if colors.count(c) > 1)
            raise ModelError(f"facet {{{', '.join(sorted(f))}}} has two vertices of color {dup}")
        if f not in fs:
            fs.append(f)
    maximal = []
    for f in fs:
        if any(f < g for g in fs):
            warnings.warn(f"declared facet {{{', '.join(sorted(f))}}} is not maximal; demoted",
                          stacklevel=2)
        else:
            maximal.append(f)
    covered = set().union(*maximal) if maximal else set()
    missing = sorted(set(vmap) - covered)
    if missing:
        # Isolated vertices form facets by themselves.
        maximal += [frozenset([v]) for v in missing]
    return SimplicialModel(agents, vmap, maximal)


# -- queries -----------------------------------------------------------------

def alive(m: SimplicialModel, x: Iterable[str]) -> frozenset:
    return frozenset(m.vertices[v].color for v in m.check_face(x))


def a_adjacent(m: SimplicialModel, x: Iterable[str], y: Iterable[str], a: Agent) -> bool:
    x, y = m.check_face(x), m.check_face(y)
    return any(m.vertices[v].color == a for v in x & y)


def is_facet(m: SimplicialModel, x: Iterable[str]) -> bool:
    return frozenset(x) in m._facet_set


def facets(m: SimplicialModel) -> tuple[frozenset, ...]:
    return m.facets


def faces(m: SimplicialModel) -> Iterator[frozenset]:
    return iter(m.faces)


def dimension(m_or_x) -> int:
    """Dimension of a model (largest facet) or of a single face; |X| - 1."""
    if isinstance(m_or_x, SimplicialModel):
        return max(len(f) for f in m_or_x.facets) - 1
    return len(m_or_x) - 1


def is_pure(m: SimplicialModel) -> bool:
    return all(len(f) == len(m.agents) for f in m.facets)


# -- text format -------------------------------------------------------------

def parse_model(text: str) -> SimplicialModel:
    agents: list[str] | None = None
    verts: list[tuple] = []
    fs: list[list[str]] = []
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        try:
            if head == "agents":
                if not rest:
                    raise ModelError("agents line is empty")
                agents = rest
            elif head == "vertex":
                vid, color, *vs = rest
                body = " ".join(vs).strip()
                if body:
                    if not (body.startswith("{") and body.endswith("}")):
                        raise ModelError("variables must be wrapped in { }")
                    body = body[1:-1]
                verts.append((vid, color, body.replace(",", " ").split()))
            elif head == "facet":
                if not rest:
                    raise ModelError("empty facet")
                fs.append(rest)
            else:
                raise ModelError(f"unknown directive {head!r}")
        except ValueError as e:
            raise ModelError(f"line {n}: {e}") from None
    if agents is None:
        raise ModelError("missing 'agents' line")
    return build_model(agents, verts, fs)


def read_model(path: str) -> SimplicialModel:
    with open(path, encoding="utf-8") as fh:
        return parse_model(fh.read())


def dump_model(m: SimplicialModel) -> str:
    lines = ["agents " + " ".join(m.agents)]
    for vid in sorted(m.vertices, key=lambda v: (m.vertices[v].color, v)):
        vx = m.vertices[vid]
        names = " ".join(sorted(v.name for v in vx.trues))
        lines.append(f"vertex {vid} {vx.color} {{ {names} }}".replace("{  }", "{ }"))
    for f in m.facets:
        lines.append("facet " + " ".join(sorted(f, key=lambda v: (m.vertices[v].color, v))))
    return "\n".join(lines) + "\n"


def parse_face(text: str) -> frozenset:
    ids = [t.strip() for t in text.split(",") if t.strip()]
    if not ids:
        raise ModelError("empty face")
    return frozenset(ids)
