import warnings

import pytest

from impure_s5.complex import (ModelError, a_adjacent, alive, build_model, dimension, dump_model,
                               is_facet, is_pure, parse_face, parse_model)
from impure_s5.corpus import MODEL_NAMES, build, export, read_landmarks

TEXT = """\
# two triangles glued along an a-b edge, plus a dead-c edge
agents a b c
vertex a0 a { p }
vertex b0 b { }
vertex c0 c { p }
vertex c1 c { }
vertex b1 b { p }
facet a0 b0 c0
facet a0 b0 c1
facet a0 b1
"""


def test_parse_and_faces():
    m = parse_model(TEXT)
    assert m.agents == ("a", "b", "c")
    assert len(m.facets) == 3
    # 5 vertices, edges ab ac ac' bc bc' ab', two triangles
    assert len(m.faces) == 5 + 6 + 2
    assert is_facet(m, {"a0", "b1"})
    assert not is_pure(m)
    assert dimension(m) == 2
    assert alive(m, {"a0", "b1"}) == {"a", "b"}
    assert a_adjacent(m, {"a0", "b1"}, {"b0", "c1"}, "a") is False
    assert a_adjacent(m, {"a0", "b1"}, {"a0", "c1"}, "a")


def test_dump_round_trip():
    m = parse_model(TEXT)
    assert parse_model(dump_model(m)) == m


@pytest.mark.parametrize("name", MODEL_NAMES)
def test_corpus_export_round_trip(name):
    nm = build(name)
    text = export(name)
    assert parse_model(text) == nm.model
    assert read_landmarks(text) == nm.landmarks


def test_isolated_vertex_is_a_facet():
    m = build_model("ab", [("a0", "a"), ("b0", "b"), ("b1", "b")], [["a0", "b0"]])
    assert frozenset({"b1"}) in m.facets


def test_non_maximal_facet_is_demoted():
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        m = build_model("ab", [("a0", "a"), ("b0", "b")], [["a0"], ["a0", "b0"]])
    assert m.facets == (frozenset({"a0", "b0"}),)
    assert any("not maximal" in str(x.message) for x in w)


@pytest.mark.parametrize("text, msg", [
    ("vertex a0 a { }\nfacet a0", "missing 'agents'"),
    ("agents a b\nvertex a0 a { }\nvertex a1 a { }\nfacet a0 a1", "two vertices of color a"),
    ("agents a\nvertex a0 z { }\nfacet a0", "undeclared color"),
    ("agents a\nvertex a0 a { }\nfacet a0 a9", "not declared"),
    ("agents a\nvertex a0 a { }\nvertex a0 a { }", "declared twice"),
    ("agents a\nvertex a0 a p\nfacet a0", "wrapped"),
    ("agents a\nbogus x", "unknown directive"),
])
def test_malformed(text, msg):
    with pytest.raises(ModelError, match=msg):
        parse_model(text)


def test_check_face():
    m = parse_model(TEXT)
    with pytest.raises(ModelError, match="not a face"):
        m.check_face({"c0", "c1"})
    assert parse_face(" a0, b0 ") == {"a0", "b0"}
    with pytest.raises(ModelError):
        parse_face(" , ")


def test_c_mp_has_thirteen_faces():
    assert len(build("c_MP").model.faces) == 13
