"""Epistemic logic on impure (possibly crashed-agent) simplicial models."""
from .formula import (And, Atom, Formula, Know, Not, Var, Hat, Implies, Iff, Or, atom, parse,
                      to_str, top)
from .complex import SimplicialModel, Vertex, build_model, parse_model, read_model, dump_model
from .semantics import TV, eval3, is_defined, model_valid, facet_valid, truth_partition

__version__ = "0.1.0"
