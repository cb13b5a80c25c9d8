"""Command-line entry point.

Exit status: 0 on a positive outcome (T/F/U printed, VALID, NONE, PROVEN,
ACCEPTED, PASS), 1 on a negative one (INVALID, countermodel found,
REFUTED, UNKNOWN, REJECTED, FAIL), 2 on usage or input errors.

``-m`` takes a model file or a corpus model name.  Faces are
comma-separated vertex ids, or ``@label`` for a landmark.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import corpus
from .calculus import check_derivation, format_derivation, parse_derivation
from .complex import ModelError, SimplicialModel, dump_model, parse_face, parse_model
from .defcons import DefconsBudget, check_defcons, format_trace
from .formula import ParseError, parse, to_str
from .search import Bounds, find_countermodel
from .semantics import eval3, model_valid


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{name} must be an integer, got {raw!r}") from None


class _Out:
    """Collects plain lines or key=value records."""

    def __init__(self, machine: bool):
        self.machine = machine
        self.lines: list[str] = []

    def plain(self, text: str):
        if not self.machine:
            self.lines.append(text)

    def rec(self, key: str, value):
        if self.machine:
            self.lines.append(f"{key}={_flat(value)}")

    def both(self, key, value, text=None):
        self.rec(key, value)
        self.plain(str(value) if text is None else text)


def _flat(v) -> str:
    return str(v).replace("\n", "\\n")


# -- inputs ------------------------------------------------------------------

def _load_model(spec: str, valuation: str | None):
    """Return (model, landmarks)."""
    val = None
    if valuation is not None:
        if len(valuation) != 3 or set(valuation) - {"0", "1"}:
            raise UsageError("--valuation takes three binary digits for a, b, c (e.g. 101)")
        val = [c == "1" for c in valuation]
    if spec in corpus.MODEL_NAMES and not Path(spec).exists():
        nm = corpus.build(spec, val)
        return nm.model, dict(nm.landmarks)
    if val is not None:
        raise UsageError("--valuation applies to the corpus model xmas only")
    try:
        text = Path(spec).read_text()
    except OSError as e:
        raise UsageError(f"cannot read model {spec}: {e.strerror}") from None
    return parse_model(text), {k: frozenset(v) for k, v in corpus.read_landmarks(text).items()}


def _face(m: SimplicialModel, landmarks: dict, text: str) -> frozenset:
    if text.startswith("@"):
        if text[1:] not in landmarks:
            known = ", ".join("@" + k for k in landmarks) or "none"
            raise UsageError(f"unknown landmark {text}; known: {known}")
        return landmarks[text[1:]]
    return m.check_face(parse_face(text))


def _formula(text: str, agents=None):
    return parse(text, agents)


# -- commands ----------------------------------------------------------------

def cmd_eval(a, out: _Out) -> int:
    m, marks = _load_model(a.model, a.valuation)
    x = _face(m, marks, a.face)
    v = eval3(m, x, _formula(a.formula, m.agents))
    out.rec("face", m.face_str(x))
    out.both("value", v)
    return 0


def cmd_valid(a, out: _Out) -> int:
    m, _ = _load_model(a.model, a.valuation)
    ok, bad = model_valid(m, _formula(a.formula, m.agents))
    out.both("valid", "VALID" if ok else "INVALID")
    for x in bad:
        out.both("false_at", m.face_str(x), f"false at {m.face_str(x)}")
    return 0 if ok else 1


def cmd_countermodel(a, out: _Out) -> int:
    agents = [s for s in a.agents.split(",") if s]
    f = _formula(a.formula, agents)
    b = Bounds(tuple(agents), a.max_verts, a.vars)
    hit = find_countermodel(f, b)
    if hit is None:
        out.both("result", "NONE")
        return 0
    m, x = hit
    out.both("result", "FOUND", "FOUND")
    out.rec("model", dump_model(m))
    out.plain(dump_model(m).rstrip("\n"))
    out.both("face", m.face_str(x), f"false at {m.face_str(x)}")
    return 1


def cmd_defcons(a, out: _Out) -> int:
    budget = DefconsBudget(
        prover_steps=a.prover_steps if a.prover_steps is not None
        else _env_int("SE_PROVER_STEPS", DefconsBudget.prover_steps),
        vertex_bound=a.vertex_bound if a.vertex_bound is not None
        else _env_int("SE_VERTEX_BOUND", DefconsBudget.vertex_bound))
    gamma = [_formula(s) for s in a.gamma.split(";") if s.strip()]
    psi = _formula(a.psi)
    r = check_defcons(gamma, psi, budget)
    out.both("status", r.status)
    if r.status == "PROVEN":
        out.plain(format_trace(r.trace))
        for i, s in enumerate(r.trace):
            out.rec(f"step.{i}", s)
        return 0
    if r.status == "REFUTED":
        out.both("method", r.method, f"method: {r.method}")
        out.rec("model", dump_model(r.model))
        out.plain(dump_model(r.model).rstrip("\n"))
        out.both("face", r.model.face_str(r.face), f"witness face {r.model.face_str(r.face)}")
        return 1
    out.both("report", r.report)
    return 1


def cmd_check(a, out: _Out) -> int:
    try:
        text = Path(a.file).read_text()
    except OSError as e:
        raise UsageError(f"cannot read derivation {a.file}: {e.strerror}") from None
    try:
        d = parse_derivation(text)
    except ValueError as e:
        raise UsageError(str(e)) from None
    policy = "require-proven" if a.require_proven_provisos else "allow-assumed"
    r = check_derivation(d, policy)
    if out.machine:
        out.rec("verdict", r.verdict)
        if not r.accepted:
            out.rec("line", r.label)
            out.rec("step", r.step + 1)
            out.rec("reason", r.reason)
        out.rec("lines", r.top_lines)
        out.rec("steps", len(r.lines))
        for i, p in enumerate(r.provisos):
            g = ", ".join(sorted(to_str(x, sugar=True) for x in p.gamma))
            out.rec(f"proviso.{i}", f"{p.step + 1}|{p.rule}|{g}|{to_str(p.psi, sugar=True)}|{p.status}")
    else:
        out.plain(r.summary())
    return 0 if r.accepted else 1


def cmd_demo(a, out: _Out) -> int:
    if a.all == (a.name is not None):
        raise UsageError("give a demo name or --all")
    names = list(corpus.DEMOS) if a.all else [a.name]
    for n in names:
        if n not in corpus.DEMOS:
            raise UsageError(f"unknown demo {n!r}; known: {', '.join(corpus.DEMOS)}")
    ok = True
    for n in names:
        r = corpus.demo(n, a.max_size)
        ok &= r.passed
        out.plain(r.text())
        for i, (claim, exp, got, good) in enumerate(r.rows):
            out.rec(f"{n}.{i}", f"{claim}|{exp}|{got}|{'ok' if good else 'fail'}")
        out.rec(n, "PASS" if r.passed else "FAIL")
    return 0 if ok else 1


def cmd_corpus(a, out: _Out) -> int:
    if a.corpus_cmd == "list":
        for n in corpus.MODEL_NAMES:
            out.both("model", n)
        from .transcripts import NEGATIVE, TRANSCRIPTS
        for n in list(TRANSCRIPTS) + list(NEGATIVE):
            out.both("derivation", n, f"derivation {n}")
        return 0
    if a.corpus_cmd == "export":
        if a.name not in corpus.MODEL_NAMES:
            raise UsageError(f"unknown model {a.name!r}; known: {', '.join(corpus.MODEL_NAMES)}")
        val = None
        if a.valuation is not None:
            if a.name != "xmas":
                raise UsageError("--valuation applies to xmas only")
            val = [c == "1" for c in a.valuation]
        text = corpus.export(a.name, val)
    else:
        from .transcripts import transcript
        try:
            text = format_derivation(transcript(a.name))
        except KeyError as e:
            raise UsageError(str(e.args[0])) from None
    if a.output:
        try:
            Path(a.output).write_text(text)
        except OSError as e:
            raise UsageError(f"cannot write {a.output}: {e.strerror}") from None
        out.both("written", a.output, f"wrote {a.output}")
    else:
        out.plain(text.rstrip("\n"))
        out.rec("text", text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="impure-s5", description="Three-valued epistemic logic on impure simplicial models.")
    p.add_argument("--format", choices=["plain", "machine"], default="plain")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def model_args(sp):
        sp.add_argument("-m", "--model", required=True, help="model file or corpus name")
        sp.add_argument("--valuation", help="xmas valuation triple, e.g. 101")
        sp.add_argument("-f", "--formula", required=True)

    sp = sub.add_parser("eval", help="evaluate a formula at a face")
    model_args(sp)
    sp.add_argument("-X", "--face", required=True, help="v1,v2,... or @label")
    sp.set_defaults(fn=cmd_eval)

    sp = sub.add_parser("valid", help="validity in one model")
    model_args(sp)
    sp.set_defaults(fn=cmd_valid)

    sp = sub.add_parser("countermodel", help="bounded countermodel search")
    sp.add_argument("-f", "--formula", required=True)
    sp.add_argument("--agents", default="a,b,c")
    sp.add_argument("--max-verts", type=int, default=2)
    sp.add_argument("--vars", type=int, default=1)
    sp.set_defaults(fn=cmd_countermodel)

    sp = sub.add_parser("defcons", help="decide gamma |x psi within budgets")
    sp.add_argument("--gamma", required=True, help="formulas separated by ';'")
    sp.add_argument("--psi", required=True)
    sp.add_argument("--vertex-bound", type=int)
    sp.add_argument("--prover-steps", type=int)
    sp.set_defaults(fn=cmd_defcons)

    sp = sub.add_parser("check", help="check a derivation file")
    sp.add_argument("file")
    sp.add_argument("--require-proven-provisos", action="store_true")
    sp.set_defaults(fn=cmd_check)

    sp = sub.add_parser("demo", help="rerun a worked example")
    sp.add_argument("name", nargs="?")
    sp.add_argument("--all", action="store_true")
    sp.add_argument("--max-size", type=int, default=7)
    sp.set_defaults(fn=cmd_demo)

    sp = sub.add_parser("corpus", help="named models and derivations")
    csub = sp.add_subparsers(dest="corpus_cmd", required=True, parser_class=_Parser)
    csub.add_parser("list")
    ep = csub.add_parser("export", help="write a named model")
    ep.add_argument("name")
    ep.add_argument("--valuation")
    ep.add_argument("-o", "--output")
    dp = csub.add_parser("derivation", help="write a named derivation")
    dp.add_argument("name")
    dp.add_argument("-o", "--output")
    sp.set_defaults(fn=cmd_corpus)
    return p


def run(argv=None) -> tuple[int, str]:
    """Run one command; returns (exit status, output text)."""
    p = build_parser()
    try:
        a = p.parse_args(argv)
    except UsageError as e:
        return 2, f"error: {e}\n"
    except SystemExit as e:   # --help
        return int(e.code or 0), ""
    out = _Out(a.format == "machine")
    try:
        code = a.fn(a, out)
    except UsageError as e:
        return 2, f"error: {e}\n"
    except (ParseError, ModelError, KeyError, ValueError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        return 2, f"error: {msg}\n"
    return code, "\n".join(out.lines) + "\n" if out.lines else ""


def main(argv=None) -> int:
    code, text = run(argv)
    stream = sys.stderr if code == 2 else sys.stdout
    stream.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
