"""Deterministic single-line rendering of terms, formulas and sequents.

Binary connectives associate to the right; quantifiers are printed bare only at
the top of a formula (or rule body) and parenthesised everywhere else, so the
output always reparses to the same tree.
"""
from __future__ import annotations

from typing import Mapping, Optional

from .syntax import (And, Atom, Bot, Def, Definition, Eq, Exists, Forall,
                     Formula, Iff, Implies, Not, Obj, Or, Rule, Sequent, Top)

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_OPS = {Iff: "<=>", Implies: "=>", Or: "|", And: "&"}


def show_term(t) -> str:
    if isinstance(t, Obj):
        return t.name
    return f"{t.fn}({', '.join(show_term(a) for a in t.args)})"


def show(phi: Formula, names: Optional[Mapping[Definition, str]] = None) -> str:
    return _show(phi, 0, names or {})


def _show(phi, ctx: int, names) -> str:
    if isinstance(phi, Atom):
        if not phi.args:
            return phi.pred
        return f"{phi.pred}({', '.join(show_term(a) for a in phi.args)})"
    if isinstance(phi, Eq):
        s = f"{show_term(phi.lhs)} = {show_term(phi.rhs)}"
        return f"({s})" if ctx >= 5 else s
    if isinstance(phi, Top):
        return "true"
    if isinstance(phi, Bot):
        return "false"
    if isinstance(phi, Not):
        return "~" + _show(phi.body, 5, names)
    if isinstance(phi, (And, Or, Implies, Iff)):
        p = _PREC[type(phi)]
        s = f"{_show(phi.left, p + 1, names)} {_OPS[type(phi)]} {_show(phi.right, p, names)}"
        return f"({s})" if ctx > p else s
    if isinstance(phi, (Forall, Exists)):
        kw = "forall" if isinstance(phi, Forall) else "exists"
        vs = [phi.var]
        body = phi.body
        while type(body) is type(phi):
            vs.append(body.var)
            body = body.body
        s = f"{kw} {', '.join(vs)}. {_show(body, 0, names)}"
        return f"({s})" if ctx > 0 else s
    if isinstance(phi, Def):
        if phi.definition in names:
            return f"[{names[phi.definition]}]"
        return "{" + " ".join(show_rule(r, names) for r in phi.definition.rules) + "}"
    raise TypeError(f"not a formula: {phi!r}")


def show_rule(r: Rule, names=None) -> str:
    head = _show(r.head, 0, names or {})
    body = _show(r.body, 0, names or {})
    prefix = f"forall {', '.join(r.bound)}. " if r.bound else ""
    return f"{prefix}{head} <- {body}."


def show_definition(d: Definition, name: str) -> str:
    lines = [f"def {name} {{"]
    lines += [f"  {show_rule(r)}" for r in d.rules]
    lines.append("}")
    return "\n".join(lines)


def show_formulas(fs, names=None) -> str:
    return ", ".join(sorted(show(f, names) for f in fs))


def show_sequent(seq: Sequent, names=None) -> str:
    left = show_formulas(seq.left, names)
    right = show_formulas(seq.right, names)
    return f"{left} |- {right}".strip()
