"""Grounding a definition in a finite context into a propositional circuit.

Every defined domain atom gets a gate computing its merged body; parameter
symbols are folded to constants, or, with ground_frame, left as input gates
read from a parameter vector so one circuit serves every relation context. Gate values are always computed as a pair
(value under (I, J), value under (J, I)) so that negation can swap the
arguments, which gives pair evaluation, Kleene evaluation and the operator C
from one pass.
"""
from __future__ import annotations

import itertools
from array import array
from dataclasses import dataclass

from .semantics_core import (TwoValuedStructure, Uninterpreted, all_tuples,
                             eval_term)
from .syntax import (And, Atom, Bot, Def, Definition, Eq, Exists, FoidError,
                     Forall, Iff, Implies, Not, Or, Top)

OP_FALSE, OP_TRUE, OP_ATOM, OP_NOT, OP_AND, OP_OR, OP_PARAM = range(7)


class BadContext(FoidError):
    pass


@dataclass
class Circuit:
    atoms: list            # index -> (pred, tuple)
    index: dict            # (pred, tuple) -> index
    op: array
    arg: array
    ks: array
    ke: array
    kids: array
    root: array            # atom index -> gate computing its body
    params: tuple = ()     # input index -> (pred, tuple) of a parameter atom

    @property
    def natoms(self) -> int:
        return len(self.atoms)

    @property
    def ngates(self) -> int:
        return len(self.op)

    def to_relations(self, bits, preds) -> dict:
        rels = {p: set() for p in preds}
        for i, (p, t) in enumerate(self.atoms):
            if bits[i]:
                rels[p].add(t)
        return {p: frozenset(v) for p, v in rels.items()}

    def from_relations(self, rels) -> bytearray:
        out = bytearray(self.natoms)
        for i, (p, t) in enumerate(self.atoms):
            if t in rels[p]:
                out[i] = 1
        return out

    def inputs(self, rels) -> bytes:
        """Parameter vector for a circuit built by ground_frame."""
        out = bytearray(len(self.params))
        for i, (p, t) in enumerate(self.params):
            try:
                if t in rels[p]:
                    out[i] = 1
            except KeyError:
                raise Uninterpreted(p) from None
        return bytes(out)


class _Builder:
    def __init__(self):
        self.op = array("i", [OP_FALSE, OP_TRUE])
        self.arg = array("i", [0, 0])
        self.ks = array("i", [0, 0])
        self.ke = array("i", [0, 0])
        self.kids = array("i")
        self.memo: dict = {}

    def gate(self, op, arg=0, kids=()):
        key = (op, arg, kids)
        g = self.memo.get(key)
        if g is not None:
            return g
        g = len(self.op)
        self.op.append(op)
        self.arg.append(arg)
        self.ks.append(len(self.kids))
        self.kids.extend(kids)
        self.ke.append(len(self.kids))
        self.memo[key] = g
        return g

    def neg(self, g):
        if g is True or g is False:
            return not g
        if self.op[g] == OP_NOT:
            return self.arg[g]
        return self.gate(OP_NOT, g)

    def junction(self, op, parts):
        unit, zero = (True, False) if op == OP_AND else (False, True)
        kids = []
        for p in parts:
            if p is zero:
                return zero
            if p is unit:
                continue
            if p not in kids:
                kids.append(p)
        if not kids:
            return unit
        if len(kids) == 1:
            return kids[0]
        return self.gate(op, 0, tuple(kids))


def ground_frame(defn: Definition, frame: TwoValuedStructure) -> Circuit:
    """Ground defn over frame's objects and functions; parameter relations become inputs."""
    return ground(defn, frame, symbolic=True)


def ground(defn: Definition, context: TwoValuedStructure, symbolic: bool = False) -> Circuit:
    """Ground the merged bodies of defn over the domain of context."""
    defined = defn.defined()
    arity = {p: len(defn.rules_for(p)[0].head.args) for p in defined}
    for p in defined:
        if p in context.relations:
            raise BadContext(f"context interprets the defined predicate {p}")
    n = context.size
    atoms = [(p, t) for p in defined for t in all_tuples(n, arity[p])]
    index = {a: i for i, a in enumerate(atoms)}
    b = _Builder()
    disjuncts: list = [[] for _ in atoms]
    params: dict = {}

    def g(phi, env):
        if isinstance(phi, Atom):
            args = tuple(eval_term(context, a, env) for a in phi.args)
            if phi.pred in arity:
                return b.gate(OP_ATOM, index[(phi.pred, args)])
            if symbolic:
                return b.gate(OP_PARAM, params.setdefault((phi.pred, args), len(params)))
            try:
                return args in context.relations[phi.pred]
            except KeyError:
                raise Uninterpreted(phi.pred) from None
        if isinstance(phi, Eq):
            return eval_term(context, phi.lhs, env) == eval_term(context, phi.rhs, env)
        if isinstance(phi, Top):
            return True
        if isinstance(phi, Bot):
            return False
        if isinstance(phi, Not):
            return b.neg(g(phi.body, env))
        if isinstance(phi, And):
            return b.junction(OP_AND, [g(phi.left, env), g(phi.right, env)])
        if isinstance(phi, Or):
            return b.junction(OP_OR, [g(phi.left, env), g(phi.right, env)])
        if isinstance(phi, Implies):
            return b.junction(OP_OR, [b.neg(g(phi.left, env)), g(phi.right, env)])
        if isinstance(phi, Iff):
            l, r = g(phi.left, env), g(phi.right, env)
            return b.junction(OP_AND, [b.junction(OP_OR, [b.neg(l), r]),
                                       b.junction(OP_OR, [b.neg(r), l])])
        if isinstance(phi, (Forall, Exists)):
            parts = []
            for a in range(n):
                env2 = dict(env)
                env2[phi.var] = a
                parts.append(g(phi.body, env2))
            return b.junction(OP_AND if isinstance(phi, Forall) else OP_OR, parts)
        if isinstance(phi, Def):
            raise FoidError("rule bodies must be pure FO")
        raise TypeError(f"not a formula: {phi!r}")

    for r in defn.rules:
        for vals in itertools.product(range(n), repeat=len(r.bound)):
            env = dict(zip(r.bound, vals))
            head = tuple(eval_term(context, a, env) for a in r.head.args)
            disjuncts[index[(r.head.pred, head)]].append(g(r.body, env))

    root = array("i")
    for parts in disjuncts:
        v = b.junction(OP_OR, parts)
        root.append(1 if v is True else 0 if v is False else v)
    return Circuit(atoms, index, b.op, b.arg, b.ks, b.ke, b.kids, root, tuple(params))
