"""The operator C, the stable operator, stable models and the oscillating pair.

apply_C and stable_op evaluate merged bodies with pair evaluation directly and
serve as a reference; stable_models and wf_via_oscillation run on the ground
circuit through the selected backend.
"""
from __future__ import annotations

import itertools
from typing import Iterator, Optional

from . import core
from .semantics_core import (ThreeValuedStructure, TwoValuedStructure,
                             Uninterpreted, all_tuples, eval_pair, satisfies)
from .syntax import Def, Definition, FoidError, Formula, _fresh_tuple, all_names, merged_body
from .wf_engine import arities, circuit, context_of, to_structure, to_three

DEFAULT_CAP = 20


class SpaceTooLarge(FoidError):
    def __init__(self, size: int, cap: int, what: str = "atoms"):
        super().__init__(f"space has {size} {what}, above the cap of {cap}")
        self.size = size
        self.cap = cap


class SpaceMismatch(FoidError):
    pass


class StructureSpace:
    """All interpretations of defined(defn) expanding a context."""

    def __init__(self, defn: Definition, context: TwoValuedStructure):
        self.defn = defn
        self.context = context
        self.arity = arities(defn)
        self.atoms = [(p, t) for p in defn.defined()
                      for t in all_tuples(context.size, self.arity[p])]

    @property
    def natoms(self) -> int:
        return len(self.atoms)

    def __len__(self) -> int:
        return 2 ** self.natoms

    def structure(self, bits) -> TwoValuedStructure:
        rels = {p: set() for p in self.defn.defined()}
        for b, (p, t) in zip(bits, self.atoms):
            if b:
                rels[p].add(t)
        return self.context.with_relations(rels, self.arity)

    def __iter__(self) -> Iterator[TwoValuedStructure]:
        # atom 0 is the least significant position
        for bits in itertools.product((0, 1), repeat=self.natoms):
            yield self.structure(bits[::-1])

    def bottom(self) -> TwoValuedStructure:
        return self.structure([0] * self.natoms)

    def top(self) -> TwoValuedStructure:
        return self.structure([1] * self.natoms)


def _merged(defn: Definition) -> dict:
    used = all_names(Def(defn))
    out = {}
    for p, k in arities(defn).items():
        ys = _fresh_tuple(k, set(used))
        out[p] = (ys, merged_body(defn, p, ys))
    return out


def apply_C(defn: Definition, I: TwoValuedStructure, J: TwoValuedStructure,
            _bodies: Optional[dict] = None) -> TwoValuedStructure:
    """Defined relations of C(I, J): tuples whose merged body holds under (I, J)."""
    if not I.same_frame(J) or context_of(defn, I) != context_of(defn, J):
        raise SpaceMismatch("I and J do not expand the same context")
    bodies = _bodies or _merged(defn)
    rels = {}
    for p, (ys, body) in bodies.items():
        rels[p] = {t for t in all_tuples(I.size, len(ys))
                   if eval_pair(I, J, body, dict(zip(ys, t)))}
    return I.with_relations(rels)


def stable_op(defn: Definition, J: TwoValuedStructure) -> TwoValuedStructure:
    """ST(J): iterate C(., J) from the bottom of the space."""
    bodies = _merged(defn)
    I = J.with_relations({p: frozenset() for p in defn.defined()})
    while True:
        nxt = apply_C(defn, I, J, bodies)
        if nxt == I:
            return I
        I = nxt


def _order_key(bits) -> int:
    return sum(1 << i for i, b in enumerate(bits) if b)


def stable_bits(defn: Definition, context: TwoValuedStructure, cap: int = DEFAULT_CAP,
                exhaustive: bool = False) -> list:
    c = circuit(defn, context)
    if exhaustive:
        lo, up = bytes(c.natoms), b"\x01" * c.natoms
    else:
        # every stable model lies between the bounds of the wf model
        lo, up = core.wf_bounds(c)
    free = sum(1 for a in range(c.natoms) if up[a] and not lo[a])
    if free > cap:
        raise SpaceTooLarge(free, cap)
    return sorted(core.stable_search(c, lo, up), key=_order_key)


def stable_models(defn: Definition, context: TwoValuedStructure, cap: int = DEFAULT_CAP,
                  exhaustive: bool = False) -> list:
    """Every I in the space with ST(I) = I, in canonical space order."""
    c = circuit(defn, context)
    return [to_structure(c, defn, context, b)
            for b in stable_bits(defn, context, cap, exhaustive)]


def stable_check(defn: Definition, I: TwoValuedStructure) -> bool:
    """Is I restricted to sym(defn) a stable model of defn?"""
    for p in defn.defined():
        if p not in I.relations:
            raise Uninterpreted(p)
    c = circuit(defn, context_of(defn, I))
    J = c.from_relations(I.relations)
    return core.lfp(c, J) == J


def satisfies_st(I: TwoValuedStructure, phi: Formula, env=None) -> bool:
    return satisfies(I, phi, stable_check, env)


def wf_via_oscillation(defn: Definition, context: TwoValuedStructure) -> ThreeValuedStructure:
    """(lfp, gfp) of ST o ST as a three-valued structure."""
    c = circuit(defn, context)
    lo, up = core.oscillation(c)
    return to_three(c, defn, context, lo, up)


def oscillation_reference(defn: Definition, context: TwoValuedStructure) -> ThreeValuedStructure:
    """The same pair computed with stable_op; slow, for cross-checking."""
    space = StructureSpace(defn, context)
    lo = space.bottom()
    while True:
        nxt = stable_op(defn, stable_op(defn, lo))
        if nxt == lo:
            break
        lo = nxt
    up = space.top()
    while True:
        nxt = stable_op(defn, stable_op(defn, up))
        if nxt == up:
            break
        up = nxt
    return ThreeValuedStructure(lo, up)
