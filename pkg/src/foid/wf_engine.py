"""Well-founded models of definitions in finite contexts.

The default schedule alternates two refinements until neither applies: every
unknown atom whose body is true becomes true in one batch, then the greatest
unfounded set becomes false. Finite domains mean no limit ordinals; the
sequence simply stops.
"""
from __future__ import annotations

import functools
import random
from dataclasses import dataclass, field
from typing import Optional

from . import core
from .ground import BadContext, Circuit, ground
from .semantics_core import (ThreeValuedStructure, TruthValue,
                             TwoValuedStructure, Uninterpreted, eval_kleene,
                             satisfies)
from .syntax import Definition, Formula, merged_body

TRUE_STEP = "true"
UNFOUNDED_STEP = "unfounded"


@dataclass
class WfStep:
    direction: str
    atoms: frozenset          # refined (pred, tuple) atoms
    structure: ThreeValuedStructure


@dataclass
class WfTrace:
    initial: ThreeValuedStructure
    steps: list = field(default_factory=list)

    @property
    def final(self) -> ThreeValuedStructure:
        return self.steps[-1].structure if self.steps else self.initial

    def structures(self) -> list:
        return [self.initial] + [s.structure for s in self.steps]

    def log(self, preds=None) -> str:
        lines = [f"A0: {self.initial.describe(preds)}"]
        for i, s in enumerate(self.steps, 1):
            atoms = ", ".join(f"{p}{_args(t)}" for p, t in sorted(s.atoms))
            val = "t" if s.direction == TRUE_STEP else "f"
            lines.append(f"A{i}: [{atoms} : {val}] {s.structure.describe(preds)}")
        return "\n".join(lines)


def _args(t: tuple) -> str:
    return "(" + ",".join(map(str, t)) + ")" if t else ""


# ---------------------------------------------------------------- grounding

def context_of(defn: Definition, I: TwoValuedStructure) -> TwoValuedStructure:
    """I with the defined predicates removed."""
    return I.without(defn.defined())


@functools.lru_cache(maxsize=4096)
def _circuit(defn: Definition, context: TwoValuedStructure) -> Circuit:
    try:
        return ground(defn, context)
    except Uninterpreted as e:
        raise BadContext(f"context does not interpret {e.name}") from None


def circuit(defn: Definition, context: TwoValuedStructure) -> Circuit:
    return _circuit(defn, context)


def arities(defn: Definition) -> dict:
    return {p: len(defn.rules_for(p)[0].head.args) for p in defn.defined()}


def to_structure(c: Circuit, defn: Definition, context: TwoValuedStructure,
                 bits) -> TwoValuedStructure:
    return context.with_relations(c.to_relations(bits, defn.defined()), arities(defn))


def to_three(c: Circuit, defn: Definition, context: TwoValuedStructure,
             lo, up) -> ThreeValuedStructure:
    return ThreeValuedStructure(to_structure(c, defn, context, lo),
                                to_structure(c, defn, context, up))


# ---------------------------------------------------------------- schedules

def _gus_bits(c: Circuit, lo, up, candidates) -> list:
    """Greatest unfounded subset of candidates (all unknown) at (lo, up)."""
    U = list(candidates)
    while U:
        trial = bytearray(up)
        for a in U:
            trial[a] = 0
        poss = core.eval_bodies(c, trial, lo)
        keep = [a for a in U if not poss[a]]
        if len(keep) == len(U):
            break
        U = keep
    return U


def _unknown(lo, up) -> list:
    return [a for a in range(len(lo)) if up[a] and not lo[a]]


def _deterministic(c: Circuit, lo, up):
    while True:
        changed = False
        body = core.eval_bodies(c, lo, up)
        T = [a for a in _unknown(lo, up) if body[a]]
        if T:
            for a in T:
                lo[a] = 1
            changed = True
            yield TRUE_STEP, T
        U = _gus_bits(c, lo, up, _unknown(lo, up))
        if U:
            for a in U:
                up[a] = 0
            changed = True
            yield UNFOUNDED_STEP, U
        if not changed:
            return


def _randomized(c: Circuit, lo, up, rng: random.Random):
    """Random refinement order and granularity; each step is a legal refinement."""
    while True:
        unk = _unknown(lo, up)
        if not unk:
            return
        body = core.eval_bodies(c, lo, up)
        T = [a for a in unk if body[a]]
        moves = []
        if T:
            k = rng.randint(1, len(T))
            moves.append((TRUE_STEP, rng.sample(T, k)))
        seed = [a for a in unk if rng.random() < 0.6] or unk
        U = _gus_bits(c, lo, up, seed)
        if not U and seed is not unk:
            U = _gus_bits(c, lo, up, unk)
        if U:
            moves.append((UNFOUNDED_STEP, U))
        if not moves:
            return
        kind, atoms = rng.choice(moves)
        for a in atoms:
            if kind == TRUE_STEP:
                lo[a] = 1
            else:
                up[a] = 0
        yield kind, atoms


def well_founded_model(defn: Definition, context: TwoValuedStructure,
                       rng: Optional[random.Random] = None):
    """(well-founded model, trace); rng switches to a randomized schedule."""
    c = circuit(defn, context)
    n = c.natoms
    lo, up = bytearray(n), bytearray(b"\x01" * n)
    trace = WfTrace(to_three(c, defn, context, lo, up))
    steps = _deterministic(c, lo, up) if rng is None else _randomized(c, lo, up, rng)
    for kind, atoms in steps:
        trace.steps.append(WfStep(kind, frozenset(c.atoms[a] for a in atoms),
                                  to_three(c, defn, context, lo, up)))
    return trace.final, trace


def wf_bits(defn: Definition, context: TwoValuedStructure):
    """(lower, upper) atom bits of the wf model via the compiled schedule."""
    return core.wf_bounds(circuit(defn, context))


def wf_model(defn: Definition, context: TwoValuedStructure) -> ThreeValuedStructure:
    """The well-founded model without a trace."""
    c = circuit(defn, context)
    lo, up = core.wf_bounds(c)
    return to_three(c, defn, context, lo, up)


def greatest_unfounded_set(defn: Definition, A: ThreeValuedStructure) -> set:
    context = context_of(defn, A.lower)
    c = circuit(defn, context)
    lo = c.from_relations(A.lower.relations)
    up = c.from_relations(A.upper.relations)
    return {c.atoms[a] for a in _gus_bits(c, lo, up, _unknown(lo, up))}


def is_total(defn: Definition, context: TwoValuedStructure) -> bool:
    lo, up = wf_bits(defn, context)
    return lo == up


def satisfies_wf(I: TwoValuedStructure, phi: Formula, env=None) -> bool:
    return satisfies(I, phi, wf_check, env)


def wf_check(defn: Definition, I: TwoValuedStructure) -> bool:
    """Is I restricted to sym(defn) the (two-valued) wf model of defn?"""
    for p in defn.defined():
        if p not in I.relations:
            raise Uninterpreted(p)
    context = context_of(defn, I)
    c = circuit(defn, context)
    lo, up = core.wf_bounds(c)
    return lo == up and lo == bytes(c.from_relations(I.relations))


# ------------------------------------------------------------ trace checker

def _kleene_body(defn: Definition, A: ThreeValuedStructure, pred: str, args: tuple,
                 bodies: dict) -> TruthValue:
    ys, body = bodies[pred]
    return eval_kleene(A, body, dict(zip(ys, args)))


def _bodies(defn: Definition) -> dict:
    from .syntax import _fresh_tuple, all_names, Def
    used = all_names(Def(defn))
    out = {}
    for p, k in arities(defn).items():
        ys = _fresh_tuple(k, set(used))
        out[p] = (ys, merged_body(defn, p, ys))
    return out


def verify_trace(defn: Definition, trace: WfTrace) -> list:
    """Re-check every step as a refinement using merged bodies and Kleene evaluation.

    Returns a list of problems; empty means the trace is a terminal
    well-founded induction.
    """
    problems = []
    bodies = _bodies(defn)
    defined = defn.defined()
    A = trace.initial
    if A.unknown_atoms(defined) != {(p, t) for p in defined for t in A.table(p)}:
        problems.append("step 0 is not the all-unknown structure")
    for i, step in enumerate(trace.steps, 1):
        B = step.structure
        unk = A.unknown_atoms(defined)
        if not step.atoms or not step.atoms <= unk:
            problems.append(f"step {i} refines atoms that are not unknown")
        val = TruthValue.T if step.direction == TRUE_STEP else TruthValue.F
        expect = A.set_atoms({a: val for a in step.atoms})
        if expect != B:
            problems.append(f"step {i} changes more than its atom set")
        judge = A if val is TruthValue.T else B
        for p, t in sorted(step.atoms):
            if _kleene_body(defn, judge, p, t, bodies) is not val:
                problems.append(f"step {i}: body of {p}{_args(t)} is not {val}")
        A = B
    # terminal: no true refinement and no nonempty unfounded set
    for p, t in sorted(A.unknown_atoms(defined)):
        if _kleene_body(defn, A, p, t, bodies) is TruthValue.T:
            problems.append(f"limit is not terminal: body of {p}{_args(t)} is t")
    U = set(A.unknown_atoms(defined))
    while U:
        B = A.set_atoms({a: TruthValue.F for a in U})
        keep = {(p, t) for p, t in U if _kleene_body(defn, B, p, t, bodies) is TruthValue.F}
        if keep == U:
            break
        U = keep
    if U:
        problems.append("limit is not terminal: a nonempty unfounded set remains")
    return problems
