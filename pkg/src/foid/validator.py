"""Finite-model validity of sequents under the wf and stable semantics.

Every structure over the sequent's vocabulary with domain {0..n-1}, n up to
max_n, is a candidate. Free object symbols are enumerated like constants.

Two things keep the search small. Symbols are assigned one at a time and each
formula is evaluated as soon as its symbols are fixed, so a false left formula
or a true right formula cuts the subtree. Definitions on the left act as
drivers: a counterexample must satisfy them, so their defined relations are
computed from the context (the two-valued wf model, or each stable model in
turn) instead of enumerated.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Optional

from .semantics_core import (TwoValuedStructure, Uninterpreted, all_tuples,
                             compile_satisfaction, satisfies)
from .stable_engine import DEFAULT_CAP, SpaceTooLarge, stable_check
from .syntax import Def, Definition, FoidError, Not, Sequent, Symbol, symbols_of
from . import core
from .ground import ground_frame
from .wf_engine import wf_check

DEFAULT_MAX_N = 3
SEMANTICS = ("wf", "stable")

NO_COUNTEREXAMPLE = "no_counterexample"
COUNTEREXAMPLE = "counterexample"
ABORTED = "aborted"


class VocabularyError(FoidError):
    pass


class _OverBudget(Exception):
    pass


@dataclass
class Verdict:
    semantics: str
    max_n: int                     # largest domain size searched completely
    result: str
    structure: Optional[TwoValuedStructure] = None
    space: float = 0.0             # log2 of the unpruned candidate count at the last size tried
    skipped: tuple = ()            # sizes whose search exceeded the cap
    visited: int = 0               # search nodes, summed over all sizes tried

    @property
    def ok(self) -> bool:
        return self.result == NO_COUNTEREXAMPLE

    def describe(self) -> str:
        if self.result == COUNTEREXAMPLE:
            return f"counterexample under {self.semantics} at size {self.structure.size}: {self.structure.describe()}"
        if self.result == ABORTED:
            return f"aborted under {self.semantics}: the search at size 1 exceeds the cap"
        s = f"no counterexample under {self.semantics} up to size {self.max_n}"
        if self.skipped:
            s += f" (sizes {', '.join(map(str, self.skipped))} above the cap)"
        return s

    def records(self) -> list:
        out = [("semantics", self.semantics), ("result", self.result), ("max_n", str(self.max_n)),
               ("space_log2", f"{self.space:.2f}"), ("visited", str(self.visited))]
        if self.skipped:
            out.append(("skipped", ",".join(map(str, self.skipped))))
        if self.structure is not None:
            out.append(("size", str(self.structure.size)))
            out.append(("structure", self.structure.describe()))
        return out


# ---------------------------------------------------------------- vocabulary

def sequent_vocabulary(seq: Sequent) -> frozenset:
    syms: set = set()
    for f in seq.left | seq.right:
        syms |= symbols_of(f)
    by_name: dict = {}
    for s in syms:
        other = by_name.setdefault(s.name, s)
        if other != s:
            raise VocabularyError(f"{s.name} is used both as {other.kind}/{other.arity} and {s.kind}/{s.arity}")
    return frozenset(syms)


def _bits(s: Symbol, n: int) -> float:
    if s.kind == "object":
        return math.log2(n)
    if s.kind == "function":
        return n ** s.arity * math.log2(n)
    return float(n ** s.arity)


def space_bits(vocab, n: int) -> float:
    """log2 of the number of structures over vocab with domain size n."""
    return sum(_bits(s, n) for s in vocab)


def _choices(s: Symbol, n: int) -> Iterator:
    if s.kind == "object":
        yield from range(n)
    elif s.kind == "function":
        tuples = all_tuples(n, s.arity)
        for vals in itertools.product(range(n), repeat=len(tuples)):
            yield dict(zip(tuples, vals))
    else:
        tuples = all_tuples(n, s.arity)
        for mask in range(1 << len(tuples)):
            yield frozenset(t for i, t in enumerate(tuples) if mask >> i & 1)


def _order(vocab) -> list:
    return sorted(vocab, key=lambda s: ({"object": 0, "function": 1, "predicate": 2}[s.kind], s.arity, s.name))


def _unchecked(size, objects, functions, relations, arity) -> TwoValuedStructure:
    # tables built here are total and in range by construction
    s = object.__new__(TwoValuedStructure)
    object.__setattr__(s, "size", size)
    object.__setattr__(s, "objects", objects)
    object.__setattr__(s, "functions", functions)
    object.__setattr__(s, "relations", relations)
    object.__setattr__(s, "arity", arity)
    return s


def enumerate_structures(vocab, n: int, cap: int = DEFAULT_CAP) -> Iterator[TwoValuedStructure]:
    """Every structure over vocab on {0..n-1}; the last symbol in _order varies fastest."""
    vocab = _order(vocab)
    bits = space_bits(vocab, n)
    if bits > cap + 1e-9:
        raise SpaceTooLarge(math.ceil(bits), cap, "bits of structure space")
    arity = {s.name: s.arity for s in vocab if s.kind != "object"}
    for combo in itertools.product(*[list(_choices(s, n)) for s in vocab]):
        objs, funcs, rels = {}, {}, {}
        for s, v in zip(vocab, combo):
            {"object": objs, "function": funcs, "predicate": rels}[s.kind][s.name] = v
        yield _unchecked(n, objs, funcs, rels, dict(arity))


# ------------------------------------------------------------------- drivers

def _asserted(f, positive: bool) -> Optional[Definition]:
    """The definition f amounts to when a counterexample must make f's truth value positive."""
    while isinstance(f, Not):
        f, positive = f.body, not positive
    return f.definition if positive and isinstance(f, Def) else None


def _drivers(seq: Sequent) -> list:
    """Definitions every counterexample satisfies, whose relations are computed, in dependency order.

    These are definitions on the left and negated definitions on the right.
    """
    forced = [_asserted(f, True) for f in seq.left] + [_asserted(f, False) for f in seq.right]
    cands: list = []
    claimed: set = set()
    for d in sorted({d for d in forced if d is not None}, key=str):
        if claimed.isdisjoint(d.defined()):
            cands.append(d)
            claimed |= set(d.defined())
    ordered: list = []
    while cands:
        provided = {p for d in cands for p in d.defined()}
        ready = [d for d in cands
                 if not any(s.kind == "predicate" and s.name in provided for s in d.pars())]
        if ready:
            ordered.append(ready[0])
            cands.remove(ready[0])
        else:
            # a cycle: the first candidate falls back to enumeration
            cands.pop(0)
    return ordered


class _DefOracle:
    """Memoized definition checks keyed by the values of a definition's parameters."""

    def __init__(self, semantics: str, cap: int):
        self.semantics = semantics
        self.cap = cap
        self._shape: dict = {}
        self._circuits: dict = {}
        self._models: dict = {}

    def _info(self, d: Definition):
        # keyed by identity: hashing a definition walks its whole tree; info keeps d alive
        info = self._shape.get(id(d))
        if info is None:
            pars = d.pars()
            info = (d, pars,
                    sorted(s.name for s in pars if s.kind == "object"),
                    sorted((s.name, s.arity) for s in pars if s.kind == "function"),
                    sorted(s.name for s in pars if s.kind == "predicate"),
                    sorted(d.defined()))
            self._shape[id(d)] = info
        return info

    def _frame(self, info, I: TwoValuedStructure, env: dict):
        """(circuit grounded over the objects and functions, input vector of the relations)."""
        d, pars, objs, funcs, rels, _ = info
        n = I.size
        fkey = (id(d), n,
                tuple(env[o] if o in env else I.objects[o] for o in objs),
                tuple(tuple(I.functions[f][t] for t in all_tuples(n, k)) for f, k in funcs))
        c = self._circuits.get(fkey)
        if c is None:
            frame = _unchecked(n, {o: env[o] if o in env else I.objects[o] for o in objs},
                               {f: I.functions[f] for f, _ in funcs}, {},
                               {f: k for f, k in funcs})
            c = self._circuits[fkey] = ground_frame(d, frame)
        return fkey, c, c.inputs(I.relations)

    def _bits(self, info, I: TwoValuedStructure, env: dict):
        fkey, c, inp = self._frame(info, I, env)
        key = (fkey, inp)
        out = self._models.get(key)
        if out is None:
            if self.semantics == "wf":
                lo, up = core.wf_bounds(c, inp)
                out = [lo] if lo == up else []
            else:
                lo, up = core.wf_bounds(c, inp)
                free = sum(1 for x, y in zip(lo, up) if y and not x)
                # every stable model lies between the wf bounds
                out = core.stable_search(c, lo, up, inp) if free <= self.cap else free
            self._models[key] = out
        return c, inp, out

    def models(self, d: Definition, I: TwoValuedStructure, env: Optional[dict] = None) -> list:
        """Defined relations of every intended model of d over I's parameters."""
        info = self._info(d)
        c, _, bits = self._bits(info, I, env or {})
        if isinstance(bits, int):
            raise SpaceTooLarge(bits, self.cap)
        return [tuple(c.to_relations(b, info[5])[p] for p in info[5]) for b in bits]

    def __call__(self, d: Definition, I: TwoValuedStructure, env: dict) -> bool:
        info = self._info(d)
        try:
            mine = tuple(I.relations[p] for p in info[5])
        except KeyError as e:
            raise Uninterpreted(e.args[0]) from None
        c, inp, bits = self._bits(info, I, env)
        J = bytes(c.from_relations(dict(zip(info[5], mine))))
        if not isinstance(bits, int):
            return J in bits
        # too many unknown atoms to list stable models: test this one directly
        return bytes(core.lfp(c, J, inp)) == J


class _Plan:
    def __init__(self, seq: Sequent, semantics: str, cap: int):
        self.semantics = semantics
        self.cap = cap
        self.check = _DefOracle(semantics, cap)
        self.vocab = sequent_vocabulary(seq)
        self.drivers = _drivers(seq)
        driven = {p for d in self.drivers for p in d.defined()}
        self.enum_syms = [s for s in self.vocab if not (s.kind == "predicate" and s.name in driven)]
        self.arity = {s.name: s.arity for s in self.vocab if s.kind != "object"}
        # enumerated symbols each name depends on, looking through drivers
        self.needs = {s.name: {s} for s in self.enum_syms}
        for d in self.drivers:
            req = set()
            for s in d.pars():
                req |= self.needs[s.name]
            for p in d.defined():
                self.needs[p] = req
        skip = set(self.drivers)
        self.formulas = []
        for side, fs in ((True, seq.left), (False, seq.right)):
            for f in sorted(fs, key=str):
                if _asserted(f, side) in skip:
                    continue
                req = set()
                for s in symbols_of(f):
                    req |= self.needs[s.name]
                self.formulas.append((side, frozenset(req), compile_satisfaction(f, self.check, with_env=True)))

    def bits(self, n: int) -> float:
        return space_bits(self.enum_syms, n)

    def layout(self, n: int):
        """Greedy order: repeatedly complete the formula whose missing symbols are cheapest."""
        order: list = []
        left = set(self.enum_syms)
        while left:
            pending = [r & left for _, r, _ in self.formulas if r & left]
            if not pending:
                order += _order(left)
                break
            best = min(pending, key=lambda r: (sum(_bits(s, n) for s in r), sorted(s.name for s in r)))
            for s in sorted(best, key=lambda s: (_bits(s, n), s.name)):
                order.append(s)
                left.discard(s)
        level = {s.name: i + 1 for i, s in enumerate(order)}
        drivers = []
        for k, d in enumerate(self.drivers):
            reqs = set()
            for s in d.pars():
                reqs |= self.needs[s.name]
            drivers.append((max((level[s.name] for s in reqs), default=0), k, d))
        # a dependent driver never sits below its provider, so sorting keeps dependency order
        drivers.sort(key=lambda t: (t[0], t[1]))
        checks: dict = {}
        for side, req, fn in self.formulas:
            lv = max((level[s.name] for s in req), default=0)
            checks.setdefault(lv, []).append((side, fn))
        return order, [(lv, d) for lv, _, d in drivers], checks

    def _complete(self, d: Definition, I: TwoValuedStructure) -> Iterator[dict]:
        names = sorted(d.defined())
        for rels in self.check.models(d, I):
            yield dict(zip(names, rels))

    def search(self, n: int, budget: Optional[int]) -> Optional[TwoValuedStructure]:
        """First counterexample of size n; raises _OverBudget after budget nodes (None: no limit)."""
        enum, drivers, checks = self.layout(n)
        # a symbol with more interpretations than the budget cannot be enumerated even once
        wide = [budget is not None and _bits(s, n) > math.log2(budget) for s in enum]
        choices = [None if w else list(_choices(s, n)) for s, w in zip(enum, wide)]
        count = [0]
        self.visited = count
        objs: dict = {}
        funcs: dict = {}
        rels: dict = {}
        m = len(enum)

        def tick():
            count[0] += 1
            if budget is not None and count[0] > budget:
                raise _OverBudget

        def current():
            ar = {k: v for k, v in self.arity.items() if k in funcs or k in rels}
            return _unchecked(n, dict(objs), dict(funcs), dict(rels), ar)

        def at_level(i: int, k: int):
            # drivers scheduled at level i run first, starting from the k-th
            if k < len(drivers) and drivers[k][0] == i:
                d = drivers[k][1]
                I = current()
                for relmap in self._complete(d, I):
                    tick()
                    saved = {p: rels.get(p) for p in relmap}
                    rels.update(relmap)
                    found = at_level(i, k + 1)
                    for p, v in saved.items():
                        if v is None:
                            rels.pop(p, None)
                        else:
                            rels[p] = v
                    if found is not None:
                        return found
                return None
            I = current()
            for left, fn in checks.get(i, ()):
                if fn(I, {}) != left:
                    return None
            if i == m:
                return I
            if wide[i]:
                raise _OverBudget
            s = enum[i]
            table = {"object": objs, "function": funcs, "predicate": rels}[s.kind]
            for v in choices[i]:
                tick()
                table[s.name] = v
                found = at_level(i + 1, k)
                if found is not None:
                    return found
            del table[s.name]
            return None

        return at_level(0, 0)


def falsifies(I: TwoValuedStructure, seq: Sequent, semantics: str) -> bool:
    """Does I make every left formula true and every right formula false?"""
    check = wf_check if semantics == "wf" else stable_check
    return (all(satisfies(I, f, check) for f in seq.left)
            and not any(satisfies(I, f, check) for f in seq.right))


def validate(seq: Sequent, semantics: str = "wf", max_n: int = DEFAULT_MAX_N,
             cap: int = DEFAULT_CAP, allow_wide_functions: bool = False) -> Verdict:
    """Search all structures of size 1..max_n for a counterexample to seq.

    The cap bounds effort. A size whose whole structure space (every symbol
    of the sequent, defined ones included) has at most 2^cap members is
    always searched to the end. Beyond that, pruning may still finish the
    search, but a size that visits more than 2^cap nodes, or reaches a symbol
    with more than 2^cap interpretations, is abandoned together with all
    larger sizes. If that already happens at size 1 the verdict is aborted. Stable completions of driver
    definitions are also limited to cap unknown atoms.
    """
    if semantics not in SEMANTICS:
        raise ValueError(f"unknown semantics {semantics!r}")
    if max_n < 1 or cap < 1:
        raise ValueError("max_n and cap must be positive")
    plan = _Plan(seq, semantics, cap)
    if not allow_wide_functions:
        wide = sorted(s.name for s in plan.vocab if s.kind == "function" and s.arity >= 2)
        if wide:
            raise VocabularyError(f"function {wide[0]} has arity >= 2; enable wide functions to enumerate it")
    done = 0
    visited = 0
    bits = 0.0
    for n in range(1, max_n + 1):
        bits = plan.bits(n)
        budget = None if space_bits(plan.vocab, n) <= cap + 1e-9 else 1 << cap
        try:
            found = plan.search(n, budget)
        except _OverBudget:
            visited += plan.visited[0]
            if n == 1:
                return Verdict(semantics, 0, ABORTED, space=bits, visited=visited)
            return Verdict(semantics, done, NO_COUNTEREXAMPLE, space=bits,
                           skipped=tuple(range(n, max_n + 1)), visited=visited)
        visited += plan.visited[0]
        if found is not None:
            if not falsifies(found, seq, semantics):
                raise FoidError("internal error: counterexample does not re-verify")
            return Verdict(semantics, done, COUNTEREXAMPLE, found, space=bits, visited=visited)
        done = n
    return Verdict(semantics, done, NO_COUNTEREXAMPLE, space=bits, visited=visited)
