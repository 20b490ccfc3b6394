"""Finite structures, Kleene evaluation, pair evaluation and the truth/precision orders.

Domains are always {0, ..., n-1}. A three-valued structure is a pair of
two-valued structures (lower, upper) that agree on everything except
predicates, with lower contained in upper.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional

from .syntax import (And, Atom, Bot, Def, Definition, Eq, Exists, Forall,
                     FoidError, Formula, Iff, Implies, Not, Obj, Or, Symbol, Top,
                     is_pure_fo)


class Uninterpreted(FoidError):
    def __init__(self, name: str):
        super().__init__(f"symbol {name} is not interpreted")
        self.name = name


class DomainMismatch(FoidError):
    pass


class TruthValue(enum.IntEnum):
    F = 0
    U = 1
    T = 2

    def __str__(self):
        return "fut"[self.value]

    def neg(self) -> "TruthValue":
        return TruthValue(2 - self.value)


def tv(b: bool) -> TruthValue:
    return TruthValue.T if b else TruthValue.F


def leq_t_value(a: TruthValue, b: TruthValue) -> bool:
    return a <= b


def leq_p_value(a: TruthValue, b: TruthValue) -> bool:
    return a is TruthValue.U or a is b


@dataclass(frozen=True, eq=False)
class TwoValuedStructure:
    """Finite two-valued structure: object values, function tables, relations."""
    size: int
    objects: Mapping[str, int] = field(default_factory=dict)
    functions: Mapping[str, Mapping[tuple, int]] = field(default_factory=dict)
    relations: Mapping[str, frozenset] = field(default_factory=dict)
    arity: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        n = self.size
        if n < 1:
            raise ValueError("domain must be nonempty")
        for o, v in self.objects.items():
            if not 0 <= v < n:
                raise ValueError(f"value of {o} outside the domain")
        for f, table in self.functions.items():
            k = self.arity[f]
            if len(table) != n ** k:
                raise ValueError(f"function table of {f} is not total")
        for r, rel in self.relations.items():
            k = self.arity[r]
            for t in rel:
                if len(t) != k or any(not 0 <= a < n for a in t):
                    raise ValueError(f"bad tuple {t} in relation {r}")

    def key(self) -> tuple:
        k = self.__dict__.get("_key")
        if k is None:
            k = (self.size,
                 tuple(sorted(self.objects.items())),
                 tuple(sorted((f, tuple(sorted(t.items()))) for f, t in self.functions.items())),
                 tuple(sorted((r, self.arity[r], tuple(sorted(rel))) for r, rel in self.relations.items())))
            object.__setattr__(self, "_key", k)
        return k

    def __eq__(self, other):
        return isinstance(other, TwoValuedStructure) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def vocabulary(self) -> frozenset:
        out = {Symbol(o, "object") for o in self.objects}
        out |= {Symbol(f, "function", self.arity[f]) for f in self.functions}
        out |= {Symbol(r, "predicate", self.arity[r]) for r in self.relations}
        return frozenset(out)

    def interprets(self, s: Symbol) -> bool:
        if s.kind == "object":
            return s.name in self.objects
        if s.kind == "function":
            return s.name in self.functions and self.arity[s.name] == s.arity
        return s.name in self.relations and self.arity[s.name] == s.arity

    def restrict(self, symbols: Iterable[Symbol]) -> "TwoValuedStructure":
        names = {(s.kind, s.name) for s in symbols}
        objs = {o: v for o, v in self.objects.items() if ("object", o) in names}
        funcs = {f: t for f, t in self.functions.items() if ("function", f) in names}
        rels = {r: t for r, t in self.relations.items() if ("predicate", r) in names}
        ar = {k: v for k, v in self.arity.items() if k in funcs or k in rels}
        return TwoValuedStructure(self.size, objs, funcs, rels, ar)

    def with_objects(self, values: Mapping[str, int]) -> "TwoValuedStructure":
        if all(self.objects.get(k) == v for k, v in values.items()):
            return self
        objs = dict(self.objects)
        objs.update(values)
        return TwoValuedStructure(self.size, objs, self.functions, self.relations, self.arity)

    def with_relations(self, rels: Mapping[str, frozenset],
                       arity: Optional[Mapping[str, int]] = None) -> "TwoValuedStructure":
        r2 = dict(self.relations)
        r2.update({k: frozenset(v) for k, v in rels.items()})
        ar = dict(self.arity)
        if arity:
            ar.update(arity)
        return TwoValuedStructure(self.size, self.objects, self.functions, r2, ar)

    def without(self, names: Iterable[str]) -> "TwoValuedStructure":
        drop = set(names)
        rels = {r: t for r, t in self.relations.items() if r not in drop}
        return TwoValuedStructure(self.size, self.objects, self.functions, rels,
                                  {k: v for k, v in self.arity.items() if k not in drop})

    def same_frame(self, other: "TwoValuedStructure") -> bool:
        return (self.size == other.size and dict(self.objects) == dict(other.objects)
                and self.key()[2] == other.key()[2])

    def describe(self) -> str:
        parts = [f"dom={self.size}"]
        for o in sorted(self.objects):
            parts.append(f"{o}={self.objects[o]}")
        for f in sorted(self.functions):
            t = self.functions[f]
            parts.append(f"{f}: " + ", ".join(f"{_tup(a)}->{v}" for a, v in sorted(t.items())))
        for r in sorted(self.relations):
            if self.arity[r] == 0:
                parts.append(f"{r} = {'true' if () in self.relations[r] else 'false'}")
            else:
                parts.append(f"{r}: " + ", ".join(_tup(a) for a in sorted(self.relations[r])))
        return "; ".join(parts)


def _tup(a: tuple) -> str:
    return str(a[0]) if len(a) == 1 else "(" + ",".join(map(str, a)) + ")"


def all_tuples(n: int, k: int) -> list:
    return list(itertools.product(range(n), repeat=k))


@dataclass(frozen=True, eq=False)
class ThreeValuedStructure:
    lower: TwoValuedStructure
    upper: TwoValuedStructure

    def __post_init__(self):
        lo, up = self.lower, self.upper
        if not lo.same_frame(up) or set(lo.relations) != set(up.relations):
            raise DomainMismatch("lower and upper bounds differ outside predicates")
        for r, rel in lo.relations.items():
            if not rel <= up.relations[r]:
                raise ValueError(f"lower bound of {r} is not below its upper bound")

    @staticmethod
    def two_valued(I: TwoValuedStructure) -> "ThreeValuedStructure":
        return ThreeValuedStructure(I, I)

    def __eq__(self, other):
        return (isinstance(other, ThreeValuedStructure)
                and self.lower == other.lower and self.upper == other.upper)

    def __hash__(self):
        return hash((self.lower, self.upper))

    @property
    def size(self) -> int:
        return self.lower.size

    def value(self, pred: str, args: tuple) -> TruthValue:
        if args in self.lower.relations[pred]:
            return TruthValue.T
        if args in self.upper.relations[pred]:
            return TruthValue.U
        return TruthValue.F

    def is_two_valued(self) -> bool:
        return self.lower == self.upper

    def unknown_atoms(self, preds: Optional[Iterable[str]] = None) -> set:
        preds = self.lower.relations if preds is None else preds
        return {(p, t) for p in preds for t in self.upper.relations[p] - self.lower.relations[p]}

    def set_atoms(self, assignment: Mapping[tuple, TruthValue]) -> "ThreeValuedStructure":
        lo = {p: set(v) for p, v in self.lower.relations.items()}
        up = {p: set(v) for p, v in self.upper.relations.items()}
        for (p, t), val in assignment.items():
            lo[p].discard(t)
            up[p].discard(t)
            if val is TruthValue.T:
                lo[p].add(t)
                up[p].add(t)
            elif val is TruthValue.U:
                up[p].add(t)
        return ThreeValuedStructure(self.lower.with_relations(lo), self.upper.with_relations(up))

    def table(self, pred: str) -> dict:
        k = self.lower.arity[pred]
        return {t: self.value(pred, t) for t in all_tuples(self.size, k)}

    def describe(self, preds: Optional[Iterable[str]] = None) -> str:
        preds = sorted(self.lower.relations) if preds is None else list(preds)
        out = []
        for p in preds:
            if self.lower.arity[p] == 0:
                out.append(f"{p}: {self.value(p, ())}")
                continue
            cells = ", ".join(f"{_tup(t)}↦{v}" for t, v in self.table(p).items())
            out.append(f"{p}: {cells}")
        return "; ".join(out)


def _check_pair(A: ThreeValuedStructure, B: ThreeValuedStructure):
    if not A.lower.same_frame(B.lower) or set(A.lower.relations) != set(B.lower.relations):
        raise DomainMismatch("structures differ in domain, vocabulary or parameters")


def leq_t(A: ThreeValuedStructure, B: ThreeValuedStructure) -> bool:
    _check_pair(A, B)
    return all(A.lower.relations[p] <= B.lower.relations[p]
               and A.upper.relations[p] <= B.upper.relations[p] for p in A.lower.relations)


def leq_p(A: ThreeValuedStructure, B: ThreeValuedStructure) -> bool:
    _check_pair(A, B)
    return all(A.lower.relations[p] <= B.lower.relations[p]
               and B.upper.relations[p] <= A.upper.relations[p] for p in A.lower.relations)


# ------------------------------------------------------------- evaluation

def eval_term(I: TwoValuedStructure, t, env: Mapping[str, int]) -> int:
    if isinstance(t, Obj):
        if t.name in env:
            return env[t.name]
        try:
            return I.objects[t.name]
        except KeyError:
            raise Uninterpreted(t.name) from None
    try:
        table = I.functions[t.fn]
    except KeyError:
        raise Uninterpreted(t.fn) from None
    return table[tuple(eval_term(I, a, env) for a in t.args)]


def _rel(I: TwoValuedStructure, pred: str) -> frozenset:
    try:
        return I.relations[pred]
    except KeyError:
        raise Uninterpreted(pred) from None


def eval_pair(I: TwoValuedStructure, J: TwoValuedStructure, phi: Formula,
              env: Optional[Mapping[str, int]] = None) -> bool:
    """(I, J) |= phi: positive occurrences read in I, negative ones in J."""
    if I.size != J.size or not I.same_frame(J):
        raise DomainMismatch("pair evaluation needs a common domain and parameters")
    return _pair(I, J, phi, dict(env or {}))


def _pair(I, J, phi, env) -> bool:
    if isinstance(phi, Atom):
        return tuple(eval_term(I, a, env) for a in phi.args) in _rel(I, phi.pred)
    if isinstance(phi, Eq):
        return eval_term(I, phi.lhs, env) == eval_term(I, phi.rhs, env)
    if isinstance(phi, Top):
        return True
    if isinstance(phi, Bot):
        return False
    if isinstance(phi, Not):
        return not _pair(J, I, phi.body, env)
    if isinstance(phi, And):
        return _pair(I, J, phi.left, env) and _pair(I, J, phi.right, env)
    if isinstance(phi, Or):
        return _pair(I, J, phi.left, env) or _pair(I, J, phi.right, env)
    if isinstance(phi, Implies):
        return (not _pair(J, I, phi.left, env)) or _pair(I, J, phi.right, env)
    if isinstance(phi, Iff):
        return (((not _pair(J, I, phi.left, env)) or _pair(I, J, phi.right, env))
                and ((not _pair(J, I, phi.right, env)) or _pair(I, J, phi.left, env)))
    if isinstance(phi, (Forall, Exists)):
        old = env.get(phi.var, _MISSING)
        quant = all if isinstance(phi, Forall) else any
        try:
            def inst(a):
                env[phi.var] = a
                return _pair(I, J, phi.body, env)
            return quant(inst(a) for a in range(I.size))
        finally:
            if old is _MISSING:
                env.pop(phi.var, None)
            else:
                env[phi.var] = old
    if isinstance(phi, Def):
        raise FoidError("pair evaluation is defined for pure FO formulas only")
    raise TypeError(f"not a formula: {phi!r}")


_MISSING = object()


def eval_two(I: TwoValuedStructure, phi: Formula,
             env: Optional[Mapping[str, int]] = None) -> bool:
    return _pair(I, I, phi, dict(env or {}))


def eval_kleene(A: ThreeValuedStructure, phi: Formula,
                env: Optional[Mapping[str, int]] = None) -> TruthValue:
    return _kleene(A, phi, dict(env or {}))


def _kleene(A: ThreeValuedStructure, phi, env) -> TruthValue:
    if isinstance(phi, Atom):
        args = tuple(eval_term(A.lower, a, env) for a in phi.args)
        _rel(A.lower, phi.pred)
        return A.value(phi.pred, args)
    if isinstance(phi, Eq):
        return tv(eval_term(A.lower, phi.lhs, env) == eval_term(A.lower, phi.rhs, env))
    if isinstance(phi, Top):
        return TruthValue.T
    if isinstance(phi, Bot):
        return TruthValue.F
    if isinstance(phi, Not):
        return _kleene(A, phi.body, env).neg()
    if isinstance(phi, And):
        return min(_kleene(A, phi.left, env), _kleene(A, phi.right, env))
    if isinstance(phi, Or):
        return max(_kleene(A, phi.left, env), _kleene(A, phi.right, env))
    if isinstance(phi, Implies):
        return max(_kleene(A, phi.left, env).neg(), _kleene(A, phi.right, env))
    if isinstance(phi, Iff):
        a, b = _kleene(A, phi.left, env), _kleene(A, phi.right, env)
        return min(max(a.neg(), b), max(b.neg(), a))
    if isinstance(phi, (Forall, Exists)):
        old = env.get(phi.var, _MISSING)
        vals = []
        for a in range(A.size):
            env[phi.var] = a
            vals.append(_kleene(A, phi.body, env))
        if old is _MISSING:
            env.pop(phi.var, None)
        else:
            env[phi.var] = old
        return min(vals) if isinstance(phi, Forall) else max(vals)
    if isinstance(phi, Def):
        raise FoidError("Kleene evaluation is defined for pure FO formulas only")
    raise TypeError(f"not a formula: {phi!r}")


# ---------------------------------------------------- compiled evaluation

DefHook = Callable[[Definition], Callable[[TwoValuedStructure, dict], bool]]


def compile_formula(phi: Formula, def_hook: Optional[DefHook] = None):
    """Compile phi to a function (I, env) -> bool; Def nodes are handed to def_hook."""
    return _compile(phi, frozenset(), def_hook)


def _compile_term(t, bound):
    if isinstance(t, Obj):
        name = t.name
        if name in bound:
            return lambda I, env: env[name]

        def obj(I, env):
            v = env.get(name)
            if v is not None:
                return v
            try:
                return I.objects[name]
            except KeyError:
                raise Uninterpreted(name) from None
        return obj
    fn = t.fn
    args = [_compile_term(a, bound) for a in t.args]

    def app(I, env):
        try:
            table = I.functions[fn]
        except KeyError:
            raise Uninterpreted(fn) from None
        return table[tuple(a(I, env) for a in args)]
    return app


def _flatten(phi, kind) -> list:
    out, stack = [], [phi]
    while stack:
        f = stack.pop()
        if type(f) is kind:
            stack += [f.right, f.left]
        else:
            out.append(f)
    return out


def _compile(phi, bound, hook):
    if isinstance(phi, Atom):
        pred = phi.pred
        args = [_compile_term(a, bound) for a in phi.args]
        if not args:
            return lambda I, env: () in _rel(I, pred)
        if len(args) == 1:
            a0 = args[0]
            return lambda I, env: (a0(I, env),) in _rel(I, pred)
        return lambda I, env: tuple(a(I, env) for a in args) in _rel(I, pred)
    if isinstance(phi, Eq):
        l, r = _compile_term(phi.lhs, bound), _compile_term(phi.rhs, bound)
        return lambda I, env: l(I, env) == r(I, env)
    if isinstance(phi, Top):
        return lambda I, env: True
    if isinstance(phi, Bot):
        return lambda I, env: False
    if isinstance(phi, Not):
        b = _compile(phi.body, bound, hook)
        return lambda I, env: not b(I, env)
    if isinstance(phi, (And, Or)):
        # definition checks are expensive, so cheap operands get to short-circuit first
        parts = sorted(_flatten(phi, type(phi)), key=lambda f: not is_pure_fo(f))
        fs = [_compile(f, bound, hook) for f in parts]
        if len(fs) == 2:
            l, r = fs
            if isinstance(phi, And):
                return lambda I, env: l(I, env) and r(I, env)
            return lambda I, env: l(I, env) or r(I, env)
        if isinstance(phi, And):
            return lambda I, env: all(f(I, env) for f in fs)
        return lambda I, env: any(f(I, env) for f in fs)
    if isinstance(phi, (Implies, Iff)):
        l, r = _compile(phi.left, bound, hook), _compile(phi.right, bound, hook)
        if isinstance(phi, Iff):
            return lambda I, env: l(I, env) == r(I, env)
        if is_pure_fo(phi.right) and not is_pure_fo(phi.left):
            return lambda I, env: r(I, env) or not l(I, env)
        return lambda I, env: (not l(I, env)) or r(I, env)
    if isinstance(phi, (Forall, Exists)):
        var = phi.var
        b = _compile(phi.body, bound | {var}, hook)
        want = isinstance(phi, Exists)

        def quant(I, env):
            old = env.get(var, _MISSING)
            result = not want
            for a in range(I.size):
                env[var] = a
                if b(I, env) == want:
                    result = want
                    break
            if old is _MISSING:
                del env[var]
            else:
                env[var] = old
            return result
        return quant
    if isinstance(phi, Def):
        if hook is None:
            raise FoidError("formula contains a definition but no semantics was chosen")
        return hook(phi.definition)
    raise TypeError(f"not a formula: {phi!r}")


def compile_satisfaction(phi: Formula, def_check, with_env: bool = False):
    """phi compiled to (I, env) -> bool, with def_check(defn, I) deciding Def nodes.

    With with_env the checker is called as def_check(defn, I, env) instead and
    must read bound object values from env itself.
    """
    def hook(defn):
        if with_env:
            return lambda I2, env2: def_check(defn, I2, env2)
        free = sorted(defn.free())

        def run(I2, env2):
            vals = {o: env2[o] for o in free if o in env2}
            return def_check(defn, I2.with_objects(vals) if vals else I2)
        return run
    return compile_formula(phi, hook)


def satisfies(I: TwoValuedStructure, phi: Formula, def_check,
              env: Optional[Mapping[str, int]] = None) -> bool:
    """Tarskian recursion with def_check(defn, I_with_env_objects) deciding Def nodes."""
    return compile_satisfaction(phi, def_check)(I, dict(env or {}))
