"""Abstract syntax for FO(ID) and the syntactic operations the calculus needs.

Object symbols double as variables: a symbol is a variable exactly where a
quantifier or a rule's bound tuple binds it, and a constant elsewhere.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional, Union

import networkx as nx


class FoidError(Exception):
    """Base class for every error raised by the toolkit."""


class DefinitionError(FoidError):
    pass


class NotDefined(FoidError):
    def __init__(self, pred: str):
        super().__init__(f"{pred} is not a defined predicate")
        self.pred = pred


class BothPolarity(FoidError):
    def __init__(self, pred: str):
        super().__init__(f"{pred} occurs under <=> (polarity both)")
        self.pred = pred


class NotStratified(FoidError):
    pass


class NegatedDefinedPredicate(FoidError):
    def __init__(self, pred: str, definition: "Definition"):
        super().__init__(f"negated predicate {pred} is defined by its own definition")
        self.pred = pred
        self.definition = definition


# ---------------------------------------------------------------- symbols

@dataclass(frozen=True)
class Symbol:
    name: str
    kind: str  # "object" | "function" | "predicate"
    arity: int = 0

    def __post_init__(self):
        if not self.name:
            raise ValueError("empty symbol name")
        if self.kind not in ("object", "function", "predicate"):
            raise ValueError(f"bad symbol kind {self.kind!r}")
        if self.kind == "object" and self.arity != 0:
            raise ValueError("object symbols have arity 0")


# ------------------------------------------------------------------ terms

@dataclass(frozen=True)
class Obj:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class App:
    fn: str
    args: tuple

    def __str__(self):
        return f"{self.fn}({', '.join(map(str, self.args))})"


Term = Union[Obj, App]


# --------------------------------------------------------------- formulas

class Formula:
    __slots__ = ()

    def __str__(self):
        from .printer import show
        return show(self)


@dataclass(frozen=True)
class Atom(Formula):
    pred: str
    args: tuple = ()


@dataclass(frozen=True)
class Eq(Formula):
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Def(Formula):
    definition: "Definition"


TRUE = Top()
FALSE = Bot()
BINARY = (And, Or, Implies, Iff)
QUANT = (Forall, Exists)


@dataclass(frozen=True)
class Rule:
    """A definitional rule  forall bound: head <- body."""
    bound: tuple
    head: Atom
    body: Formula

    def __post_init__(self):
        if len(set(self.bound)) != len(self.bound):
            raise DefinitionError(f"repeated bound symbol in rule for {self.head.pred}")
        if not is_pure_fo(self.body):
            raise DefinitionError(f"rule body for {self.head.pred} contains a definition")

    def free(self) -> frozenset:
        objs = set()
        for a in self.head.args:
            objs |= term_objects(a)
        objs |= free_objects(self.body)
        return frozenset(objs - set(self.bound))


@dataclass(frozen=True)
class Definition:
    rules: tuple

    def __post_init__(self):
        frees = [r.free() for r in self.rules]
        for i, r in enumerate(self.rules):
            for j, fr in enumerate(frees):
                if i != j and set(r.bound) & fr:
                    bad = sorted(set(r.bound) & fr)[0]
                    raise DefinitionError(
                        f"bound symbol {bad} of rule {i} occurs freely in rule {j}")

    def defined(self) -> tuple:
        seen: list = []
        for r in self.rules:
            if r.head.pred not in seen:
                seen.append(r.head.pred)
        return tuple(seen)

    def rules_for(self, pred: str) -> list:
        return [r for r in self.rules if r.head.pred == pred]

    def free(self) -> frozenset:
        out: set = set()
        for r in self.rules:
            out |= r.free()
        return frozenset(out)

    def pars(self) -> frozenset:
        """Parameter symbols: every non-defined symbol with a free occurrence."""
        defined = set(self.defined())
        return frozenset(s for s in symbols_of(Def(self))
                         if not (s.kind == "predicate" and s.name in defined))

    def __str__(self):
        from .printer import show
        return show(Def(self))


@dataclass(frozen=True)
class Hypothesis:
    """Induction hypothesis F_Q[z] for a predicate Q."""
    pred: str
    vars: tuple
    formula: Formula

    def __post_init__(self):
        if len(set(self.vars)) != len(self.vars):
            raise ValueError(f"hypothesis variables for {self.pred} are not distinct")
        if not is_pure_fo(self.formula):
            raise ValueError(f"hypothesis for {self.pred} contains a definition")

    def instantiate(self, args: Iterable[Term]) -> Formula:
        return substitute_many(self.formula, dict(zip(self.vars, args)))


@dataclass(frozen=True)
class Sequent:
    left: frozenset = field(default_factory=frozenset)
    right: frozenset = field(default_factory=frozenset)

    @staticmethod
    def of(left: Iterable[Formula] = (), right: Iterable[Formula] = ()) -> "Sequent":
        return Sequent(frozenset(left), frozenset(right))

    def definitions(self) -> list:
        return [f.definition for f in self.left if isinstance(f, Def)]

    def __str__(self):
        from .printer import show_sequent
        return show_sequent(self)


# ------------------------------------------------------- traversal helpers

def children(phi: Formula) -> tuple:
    if isinstance(phi, Not):
        return (phi.body,)
    if isinstance(phi, BINARY):
        return (phi.left, phi.right)
    if isinstance(phi, QUANT):
        return (phi.body,)
    return ()


def term_objects(t: Term) -> set:
    if isinstance(t, Obj):
        return {t.name}
    out: set = set()
    for a in t.args:
        out |= term_objects(a)
    return out


def term_functions(t: Term, acc: dict) -> dict:
    if isinstance(t, App):
        acc[t.fn] = len(t.args)
        for a in t.args:
            term_functions(a, acc)
    return acc


def free_objects(phi: Formula) -> frozenset:
    if isinstance(phi, Atom):
        out: set = set()
        for a in phi.args:
            out |= term_objects(a)
        return frozenset(out)
    if isinstance(phi, Eq):
        return frozenset(term_objects(phi.lhs) | term_objects(phi.rhs))
    if isinstance(phi, (Top, Bot)):
        return frozenset()
    if isinstance(phi, Not):
        return free_objects(phi.body)
    if isinstance(phi, BINARY):
        return free_objects(phi.left) | free_objects(phi.right)
    if isinstance(phi, QUANT):
        return free_objects(phi.body) - {phi.var}
    if isinstance(phi, Def):
        return phi.definition.free()
    raise TypeError(f"not a formula: {phi!r}")


def free_in_all(formulas: Iterable[Formula]) -> frozenset:
    out: set = set()
    for f in formulas:
        out |= free_objects(f)
    return frozenset(out)


def bound_objects(phi: Formula) -> set:
    """Every object symbol bound somewhere in phi (quantifiers and rule tuples)."""
    out: set = set()
    stack = [phi]
    while stack:
        f = stack.pop()
        if isinstance(f, QUANT):
            out.add(f.var)
        if isinstance(f, Def):
            for r in f.definition.rules:
                out.update(r.bound)
                stack.append(r.body)
        stack.extend(children(f))
    return out


def all_names(phi: Formula) -> set:
    """Every identifier occurring anywhere in phi, bound or free, of any kind."""
    out: set = set()

    def terms(ts):
        for t in ts:
            if isinstance(t, Obj):
                out.add(t.name)
            else:
                out.add(t.fn)
                terms(t.args)

    stack = [phi]
    while stack:
        f = stack.pop()
        if isinstance(f, Atom):
            out.add(f.pred)
            terms(f.args)
        elif isinstance(f, Eq):
            terms((f.lhs, f.rhs))
        elif isinstance(f, QUANT):
            out.add(f.var)
        elif isinstance(f, Def):
            for r in f.definition.rules:
                out.update(r.bound)
                stack.append(r.head)
                stack.append(r.body)
        stack.extend(children(f))
    return out


def symbols_of(phi: Formula) -> frozenset:
    """Non-logical symbols with a free occurrence: predicates, functions, free objects."""
    preds: dict = {}
    funcs: dict = {}
    stack = [phi]
    while stack:
        f = stack.pop()
        if isinstance(f, Atom):
            preds[f.pred] = len(f.args)
            for a in f.args:
                term_functions(a, funcs)
        elif isinstance(f, Eq):
            term_functions(f.lhs, funcs)
            term_functions(f.rhs, funcs)
        elif isinstance(f, Def):
            for r in f.definition.rules:
                stack.append(r.head)
                stack.append(r.body)
        stack.extend(children(f))
    out = {Symbol(p, "predicate", k) for p, k in preds.items()}
    out |= {Symbol(g, "function", k) for g, k in funcs.items()}
    out |= {Symbol(o, "object") for o in free_objects(phi)}
    return frozenset(out)


def is_pure_fo(phi: Formula) -> bool:
    stack = [phi]
    while stack:
        f = stack.pop()
        if isinstance(f, Def):
            return False
        stack.extend(children(f))
    return True


def big_and(parts: list) -> Formula:
    """Right-nested conjunction; the empty conjunction is true."""
    if not parts:
        return TRUE
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = And(p, out)
    return out


def big_or(parts: list) -> Formula:
    if not parts:
        return FALSE
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Or(p, out)
    return out


def tuple_eq(lhs: Iterable[Term], rhs: Iterable[Term]) -> Optional[Formula]:
    eqs = [Eq(a, b) for a, b in zip(lhs, rhs)]
    return big_and(eqs) if eqs else None


# ----------------------------------------------------------- substitution

_SUFFIX = re.compile(r"^(.*?)(?:'(\d+))?$")


def fresh_name(base: str, used: set) -> str:
    """Smallest base'k (k >= 1) not in used; existing numeric suffixes are stripped."""
    stem = _SUFFIX.match(base).group(1) or base
    k = 1
    while f"{stem}'{k}" in used:
        k += 1
    return f"{stem}'{k}"


def subst_term(t: Term, m: Mapping[str, Term]) -> Term:
    if isinstance(t, Obj):
        return m.get(t.name, t)
    return App(t.fn, tuple(subst_term(a, m) for a in t.args))


def substitute(phi: Formula, t: Term, x: str) -> Formula:
    """phi[t/x], capture-avoiding."""
    return substitute_many(phi, {x: t})


def substitute_many(phi: Formula, m: Mapping[str, Term]) -> Formula:
    """Simultaneous capture-avoiding substitution of terms for object symbols."""
    m = {k: v for k, v in m.items() if not (isinstance(v, Obj) and v.name == k)}
    if not m:
        return phi
    used = all_names(phi) | set(m)
    for v in m.values():
        used |= term_objects(v)
    return _subst(phi, m, used)


def _subst(phi: Formula, m: dict, used: set) -> Formula:
    if isinstance(phi, Atom):
        return Atom(phi.pred, tuple(subst_term(a, m) for a in phi.args))
    if isinstance(phi, Eq):
        return Eq(subst_term(phi.lhs, m), subst_term(phi.rhs, m))
    if isinstance(phi, (Top, Bot)):
        return phi
    if isinstance(phi, Not):
        return Not(_subst(phi.body, m, used))
    if isinstance(phi, BINARY):
        return type(phi)(_subst(phi.left, m, used), _subst(phi.right, m, used))
    if isinstance(phi, QUANT):
        fv = free_objects(phi.body)
        m2 = {k: v for k, v in m.items() if k != phi.var and k in fv}
        if not m2:
            return phi
        var, body = phi.var, phi.body
        if any(var in term_objects(v) for v in m2.values()):
            new = fresh_name(var, used)
            used.add(new)
            body = _subst(body, {var: Obj(new)}, used)
            var = new
        return type(phi)(var, _subst(body, m2, used))
    if isinstance(phi, Def):
        return Def(Definition(tuple(_subst_rule(r, m, used) for r in phi.definition.rules)))
    raise TypeError(f"not a formula: {phi!r}")


def _subst_rule(r: Rule, m: dict, used: set) -> Rule:
    fv = r.free()
    m2 = {k: v for k, v in m.items() if k in fv}
    if not m2:
        return r
    clash = set()
    for v in m2.values():
        clash |= term_objects(v)
    bound, head, body = list(r.bound), r.head, r.body
    ren: dict = {}
    for i, b in enumerate(bound):
        if b in clash:
            new = fresh_name(b, used)
            used.add(new)
            ren[b] = Obj(new)
            bound[i] = new
    if ren:
        head = _subst(head, ren, used)
        body = _subst(body, ren, used)
    return Rule(tuple(bound), _subst(head, m2, used), _subst(body, m2, used))


def rename_rule(r: Rule, ren: Mapping[str, str]) -> Rule:
    m = {k: Obj(v) for k, v in ren.items()}
    used = all_names(r.body) | all_names(r.head) | set(ren.values())
    bound = tuple(ren.get(b, b) for b in r.bound)
    return Rule(bound, _subst(r.head, m, used), _subst(r.body, m, used))


# ---------------------------------------------------------------- polarity

class Polarity(enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    BOTH = "both"

    def flip(self) -> "Polarity":
        if self is Polarity.POSITIVE:
            return Polarity.NEGATIVE
        if self is Polarity.NEGATIVE:
            return Polarity.POSITIVE
        return self


def occurrences(phi: Formula, pol: Polarity = Polarity.POSITIVE,
                path: tuple = ()) -> Iterator[tuple]:
    """Yield (path, atom, polarity) for every atom occurrence; Def nodes are opaque."""
    if isinstance(phi, Atom):
        yield path, phi, pol
    elif isinstance(phi, Not):
        yield from occurrences(phi.body, pol.flip(), path + (0,))
    elif isinstance(phi, (And, Or)):
        yield from occurrences(phi.left, pol, path + (0,))
        yield from occurrences(phi.right, pol, path + (1,))
    elif isinstance(phi, Implies):
        yield from occurrences(phi.left, pol.flip(), path + (0,))
        yield from occurrences(phi.right, pol, path + (1,))
    elif isinstance(phi, Iff):
        yield from occurrences(phi.left, Polarity.BOTH, path + (0,))
        yield from occurrences(phi.right, Polarity.BOTH, path + (1,))
    elif isinstance(phi, QUANT):
        yield from occurrences(phi.body, pol, path + (0,))


def polarity(phi: Formula, pred: str) -> dict:
    """Map from occurrence path to polarity, for every occurrence of pred."""
    return {p: pol for p, a, pol in occurrences(phi) if a.pred == pred}


def polarities(phi: Formula, pred: str) -> set:
    return set(polarity(phi, pred).values())


def occurs_negatively(phi: Formula, pred: str) -> bool:
    return bool(polarities(phi, pred) & {Polarity.NEGATIVE, Polarity.BOTH})


def replace_positive(phi: Formula, hyps: Mapping[str, Hypothesis]) -> Formula:
    """phi[F_Pi/Pi^+]: replace positive occurrences of key predicates by hypotheses."""
    if not hyps:
        return phi
    for _, a, pol in occurrences(phi):
        if a.pred in hyps and pol is Polarity.BOTH:
            raise BothPolarity(a.pred)
    params: set = set()
    used = all_names(phi)
    for h in hyps.values():
        params |= free_objects(h.formula) - set(h.vars)
        used |= all_names(h.formula) | set(h.vars)
    return _repl(phi, hyps, Polarity.POSITIVE, params, used)


def _has_target(phi: Formula, hyps, pol: Polarity) -> bool:
    return any(a.pred in hyps and p is Polarity.POSITIVE for _, a, p in occurrences(phi, pol))


def _repl(phi, hyps, pol, params, used):
    if isinstance(phi, Atom):
        if pol is Polarity.POSITIVE and phi.pred in hyps:
            return hyps[phi.pred].instantiate(phi.args)
        return phi
    if isinstance(phi, (Eq, Top, Bot)):
        return phi
    if isinstance(phi, Not):
        return Not(_repl(phi.body, hyps, pol.flip(), params, used))
    if isinstance(phi, (And, Or)):
        return type(phi)(_repl(phi.left, hyps, pol, params, used),
                         _repl(phi.right, hyps, pol, params, used))
    if isinstance(phi, Implies):
        return Implies(_repl(phi.left, hyps, pol.flip(), params, used),
                       _repl(phi.right, hyps, pol, params, used))
    if isinstance(phi, Iff):
        return phi
    if isinstance(phi, QUANT):
        var, body = phi.var, phi.body
        if var in params and _has_target(body, hyps, pol):
            new = fresh_name(var, used)
            used.add(new)
            body = _subst(body, {var: Obj(new)}, used)
            var = new
        return type(phi)(var, _repl(body, hyps, pol, params, used))
    raise TypeError(f"replace_positive expects a pure FO formula, got {phi!r}")


# ------------------------------------------------------------ definitions

def merged_body(defn: Definition, pred: str, ys: tuple) -> Formula:
    """Disjunction over the rules for pred of  exists x: ys = t and body."""
    rules = defn.rules_for(pred)
    if not rules:
        raise NotDefined(pred)
    ys = tuple(ys)
    if len(set(ys)) != len(ys) or len(ys) != len(rules[0].head.args):
        raise ValueError(f"bad merged-body tuple {ys} for {pred}")
    for r in rules:
        if set(ys) & r.free():
            raise ValueError(f"merged-body tuple {ys} is not fresh for {pred}")
    used = all_names(Def(defn)) | set(ys)
    parts = []
    for r in rules:
        clash = set(r.bound) & set(ys)
        if clash:
            ren = {}
            for b in r.bound:
                if b in clash:
                    ren[b] = fresh_name(b, used)
                    used.add(ren[b])
            r = rename_rule(r, ren)
        eq = tuple_eq([Obj(y) for y in ys], r.head.args)
        part = And(eq, r.body) if eq is not None else r.body
        for x in reversed(r.bound):
            part = Exists(x, part)
        parts.append(part)
    return big_or(parts)


def _fresh_tuple(arity: int, used: set) -> tuple:
    names = ["y"] if arity == 1 else [f"y{i + 1}" for i in range(arity)]
    out = []
    for n in names:
        if n in used:
            n = fresh_name(n, used)
        used.add(n)
        out.append(n)
    return tuple(out)


def normalize(defn: Definition) -> Definition:
    used = all_names(Def(defn))
    rules = []
    for p in defn.defined():
        arity = len(defn.rules_for(p)[0].head.args)
        ys = _fresh_tuple(arity, set(used))
        rules.append(Rule(ys, Atom(p, tuple(Obj(y) for y in ys)), merged_body(defn, p, ys)))
    return Definition(tuple(rules))


def dependency_edges(defn: Definition) -> dict:
    """(P, Q) -> True when defined Q occurs negatively (or both) in a P-rule body."""
    defined = set(defn.defined())
    edges: dict = {}
    for r in defn.rules:
        for _, a, pol in occurrences(r.body):
            if a.pred in defined:
                key = (r.head.pred, a.pred)
                edges[key] = edges.get(key, False) or pol is not Polarity.POSITIVE
    return edges


def stratify(defn: Definition) -> Optional[dict]:
    """Least level map with l(Q) <= l(P), strict for negative occurrences, or None."""
    g = nx.DiGraph()
    g.add_nodes_from(defn.defined())
    edges = dependency_edges(defn)
    for (p, q), neg in edges.items():
        g.add_edge(p, q, neg=neg)
    cond = nx.condensation(g)
    member = cond.graph["mapping"]
    for (p, q), neg in edges.items():
        if neg and member[p] == member[q]:
            return None
    level: dict = {}
    for c in reversed(list(nx.topological_sort(cond))):
        lv = 0
        for p in cond.nodes[c]["members"]:
            for q in g.successors(p):
                if member[q] != c:
                    lv = max(lv, level[member[q]] + (1 if edges[(p, q)] else 0))
        level[c] = lv
    return {p: level[member[p]] for p in defn.defined()}


def decompose_stratified(defn: Definition) -> tuple:
    levels = stratify(defn)
    if levels is None:
        raise NotStratified("definition admits no stratification")
    parts = []
    for lv in sorted(set(levels.values())):
        rules = tuple(r for r in defn.rules if levels[r.head.pred] == lv)
        parts.append(Definition(rules))
    return tuple(parts)


def dependencies(defn: Definition) -> dict:
    """Reflexive-transitive closure of direct dependency, as P -> set of Q."""
    g = nx.DiGraph()
    g.add_nodes_from(defn.defined())
    g.add_edges_from(dependency_edges(defn))
    return {p: frozenset(nx.descendants(g, p) | {p}) for p in defn.defined()}


def mutual_dependents(defn: Definition, pred: str) -> frozenset:
    deps = dependencies(defn)
    if pred not in deps:
        raise NotDefined(pred)
    return frozenset(q for q in deps[pred] if pred in deps[q])


# ------------------------------------------------------ canonical sequents

def is_literal(phi: Formula) -> bool:
    if isinstance(phi, Not):
        phi = phi.body
    return isinstance(phi, (Atom, Eq, Top, Bot))


def is_literal_combination(phi: Formula) -> bool:
    if isinstance(phi, (And, Or)):
        return is_literal_combination(phi.left) and is_literal_combination(phi.right)
    return is_literal(phi)


@dataclass
class CanonicalReport:
    ok: bool
    problems: list
    order: tuple  # definitions in an admissible order (empty when none exists)

    def __bool__(self):
        return self.ok


def _sorted_formulas(fs: Iterable[Formula]) -> list:
    from .printer import show
    return sorted(fs, key=show)


def definition_order(defs: list) -> Optional[tuple]:
    """Order with no defined predicate of a definition occurring in an earlier one."""
    from graphlib import CycleError, TopologicalSorter
    ts: TopologicalSorter = TopologicalSorter()
    pars = [{s.name for s in d.pars() if s.kind == "predicate"} for d in defs]
    for i, d in enumerate(defs):
        ts.add(i)
        for j in range(len(defs)):
            if i != j and set(d.defined()) & pars[j]:
                ts.add(j, i)
    try:
        return tuple(defs[i] for i in ts.static_order())
    except CycleError:
        return None


def is_canonical(seq: Sequent) -> CanonicalReport:
    problems = []
    defs = []
    for f in _sorted_formulas(seq.left):
        if isinstance(f, Def):
            defs.append(f.definition)
        elif not is_pure_fo(f):
            problems.append(f"left formula {f} is not pure FO")
    for f in _sorted_formulas(seq.right):
        if not is_pure_fo(f):
            problems.append(f"right formula {f} is not pure FO")
    for d in defs:
        for i, r in enumerate(d.rules):
            if not is_literal_combination(r.body):
                problems.append(f"rule {i} of {d} has a body that is not built from literals by & and |")
    for i in range(len(defs)):
        for j in range(i + 1, len(defs)):
            shared = set(defs[i].defined()) & set(defs[j].defined())
            if shared:
                problems.append(f"predicate {sorted(shared)[0]} is defined by two definitions")
    order = definition_order(defs)
    if order is None:
        problems.append("definitions admit no order without forward references")
        order = ()
    return CanonicalReport(not problems, problems, order if not problems else ())


def _rewrite_negatives(phi: Formula, names: dict) -> Formula:
    if isinstance(phi, Not) and isinstance(phi.body, Atom) and phi.body.pred in names:
        return Atom(names[phi.body.pred], phi.body.args)
    if isinstance(phi, (And, Or)):
        return type(phi)(_rewrite_negatives(phi.left, names), _rewrite_negatives(phi.right, names))
    return phi


def positive_rewriting(seq: Sequent) -> Sequent:
    """Replace negative body literals by fresh complement predicates plus equivalences."""
    rep = is_canonical(seq)
    if not rep.ok:
        raise FoidError("positive rewriting needs a canonical sequent: " + "; ".join(rep.problems))
    used: set = set()
    for f in seq.left | seq.right:
        used |= all_names(f)
    arity: dict = {}
    for d in rep.order:
        for r in d.rules:
            for _, a, pol in occurrences(r.body):
                if pol is Polarity.NEGATIVE:
                    if a.pred in d.defined():
                        raise NegatedDefinedPredicate(a.pred, d)
                    arity[a.pred] = len(a.args)
    names: dict = {}
    for q in sorted(arity):
        n = f"{q}_bar"
        if n in used:
            n = fresh_name(n, used)
        used.add(n)
        names[q] = n
    omega = []
    for q in sorted(arity):
        ys = _fresh_tuple(arity[q], set(used))
        args = tuple(Obj(y) for y in ys)
        f: Formula = Iff(Atom(names[q], args), Not(Atom(q, args)))
        for y in reversed(ys):
            f = Forall(y, f)
        omega.append(f)
    new_defs = []
    for d in rep.order:
        rules = tuple(Rule(r.bound, r.head, _rewrite_negatives(r.body, names)) for r in d.rules)
        new_defs.append(Def(Definition(rules)))
    left = [f for f in seq.left if not isinstance(f, Def)] + omega + new_defs
    return Sequent.of(left, seq.right)
