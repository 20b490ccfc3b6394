"""Seeded random formulas, definitions and contexts shared by the tests."""
from __future__ import annotations

import random

from hypothesis import strategies as st

from foid.parser import parse
from foid.semantics_core import TwoValuedStructure, all_tuples
from foid.syntax import (And, App, Atom, Bot, Definition, Eq, Exists, Forall, Iff,
                         Implies, Not, Obj, Or, Rule, Top)

VARS = ("x", "y", "z", "u", "v", "w")
OBJECTS = ("a", "b")
PARAMS = {"C": 0, "O": 1, "R": 2}
DEFINED = (("D", 0), ("E0", 0), ("E", 1), ("D1", 1), ("G1", 1), ("G", 2))
FUNCTIONS = {"f": 1}

DECLS = parse(
    "object " + ", ".join(OBJECTS + VARS) + ".\n"
    "function f/1.\n"
    "predicate C/0, O/1, R/2, D/0, E/1, G/2, D1/1, E0/0, G1/1.\n")


def term(rng: random.Random, scope: tuple, depth: int = 1):
    names = scope + OBJECTS if scope else OBJECTS
    if depth > 0 and rng.random() < 0.2:
        return App("f", (term(rng, scope, depth - 1),))
    return Obj(rng.choice(names))


def formula(rng: random.Random, scope: tuple = (), depth: int = 3, preds=None):
    """A random formula whose free objects lie in scope plus the constants."""
    preds = PARAMS if preds is None else preds
    if depth <= 0 or rng.random() < 0.25:
        roll = rng.random()
        if roll < 0.05:
            return rng.choice((Top(), Bot()))
        if roll < 0.15:
            return Eq(term(rng, scope), term(rng, scope))
        p = rng.choice(sorted(preds))
        return Atom(p, tuple(term(rng, scope) for _ in range(preds[p])))
    k = rng.randrange(7)
    sub = lambda: formula(rng, scope, depth - 1, preds)  # noqa: E731
    if k == 0:
        return Not(sub())
    if k == 1:
        return And(sub(), sub())
    if k == 2:
        return Or(sub(), sub())
    if k == 3:
        return Implies(sub(), sub())
    if k == 4:
        return Iff(sub(), sub())
    x = rng.choice(VARS)
    body = formula(rng, tuple(dict.fromkeys(scope + (x,))), depth - 1, preds)
    return (Forall if k == 5 else Exists)(x, body)


def definition(rng: random.Random, max_preds: int = 3, max_rules: int = 4,
               iff: bool = True, params=None) -> Definition:
    """Up to max_preds defined symbols and max_rules rules over the parameter vocabulary."""
    defined = dict(rng.sample(DEFINED, rng.randint(1, max_preds)))
    vocab = dict(PARAMS if params is None else params)
    vocab.update(defined)
    rules = []
    heads = list(defined)
    for i in range(rng.randint(1, max_rules)):
        p = heads[i] if i < len(heads) else rng.choice(heads)
        bound = tuple(rng.sample(VARS, rng.randint(defined[p], min(len(VARS), defined[p] + 1))))
        args = tuple(Obj(rng.choice(bound)) if rng.random() < 0.85 else Obj(rng.choice(OBJECTS))
                     for _ in range(defined[p]))
        body = formula(rng, bound, rng.randint(0, 3), vocab)
        if not iff:
            body = _drop_iff(body)
        rules.append(Rule(bound, Atom(p, args), body))
    return Definition(tuple(rules))


def _drop_iff(phi):
    if isinstance(phi, Iff):
        a, b = _drop_iff(phi.left), _drop_iff(phi.right)
        return And(Implies(a, b), Implies(b, a))
    if isinstance(phi, Not):
        return Not(_drop_iff(phi.body))
    if isinstance(phi, (And, Or, Implies)):
        return type(phi)(_drop_iff(phi.left), _drop_iff(phi.right))
    if isinstance(phi, (Forall, Exists)):
        return type(phi)(phi.var, _drop_iff(phi.body))
    return phi


def context(rng: random.Random, defn: Definition, n: int) -> TwoValuedStructure:
    """A random structure of size n interpreting the parameters of defn."""
    objs, funcs, rels, ar = {}, {}, {}, {}
    for s in defn.pars():
        if s.kind == "object":
            objs[s.name] = rng.randrange(n)
        elif s.kind == "function":
            funcs[s.name] = {t: rng.randrange(n) for t in all_tuples(n, s.arity)}
            ar[s.name] = s.arity
        else:
            rels[s.name] = frozenset(t for t in all_tuples(n, s.arity) if rng.random() < 0.5)
            ar[s.name] = s.arity
    return TwoValuedStructure(n, objs, funcs, rels, ar)


def contexts(defn: Definition, n: int):
    """Every context of size n for defn (use only for small parameter sets)."""
    import itertools
    syms = sorted(defn.pars(), key=lambda s: (s.kind, s.name))
    choices = []
    for s in syms:
        if s.kind == "object":
            choices.append([(s, v) for v in range(n)])
        elif s.kind == "function":
            dom = all_tuples(n, s.arity)
            choices.append([(s, dict(zip(dom, vals))) for vals in itertools.product(range(n), repeat=len(dom))])
        else:
            dom = all_tuples(n, s.arity)
            choices.append([(s, frozenset(t for t, b in zip(dom, bits) if b))
                            for bits in itertools.product((0, 1), repeat=len(dom))])
    for combo in itertools.product(*choices):
        objs, funcs, rels, ar = {}, {}, {}, {}
        for s, val in combo:
            if s.kind == "object":
                objs[s.name] = val
            elif s.kind == "function":
                funcs[s.name], ar[s.name] = val, s.arity
            else:
                rels[s.name], ar[s.name] = val, s.arity
        yield TwoValuedStructure(n, objs, funcs, rels, ar)


seeds = st.integers(min_value=0, max_value=2**32 - 1)
formulas = seeds.map(lambda s: formula(random.Random(s), (), 4))
definitions = seeds.map(lambda s: definition(random.Random(s)))


def structure(rng: random.Random, n: int, extra=None) -> TwoValuedStructure:
    """A random structure of size n for the whole generator vocabulary."""
    preds = dict(PARAMS)
    preds.update(extra or {})
    objs = {o: rng.randrange(n) for o in OBJECTS}
    funcs = {f: {t: rng.randrange(n) for t in all_tuples(n, k)} for f, k in FUNCTIONS.items()}
    rels = {p: frozenset(t for t in all_tuples(n, k) if rng.random() < 0.5) for p, k in preds.items()}
    ar = {**FUNCTIONS, **preds}
    return TwoValuedStructure(n, objs, funcs, rels, ar)
