import itertools
import math
import random

import pytest
from hypothesis import given, settings

import gen
import oracles
from foid.parser import parse, parse_formula, parse_sequent
from foid.semantics_core import TwoValuedStructure, all_tuples, satisfies
from foid.syntax import Def, Not, Sequent
from foid.validator import (ABORTED, COUNTEREXAMPLE, NO_COUNTEREXAMPLE, VocabularyError,
                            enumerate_structures, falsifies, sequent_vocabulary, space_bits, validate)

SMALL = {"C": 0, "O": 1}


def structures(vocab, n):
    """Every structure over vocab on n elements, built directly from the symbol list."""
    syms = sorted(vocab, key=lambda s: (s.kind, s.name))
    options = []
    for s in syms:
        dom = all_tuples(n, s.arity)
        if s.kind == "object":
            options.append(range(n))
        elif s.kind == "function":
            options.append([dict(zip(dom, v)) for v in itertools.product(range(n), repeat=len(dom))])
        else:
            options.append([frozenset(t for t, b in zip(dom, m) if b)
                            for m in itertools.product((0, 1), repeat=len(dom))])
    for combo in itertools.product(*options):
        objs = {s.name: v for s, v in zip(syms, combo) if s.kind == "object"}
        funcs = {s.name: v for s, v in zip(syms, combo) if s.kind == "function"}
        rels = {s.name: v for s, v in zip(syms, combo) if s.kind == "predicate"}
        ar = {s.name: s.arity for s in syms if s.kind != "object"}
        yield TwoValuedStructure(n, objs, funcs, rels, ar)


def oracle_check(semantics):
    def check(defn, I):
        ctx = I.without(defn.defined())
        mine = frozenset((p, t) for p in defn.defined() for t in I.relations[p])
        if semantics == "wf":
            lo, up = oracles.alternating_wf(defn, ctx)
            return lo == up == mine
        return oracles.st(defn, ctx, mine) == mine
    return check


def brute_counterexample(seq, semantics, max_n):
    check = oracle_check(semantics)
    vocab = sequent_vocabulary(seq)
    for n in range(1, max_n + 1):
        for I in structures(vocab, n):
            if (all(satisfies(I, f, check) for f in seq.left)
                    and not any(satisfies(I, f, check) for f in seq.right)):
                return I
    return None


def random_sequent(rng):
    defn = gen.definition(rng, max_preds=2, max_rules=3, params=SMALL)
    preds = dict(SMALL)
    preds.update({r.head.pred: len(r.head.args) for r in defn.rules})
    left = [gen.formula(rng, (), 2, preds) for _ in range(rng.randint(0, 2))]
    right = [gen.formula(rng, (), 2, preds) for _ in range(rng.randint(0, 1))]
    d = Def(defn)
    roll = rng.random()
    if roll < 0.5:
        left.append(d)
    elif roll < 0.7:
        right.append(Not(d))
    elif roll < 0.85:
        right.append(d)
    return Sequent.of(left, right)


@pytest.mark.parametrize("semantics", ["wf", "stable"])
@settings(max_examples=60, deadline=None)
@given(seed=gen.seeds)
def test_validator_against_brute_force(semantics, seed):
    rng = random.Random(seed)
    seq = random_sequent(rng)
    vocab = sequent_vocabulary(seq)
    if space_bits(vocab, 2) > 11:
        return
    v = validate(seq, semantics, max_n=2)
    expected = brute_counterexample(seq, semantics, 2)
    if expected is None:
        assert v.result == NO_COUNTEREXAMPLE and v.max_n == 2 and not v.skipped
    else:
        assert v.result == COUNTEREXAMPLE
        assert v.structure.size == expected.size  # smallest size first
        assert falsifies(v.structure, seq, semantics)


def test_enumeration_counts():
    doc = parse("object a.\nfunction f/1.\npredicate P/1, Q/0.")
    seq = parse_sequent("P(f(a)) |- Q", doc)
    vocab = sequent_vocabulary(seq)
    for n in (1, 2, 3):
        got = list(enumerate_structures(vocab, n))
        assert len(got) == n * n ** n * 2 ** n * 2
        assert len(set(got)) == len(got)
        assert space_bits(vocab, n) == pytest.approx(math.log2(len(got)))


def test_known_verdicts():
    doc = parse("""
object a.
predicate P/0, Q/1, N/1.
def Liar { P <- ~P. }
def Nat { forall x. N(x) <- x = a. }
sequent S1: [Liar] |- .
sequent S2: [Nat] |- N(a).
sequent S3: [Nat] |- forall x. N(x).
""")
    assert validate(doc.sequents["S1"], "wf").ok
    assert validate(doc.sequents["S1"], "stable").ok
    assert validate(doc.sequents["S2"], "wf", max_n=3).ok
    v = validate(doc.sequents["S3"], "wf", max_n=3)
    assert v.result == COUNTEREXAMPLE and v.structure.size == 2
    assert "counterexample under wf at size 2" in v.describe()


def test_vocabulary_errors():
    doc = parse("object a.\npredicate P/0.\nfunction g/2.")
    with pytest.raises(VocabularyError):
        validate(parse_sequent("P |- g(a, a) = a", doc))
    assert validate(parse_sequent("P |- g(a, a) = a", doc), max_n=2, allow_wide_functions=True).result == COUNTEREXAMPLE
    unary = parse_formula("P(a)", parse("object a.\npredicate P/1."))
    mixed = Sequent.of([parse_formula("P", doc)], [unary])
    with pytest.raises(VocabularyError):
        validate(mixed)
    with pytest.raises(ValueError):
        validate(parse_sequent("P |- P", doc), "classical")


def test_cap_skips_and_aborts():
    doc = parse("predicate A/0, B/0, C/0, D/0, E/0, R/2.")
    seq = parse_sequent("A, B, C, D, E |- A & B & C & D & E", doc)
    v = validate(seq, max_n=1, cap=2)
    assert v.result == ABORTED and "aborted" in v.describe()
    wide = parse_sequent("R(x, y) | ~R(x, y) |- forall x. forall y. R(x, y) | ~R(x, y)",
                         parse("object x, y.\npredicate R/2."))
    v = validate(wide, max_n=3, cap=6)
    assert v.result == NO_COUNTEREXAMPLE and v.max_n >= 1
    assert v.skipped == tuple(range(v.max_n + 1, 4)) and v.skipped
    assert "above the cap" in v.describe()
