import random

import pytest
from hypothesis import given, settings

import gen
import oracles
from foid.parser import parse
from foid.semantics_core import leq_p, ThreeValuedStructure
from foid.stable_engine import (SpaceTooLarge, StructureSpace, oscillation_reference, stable_check,
                                stable_models, stable_op, wf_via_oscillation)
from foid.wf_engine import wf_model


def sample(seed, n_max=2):
    rng = random.Random(seed)
    defn = gen.definition(rng)
    ctx = gen.context(rng, defn, rng.randint(1, n_max))
    return rng, defn, ctx


def atom_set(defn, I):
    return frozenset((p, t) for p in defn.defined() for t in I.relations[p])


@settings(max_examples=150, deadline=None)
@given(gen.seeds)
def test_stable_models_match_brute_force(seed):
    _, defn, ctx = sample(seed)
    if len(oracles.atoms(defn, ctx.size)) > 12:
        return
    expected = {oracles.expand(ctx, defn, J) for J in oracles.stable_brute(defn, ctx)}
    pruned = stable_models(defn, ctx)
    full = stable_models(defn, ctx, exhaustive=True)
    assert set(pruned) == set(full) == expected
    assert len(pruned) == len(set(pruned))
    assert pruned == full  # same canonical order either way


@settings(max_examples=150, deadline=None)
@given(gen.seeds)
def test_stable_models_lie_within_wf_bounds(seed):
    _, defn, ctx = sample(seed)
    A = wf_model(defn, ctx)
    for M in stable_models(defn, ctx):
        assert leq_p(A, ThreeValuedStructure.two_valued(M))
        assert stable_check(defn, M)
    if A.is_two_valued():
        assert stable_models(defn, ctx) == [A.lower]


@settings(max_examples=100, deadline=None)
@given(gen.seeds)
def test_stable_operator_against_oracle(seed):
    rng, defn, ctx = sample(seed)
    space = StructureSpace(defn, ctx)
    if space.natoms > 12:
        return
    bits = [rng.random() < 0.5 for _ in range(space.natoms)]
    J = space.structure(bits)
    assert atom_set(defn, stable_op(defn, J)) == oracles.st(defn, ctx, atom_set(defn, J))


@settings(max_examples=100, deadline=None)
@given(gen.seeds)
def test_oscillation_is_the_wf_model(seed):
    _, defn, ctx = sample(seed)
    A = wf_model(defn, ctx)
    assert wf_via_oscillation(defn, ctx) == A
    if StructureSpace(defn, ctx).natoms <= 12:
        assert oscillation_reference(defn, ctx) == A


def test_liar_and_choice():
    doc = parse("predicate P/0, Q/0.\ndef Liar { P <- ~P. }\ndef Pick { P <- ~Q. Q <- ~P. }\n")
    ctx = gen.context(random.Random(0), doc.definitions["Liar"], 1)
    assert stable_models(doc.definitions["Liar"], ctx) == []
    models = stable_models(doc.definitions["Pick"], ctx)
    assert [sorted(p for p in "PQ" if M.relations[p]) for M in models] == [["P"], ["Q"]]
    space = StructureSpace(doc.definitions["Pick"], ctx)
    assert len(space) == 4 and len(list(space)) == 4


def test_space_cap():
    doc = parse("predicate P/1, Q/1.\ndef Pick { forall x. P(x) <- ~Q(x). forall x. Q(x) <- ~P(x). }\n")
    defn = doc.definitions["Pick"]
    ctx = gen.context(random.Random(0), defn, 3)
    assert len(stable_models(defn, ctx)) == 8
    with pytest.raises(SpaceTooLarge):
        stable_models(defn, ctx, cap=5)
