import random

import pytest
from hypothesis import given, settings

import gen
from foid.parser import parse, parse_formula
from foid.printer import show
from foid.semantics_core import eval_term, eval_two
from foid.syntax import (Atom, BothPolarity, Def, Definition, DefinitionError, Hypothesis,
                         NotStratified, Obj, Polarity, Rule, Sequent, decompose_stratified,
                         free_objects, is_canonical, merged_body, mutual_dependents, normalize,
                         polarities, positive_rewriting, replace_positive, stratify, substitute)


def F(text, doc=gen.DECLS):
    return parse_formula(text, doc)


def D(text):
    doc = parse("object a, b, x, y, z, u, v, w.\npredicate C/0, O/1, R/2, D/0, E/1, G/2, P/0, Q/0, S/0.\n"
                f"def T {{ {text} }}\n")
    return doc.definitions["T"]


# ------------------------------------------------------------ substitution

def test_substitution_renames_captured_binders():
    phi = F("forall y. R(x, y)")
    out = substitute(phi, Obj("y"), "x")
    assert out.var != "y"
    assert out.body == Atom("R", (Obj("y"), Obj(out.var)))


def test_substitution_leaves_bound_occurrences():
    phi = F("O(x) & (exists x. O(x))")
    assert show(substitute(phi, Obj("a"), "x")) == "O(a) & (exists x. O(x))"


@settings(max_examples=150, deadline=None)
@given(gen.seeds)
def test_substitution_lemma(seed):
    # phi[t/x] under y := v equals phi under x := value of t, y := v
    rng = random.Random(seed)
    phi = gen.formula(rng, ("x",), 3)
    t = gen.term(rng, ("y",), 2)
    I = gen.structure(rng, rng.randint(1, 3))
    out = substitute(phi, t, "x")
    for v in range(I.size):
        assert eval_two(I, out, {"y": v}) == eval_two(I, phi, {"x": eval_term(I, t, {"y": v}), "y": v})


@settings(max_examples=200, deadline=None)
@given(gen.seeds)
def test_generated_formulas_are_closed(seed):
    phi = gen.formula(random.Random(seed), (), 4)
    assert free_objects(phi) <= set(gen.OBJECTS)


# ------------------------------------------------------------ polarity

@pytest.mark.parametrize("text, pols", [
    ("C", {Polarity.POSITIVE}),
    ("~C", {Polarity.NEGATIVE}),
    ("C => O(a)", {Polarity.NEGATIVE}),
    ("~~C", {Polarity.POSITIVE}),
    ("C <=> O(a)", {Polarity.BOTH}),
    ("C & ~C", {Polarity.POSITIVE, Polarity.NEGATIVE}),
])
def test_polarities(text, pols):
    assert polarities(F(text), "C") == pols


def test_replace_positive_only_touches_positive_occurrences():
    h = Hypothesis("O", ("z",), F("R(z, z)", parse("object z.\npredicate R/2.")))
    out = replace_positive(F("O(a) & ~O(b)"), {"O": h})
    assert show(out) == "R(a, a) & ~O(b)"
    with pytest.raises(BothPolarity):
        replace_positive(F("O(a) <=> C"), {"O": h})


def test_replace_positive_avoids_capturing_hypothesis_parameters():
    doc = parse("object a, b, x, y, z.\npredicate O/1, R/2.")
    h = Hypothesis("O", ("z",), parse_formula("R(z, x)", doc))
    out = replace_positive(parse_formula("exists x. O(x)", doc), {"O": h})
    assert out.var != "x" and "x" in free_objects(out)


# ------------------------------------------------------------ definitions

def test_bound_symbol_free_elsewhere_is_rejected():
    with pytest.raises(DefinitionError):
        Definition((Rule(("x",), Atom("E", (Obj("x"),)), Atom("C")),
                    Rule((), Atom("D"), Atom("O", (Obj("x"),)))))


def test_merged_body_and_normalize():
    d = D("E(a) <- C. forall x. E(x) <- R(x, x).")
    assert show(merged_body(d, "E", ("y",))) == "(y = a) & C | (exists x. (y = x) & R(x, x))"
    n = normalize(d)
    assert len(n.rules) == 1 and n.defined() == ("E",)
    with pytest.raises(ValueError):
        merged_body(d, "E", ("y", "z"))


def test_stratification():
    d = D("P <- ~Q. Q <- S.")
    assert stratify(d) == {"P": 1, "Q": 0}
    parts = decompose_stratified(d)
    assert [p.defined() for p in parts] == [("Q",), ("P",)]
    loop = D("P <- ~Q. Q <- ~P.")
    assert stratify(loop) is None
    with pytest.raises(NotStratified):
        decompose_stratified(loop)


def test_mutual_dependents():
    d = D("P <- Q. Q <- P & S. S <- C.")
    assert mutual_dependents(d, "P") == {"P", "Q"}
    assert mutual_dependents(d, "S") == {"S"}


# ------------------------------------------------------------ canonical sequents

def test_canonical_and_positive_rewriting():
    doc = parse("object a.\npredicate O/1, E/1.\ndef T { forall x. E(x) <- O(x) & ~E(x) | ~O(x). }\n"
                "def U { forall x. E(x) <- ~O(x). }\n"
                "sequent S1: [T] |- E(a).\nsequent S2: [U] |- E(a).\n")
    assert is_canonical(doc.sequents["S1"])
    rewritten = positive_rewriting(doc.sequents["S2"])
    defs = rewritten.definitions()
    body = defs[0].rules[0].body if defs[0].defined() == ("E",) else defs[1].rules[0].body
    assert polarities(body, "O") == set()
    assert any("O_bar" in show(f) for f in rewritten.left)
    bad = Sequent.of([Def(doc.definitions["T"])], [F("C => C")])
    assert is_canonical(bad)
    imp = parse("predicate O/0, E/0.\ndef V { E <- O => O. }\nsequent S: [V] |- E.\n")
    assert not is_canonical(imp.sequents["S"])
