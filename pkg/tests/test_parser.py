import random

import pytest
from hypothesis import given, settings

import gen
from foid.parser import (ArityMismatch, DuplicateName, FoidSyntaxError, IncompleteFunctionTable,
                         OutOfDomainValue, ParseError, UnknownSymbol, parse, parse_formula,
                         parse_sequent, parse_structure, tokenize)
from foid.printer import show, show_definition, show_sequent
from foid.syntax import And, Atom, Forall, Iff, Implies, Not, Or


def F(text):
    return parse_formula(text, gen.DECLS)


@settings(max_examples=300, deadline=None)
@given(gen.formulas)
def test_print_parse_round_trip(phi):
    text = show(phi)
    assert parse_formula(text, gen.DECLS) == phi
    assert show(parse_formula(text, gen.DECLS)) == text


@settings(max_examples=100, deadline=None)
@given(gen.seeds)
def test_definition_round_trip(seed):
    d = gen.definition(random.Random(seed))
    preds = ", ".join(f"{p}/{k}" for p, k in {**gen.PARAMS, **dict(gen.DEFINED)}.items())
    doc = parse(f"object a, b.\nfunction f/1.\npredicate {preds}.\n" + show_definition(d, "T") + "\n")
    assert doc.definitions["T"] == d


def test_precedence_and_associativity():
    c = Atom("C")
    assert F("~C & C | C") == Or(And(Not(c), c), c)
    assert F("C | C & C") == Or(c, And(c, c))
    assert F("C => C <=> C") == Iff(Implies(c, c), c)
    assert F("C => C => C") == Implies(c, Implies(c, c))
    assert F("C & C & C") == And(c, And(c, c))
    # quantifiers reach as far right as possible
    assert isinstance(F("forall x. O(x) & C"), Forall)
    assert isinstance(F("(forall x. O(x)) & C"), And)


@pytest.mark.parametrize("text, exc, col", [
    ("O(a, b)", ArityMismatch, 1),
    ("Zz(a)", UnknownSymbol, 1),
    ("forall . C", FoidSyntaxError, 8),
    ("a = ", FoidSyntaxError, 5),
    ("C & q", UnknownSymbol, 5),
])
def test_formula_errors_carry_spans(text, exc, col):
    with pytest.raises(exc) as info:
        F(text)
    assert info.value.span.line == 1 and info.value.span.column == col
    assert str(info.value).startswith("<formula>:1:")


@pytest.mark.parametrize("text, exc, line", [
    ("structure S { dom = 2; a = 5; }", OutOfDomainValue, 1),
    ("structure S { dom = 2; f: 0->1; }", IncompleteFunctionTable, 1),
    ("object a.\nobject a.", DuplicateName, 2),
    ("object a.\n\nsequent S: |- a.", FoidSyntaxError, 3),
])
def test_document_errors(text, exc, line):
    with pytest.raises(exc) as info:
        parse(text, file="t.foid")
    assert info.value.span.file == "t.foid" and info.value.span.line == line
    assert isinstance(info.value, ParseError)


def test_comments_and_tokens():
    toks = tokenize("C // ignored\n& C")
    assert [t.text for t in toks if t.text][:3] == ["C", "&", "C"]


def test_document_contents():
    doc = parse("""
object zero.
function s/1.
predicate N/1.
def Nat { N(zero) <- true. forall n. N(s(n)) <- N(n). }
formula Ax: forall x. ~(zero = s(x)).
sequent S: [Ax], [Nat] |- N(s(zero)).
structure M { dom = 2; zero = 0; s: 0->1, 1->1; }
proof of S: defR(Nat; 1; zero) { defR(Nat; 0) { ax } }.
""")
    assert set(doc.definitions) == {"Nat"}
    assert show_sequent(doc.sequents["S"]).endswith("|- N(s(zero))")
    M = doc.structures["M"]
    assert M.size == 2 and M.functions["s"] == {(0,): 1, (1,): 1}
    assert doc.proof("S").target == "S"


def test_sequent_and_structure_fragments():
    seq = parse_sequent("C, O(a) |- R(a, b), C", gen.DECLS)
    assert len(seq.left) == 2 and len(seq.right) == 2
    M = parse_structure("{ dom = 3; c = 2; P: 0, 2; Q: (0,1); }")
    assert M.objects["c"] == 2 and M.relations["P"] == {(0,), (2,)}
    assert M.relations["Q"] == {(0, 1)}
