import pytest

from foid import kernel
from foid.kernel import Code, Proof, ProofNode, RuleApp, check
from foid.parser import parse, parse_formula, parse_hypothesis, parse_sequent
from foid.printer import show
from foid.syntax import Atom, Def, Hypothesis, Obj, Sequent

DECLS = """
object a, b, x, y, z, n, m.
function s/1.
predicate P/0, Q/0, R/0, A/1, B/1, E/2, N/1, Ev/1, Od/1.

def Nat {
  N(a) <- true.
  forall n. N(s(n)) <- N(n).
}

def EO {
  Ev(a) <- true.
  forall n. Ev(s(n)) <- Od(n).
  forall m. Od(s(m)) <- Ev(m).
}
"""


def verdict(body: str):
    """Kernel code for every proof in DECLS + body (None when accepted)."""
    doc = parse(DECLS + body)
    out = {}
    for script in doc.proofs:
        err = check(doc.elaborate(script), doc.sequents[script.target])
        out[script.name] = None if err is None else err.code
    return out


def one(body: str):
    (v,) = verdict(body).values()
    return v


# ------------------------------------------------------------ propositional

@pytest.mark.parametrize("seq, script", [
    ("P |- P", "ax"),
    ("false |- P", "ax"),
    ("|- true", "ax"),
    ("P & Q |- Q & P", "andL(P & Q) { andR(Q & P) { ax; ax } }"),
    ("P | Q |- Q | P", "orL(P | Q) { orR(Q | P) { ax }; orR(Q | P) { ax } }"),
    ("|- P => P", "impR(P => P) { ax }"),
    ("P => Q, P |- Q", "impL(P => Q) { ax; ax }"),
    ("|- ~(P & ~P)", "notR(~(P & ~P)) { andL(P & ~P) { notL(~P) { ax } } }"),
    ("|- P <=> P", "iffR(P <=> P) { ax; ax }"),
    ("P <=> Q, P |- Q", "iffL(P <=> Q) { ax; ax }"),
    ("P => Q, Q => R, P |- R", "cut(Q) { impL(P => Q) { ax; ax }; impL(Q => R) { ax; ax } }"),
    ("P |- P, Q", "wk(P |- P) { ax }"),
])
def test_propositional_rules_accept(seq, script):
    assert one(f"sequent S: {seq}.\nproof of S: {script}.") is None


@pytest.mark.parametrize("seq, script, code", [
    ("P |- Q", "ax", Code.NOT_AXIOM),
    ("P |- Q", "wk(R |- Q) { ax }", Code.NOT_SUBSET),
    ("P & Q |- P", "andL(P & R) { ax @ <P, R |- P> }", Code.PRINCIPAL_MISSING),
    ("P |- P | Q", "orL(P | Q) { ax @ <P |- P | Q>; ax @ <Q |- P | Q> }", Code.PRINCIPAL_MISSING),
    ("P |- Q", "andR(P & Q) { ax @ <P |- P>; ax @ <P |- Q> }", Code.PRINCIPAL_MISSING),
])
def test_propositional_rules_reject(seq, script, code):
    assert one(f"sequent S: {seq}.\nproof of S: {script}.") is code


def test_annotated_premise_mismatch():
    body = "sequent S: P & Q |- P.\nproof of S: andL(P & Q) { ax @ <P |- P> }."
    assert one(body) is Code.PREMISE_MISMATCH


# ------------------------------------------------------------ quantifiers

@pytest.mark.parametrize("seq, script", [
    ("forall x. A(x) |- A(a)", "allL(forall x. A(x); a) { ax }"),
    ("A(b) |- exists x. A(x)", "exR(exists x. A(x); b) { ax }"),
    ("forall x. A(x) & B(x) |- forall x. A(x)",
     "allR(forall x. A(x)) { allL(forall x. A(x) & B(x); x) { andL(A(x) & B(x)) { ax } } }"),
    ("exists x. A(x) |- exists y. A(y)", "exL(exists x. A(x)) { exR(exists y. A(y); x) { ax } }"),
])
def test_quantifier_rules_accept(seq, script):
    assert one(f"sequent S: {seq}.\nproof of S: {script}.") is None


def test_eigenvariable_condition():
    body = "sequent S: A(x) |- forall x. A(x).\nproof of S: allR(forall x. A(x)) { ax }."
    assert one(body) is Code.EIGENVARIABLE


def test_wrong_witness():
    body = ("sequent S: forall x. A(x) |- A(a).\n"
            "proof of S: allL(forall x. A(x); b) @ <forall x. A(x) |- A(a)> { ax }.")
    assert one(body) is not None


# ------------------------------------------------------------ equality and substitution

def test_equality_rules():
    assert one("sequent S: |- a = a.\nproof of S: eqR.") is None
    assert one("sequent S: |- a = b.\nproof of S: eqR.") is Code.NOT_AXIOM
    body = "sequent S: A(b), a = b |- A(a).\nproof of S: eqL(x, y; a, b; A(b) |- A(x)) { ax }."
    assert one(body) is None


def test_substitution_rule():
    assert one("sequent S: A(a) |- A(a).\nproof of S: subst(a, x; A(x) |- A(x)) { ax }.") is None
    # the substituted term may not be captured by a quantifier of the premise
    body = ("sequent S: forall y. E(y, y) |- forall y. E(y, y).\n"
            "proof of S: subst(y, x; forall y. E(x, y) |- forall y. E(x, y)) { ax }.")
    assert one(body) is not None


# ------------------------------------------------------------ definitions

def test_defR_and_wrong_index():
    assert one("sequent S: [Nat] |- N(s(a)).\nproof of S: defR(Nat; 1; a) { defR(Nat; 0) { ax } }.") is None
    leaf = "ax @ <[Nat] |- true>"
    assert one(f"sequent S: [Nat] |- N(s(a)).\nproof of S: defR(Nat; 0) {{ {leaf} }}.") is Code.HEAD_MISSING
    assert one(f"sequent S: [Nat] |- N(a).\nproof of S: defR(Nat; 7) {{ {leaf} }}.") is Code.BAD_RULE_INDEX
    assert one("sequent S: |- N(a).\nproof of S: defR(Nat; 0) { ax @ <|- true> }.") is Code.DEF_MISSING


def test_defL_accepts_correct_minors():
    body = """
sequent S: [Nat], N(z), A(a), forall y. A(y) => A(s(y)) |- A(z).
proof of S:
  defL(Nat; N(z); N(x) := A(x)) {
    ax;
    allL(forall y. A(y) => A(s(y)); n) { impL(A(n) => A(s(n))) { ax; ax } };
    ax
  }.
"""
    assert one(body) is None


def test_defL_side_condition_on_rule_bound_symbols():
    # n is bound by the second rule and occurs freely in the conclusion
    body = """
sequent S: [Nat], N(n), A(a), forall y. A(y) => A(s(y)) |- A(n).
proof of S:
  defL(Nat; N(n); N(x) := A(x)) {
    ax @ <[Nat], A(a), forall y. A(y) => A(s(y)), true |- A(a), A(n)>;
    ax @ <[Nat], A(a), forall y. A(y) => A(s(y)), A(n) |- A(s(n)), A(n)>;
    ax @ <[Nat], A(a), forall y. A(y) => A(s(y)), A(n) |- A(n)>
  }.
"""
    assert one(body) is Code.DEFL_SIDE


def test_defL_requires_hypothesis_for_the_atom():
    body = "sequent S: [EO], Ev(z) |- A(z).\nproof of S: defL(EO; Ev(z); Od(x) := A(x)) { ax @ <P |- P>; ax @ <P |- P> }."
    assert one(body) is Code.P_NOT_IN_PI


def test_defL_rejects_both_polarity():
    doc = parse(DECLS + "def Bad { P <- (Q <=> P). }\nsequent S: [Bad], P |- R.\n")
    d = doc.definitions["Bad"]
    seq = doc.sequents["S"]
    h = Hypothesis("P", (), Atom("R"))
    app = RuleApp("defL", definition=d, atom=Atom("P"), hyps=(h,))
    prem = Sequent.of(list(seq.left), list(seq.right))
    p = Proof([ProofNode(seq, app, (1, 2)), ProofNode(prem, RuleApp("ax")), ProofNode(prem, RuleApp("ax"))])
    err = check(p)
    assert err is not None and err.code is Code.BOTH_POLARITY


def test_defL2_expands_to_checked_fragment():
    body = """
sequent S: [Nat], N(z), A(a), forall y. A(y) => A(s(y)) |- A(z).
proof of S:
  defL2(Nat; N(z); N(x) := A(x)) {
    ax;
    allL(forall y. A(y) => A(s(y)); n) { impL(A(n) => A(s(n))) { ax; ax } }
  }.
"""
    doc = parse(DECLS + body)
    p = doc.elaborate(doc.proofs[0])
    assert check(p, doc.sequents["S"]) is None
    q = kernel.expand_all(p)
    assert all(nd.rule.tag != "defL2" for nd in q.nodes)
    assert check(q, doc.sequents["S"]) is None


# ------------------------------------------------------------ structure

def test_structure_errors():
    seq = parse_sequent("P |- P", parse(DECLS))
    leaf = ProofNode(seq, RuleApp("ax"))
    cyc = Proof([ProofNode(seq, RuleApp("wk", sequent=seq), (0,))])
    assert check(cyc).code is Code.BAD_STRUCTURE
    orphan = Proof([leaf, leaf])
    assert check(orphan).code is Code.BAD_STRUCTURE
    assert check(Proof([leaf]), parse_sequent("P |- P, Q", parse(DECLS))).code is Code.ROOT_MISMATCH
    unknown = Proof([ProofNode(seq, RuleApp("magic"))])
    assert check(unknown).code is Code.UNKNOWN_RULE


def test_assert_valid_raises():
    seq = parse_sequent("P |- Q", parse(DECLS))
    with pytest.raises(kernel.CheckError):
        kernel.assert_valid(Proof([ProofNode(seq, RuleApp("ax"))]))


# ------------------------------------------------------------ FO approximation and lints

def test_matimps_and_scheme_shape():
    doc = parse(DECLS)
    d = doc.definitions["Nat"]
    assert [show(f) for f in kernel.matimps(d)] == ["true => N(a)", "forall n. N(n) => N(s(n))"]
    h = parse_hypothesis("N(y) := A(y)", doc)
    inst = kernel.indscheme_instance(d, "N", [h], xs=("z",))
    assert show(inst) == "(true => A(a)) & (forall n. A(n) => A(s(n))) => (forall z. N(z) => A(z))"
    with pytest.raises(Exception):
        kernel.indscheme_instance(d, "Ev", [h])


def test_lint_flags_extra_hypotheses():
    body = """
def Two {
  P <- Q.
  Q <- true.
}
sequent S: [Two], P |- R, P.
proof of S: defL(Two; P; P := R; Q := R) { ax; ax; ax }.
"""
    doc = parse(DECLS + body)
    p = doc.elaborate(doc.proofs[0])
    codes = [w.code for w in kernel.lint(p)]
    assert "PI_NOT_IN_MD" in codes


def test_elementary_cut_shape():
    doc = parse(DECLS)
    assert kernel.is_elementary_cut(parse_formula("forall x. A(x) | ~A(x)", doc), {"A"})
    assert not kernel.is_elementary_cut(parse_formula("forall x. A(x) | ~A(x)", doc), {"B"})
    assert not kernel.is_elementary_cut(parse_formula("A(a) | ~A(a)", doc), {"A"})
    assert kernel.is_elementary_cut(parse_formula("P | ~P", doc), {"P"})


def test_dump_is_readable():
    doc = parse(DECLS + "sequent S: P & Q |- Q.\nproof of S: andL(P & Q) { ax }.")
    text = kernel.dump(doc.elaborate(doc.proofs[0]))
    assert "andL" in text and "ax" in text
