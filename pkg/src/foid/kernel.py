"""The trusted proof checker for the sequent calculus with definitions.

A proof is a list of nodes, each carrying its conclusion sequent, the rule
application that justifies it (with every instantiation parameter spelled
out) and the indices of its premises. `check` validates every node locally
and reports the first failure in depth-first order; it never searches.

The elaborator further down computes premise sequents from a script tree. It
is a convenience for authors and is not trusted: whatever it produces is
re-checked by `check`.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .printer import show, show_sequent, show_term
from .syntax import (And, Atom, Bot, BothPolarity, Def, Definition, Eq, Exists,
                     FoidError, Forall, Formula, Hypothesis, Iff, Implies, Not,
                     Or, Sequent, Top, bound_objects, free_in_all, free_objects,
                     is_literal_combination, is_pure_fo, mutual_dependents,
                     occurrences, Polarity, replace_positive, substitute,
                     substitute_many, term_objects)

TAGS = ("ax", "wk", "subst", "cut", "notL", "notR", "orL", "orR", "andL", "andR",
        "impL", "impR", "iffL", "iffR", "allL", "allR", "exL", "exR", "eqL", "eqR",
        "defR", "defL", "defL2")

_CONNECTIVE = {
    "notL": (Not, "L"), "notR": (Not, "R"), "andL": (And, "L"), "andR": (And, "R"),
    "orL": (Or, "L"), "orR": (Or, "R"), "impL": (Implies, "L"), "impR": (Implies, "R"),
    "iffL": (Iff, "L"), "iffR": (Iff, "R"), "allL": (Forall, "L"), "allR": (Forall, "R"),
    "exL": (Exists, "L"), "exR": (Exists, "R"),
}
_WITNESSED = ("allL", "exR")
_EIGEN = ("allR", "exL")


class Code(str, enum.Enum):
    BAD_STRUCTURE = "BAD_STRUCTURE"
    ROOT_MISMATCH = "ROOT_MISMATCH"
    UNKNOWN_RULE = "UNKNOWN_RULE"
    ARITY = "ARITY"
    BAD_PARAMS = "BAD_PARAMS"
    NOT_AXIOM = "NOT_AXIOM"
    NOT_SUBSET = "NOT_SUBSET"
    PRINCIPAL_MISSING = "PRINCIPAL_MISSING"
    PREMISE_MISMATCH = "PREMISE_MISMATCH"
    EIGENVARIABLE = "EIGENVARIABLE"
    SUBST_CAPTURE = "SUBST_CAPTURE"
    EQL_MISMATCH = "EQL_MISMATCH"
    DEF_MISSING = "DEF_MISSING"
    BAD_RULE_INDEX = "BAD_RULE_INDEX"
    WITNESS_ARITY = "WITNESS_ARITY"
    HEAD_MISSING = "HEAD_MISSING"
    PI_NOT_DEFINED = "PI_NOT_DEFINED"
    P_NOT_IN_PI = "P_NOT_IN_PI"
    HYP_BAD = "HYP_BAD"
    BOTH_POLARITY = "BOTH_POLARITY"
    DEFL_SIDE = "DEFL_SIDE"
    MINOR_PREMISE_MISMATCH = "MINOR_PREMISE_MISMATCH"
    MAJOR_PREMISE_MISMATCH = "MAJOR_PREMISE_MISMATCH"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class RuleApp:
    """A rule tag with its parameters; unused fields stay at their defaults.

    formula     principal formula (connective rules), cut formula
    keep        elaboration hint: keep the principal formula in the premises
    terms       witness (allL, exR), (t,) for subst, (t, s) for eqL, s for defR
    vars        (x,) for subst, (x, y) for eqL
    sequent     premise for wk and subst, template for eqL
    definition  target definition for defR, defL, defL2
    index       rule index for defR
    atom        the defined atom P(v) for defL and defL2
    hyps        induction hypotheses for defL and defL2
    """
    tag: str
    formula: Optional[Formula] = None
    keep: bool = False
    terms: tuple = ()
    vars: tuple = ()
    sequent: Optional[Sequent] = None
    definition: Optional[Definition] = None
    index: Optional[int] = None
    atom: Optional[Atom] = None
    hyps: tuple = ()


@dataclass(frozen=True)
class ProofNode:
    sequent: Sequent
    rule: RuleApp
    children: tuple = ()


@dataclass
class Proof:
    nodes: list
    root: int = 0

    @property
    def conclusion(self) -> Sequent:
        return self.nodes[self.root].sequent

    def preorder(self) -> list:
        """(index, path) pairs in depth-first order; assumes a valid tree."""
        out = []
        stack = [(self.root, ())]
        while stack:
            i, path = stack.pop()
            out.append((i, path))
            kids = self.nodes[i].children
            for k in reversed(range(len(kids))):
                stack.append((kids[k], path + (k,)))
        return out

    def replace_node(self, i: int, node: ProofNode) -> "Proof":
        nodes = list(self.nodes)
        nodes[i] = node
        return Proof(nodes, self.root)


class CheckError(FoidError):
    def __init__(self, code: Code, message: str, node: Optional[int] = None,
                 tag: Optional[str] = None, formulas: tuple = (), path: tuple = ()):
        self.code = code
        self.message = message
        self.node = node
        self.tag = tag
        self.formulas = tuple(formulas)
        self.path = tuple(path)
        super().__init__(self.describe())

    def describe(self) -> str:
        where = "root" if not self.path else "root/" + "/".join(map(str, self.path))
        head = f"{self.code} at node {self.node} ({self.tag}, {where})" if self.node is not None \
            else str(self.code)
        extra = "".join(f"\n    {show(f) if isinstance(f, Formula) else f}" for f in self.formulas)
        return f"{head}: {self.message}{extra}"


class _Fail(Exception):
    def __init__(self, code: Code, message: str, *formulas):
        self.code = code
        self.message = message
        self.formulas = formulas


def _seq(left: Iterable[Formula], right: Iterable[Formula]) -> Sequent:
    return Sequent(frozenset(left), frozenset(right))


# ----------------------------------------------------------- rule semantics

def _principal(C: Sequent, app: RuleApp):
    kind, side = _CONNECTIVE[app.tag]
    phi = app.formula
    if not isinstance(phi, kind):
        raise _Fail(Code.BAD_PARAMS, f"{app.tag} needs a principal formula of the right shape", phi or "none")
    if app.tag in _WITNESSED and len(app.terms) != 1:
        raise _Fail(Code.BAD_PARAMS, f"{app.tag} needs exactly one witness term")
    container = C.left if side == "L" else C.right
    if phi not in container:
        raise _Fail(Code.PRINCIPAL_MISSING, f"principal formula is not on the {'left' if side == 'L' else 'right'}", phi)
    return phi, side


def _connective_premises(tag: str, phi: Formula, L: frozenset, R: frozenset, term=None) -> list:
    if tag == "notL":
        return [_seq(L, R | {phi.body})]
    if tag == "notR":
        return [_seq(L | {phi.body}, R)]
    if tag == "andL":
        return [_seq(L | {phi.left, phi.right}, R)]
    if tag == "andR":
        return [_seq(L, R | {phi.left}), _seq(L, R | {phi.right})]
    if tag == "orL":
        return [_seq(L | {phi.left}, R), _seq(L | {phi.right}, R)]
    if tag == "orR":
        return [_seq(L, R | {phi.left, phi.right})]
    if tag == "impL":
        return [_seq(L, R | {phi.left}), _seq(L | {phi.right}, R)]
    if tag == "impR":
        return [_seq(L | {phi.left}, R | {phi.right})]
    if tag == "iffL":
        return [_seq(L, R | {phi.left, phi.right}), _seq(L | {phi.left, phi.right}, R)]
    if tag == "iffR":
        return [_seq(L | {phi.left}, R | {phi.right}), _seq(L | {phi.right}, R | {phi.left})]
    if tag == "allL":
        return [_seq(L | {substitute(phi.body, term, phi.var)}, R)]
    if tag == "allR":
        return [_seq(L, R | {phi.body})]
    if tag == "exL":
        return [_seq(L | {phi.body}, R)]
    if tag == "exR":
        return [_seq(L, R | {substitute(phi.body, term, phi.var)})]
    raise AssertionError(tag)


def _bases(C: Sequent, phi: Formula, side: str) -> list:
    """(left, right) contexts with the principal dropped, then kept."""
    if side == "L":
        return [(C.left - {phi}, C.right), (C.left, C.right)]
    return [(C.left, C.right - {phi}), (C.left, C.right)]


def _expect_count(premises: list, n: int, what: str):
    if len(premises) != n:
        raise _Fail(Code.ARITY, f"{what} has {n} premise(s), found {len(premises)}")


def _defl_setup(C: Sequent, app: RuleApp, check_atom: bool = True):
    """Shared validation for defL and defL2.

    Returns (definition, atom, hypothesis map, [(rule, body', F_Q[s])], F_P[v]).
    """
    D = app.definition
    if D is None or Def(D) not in C.left:
        raise _Fail(Code.DEF_MISSING, "the targeted definition is not on the left")
    atom = app.atom
    if not isinstance(atom, Atom):
        raise _Fail(Code.BAD_PARAMS, "defL needs a defined atom P(v)")
    defined = D.defined()
    arity = {p: len(D.rules_for(p)[0].head.args) for p in defined}
    hmap: dict = {}
    for h in app.hyps:
        if not isinstance(h, Hypothesis):
            raise _Fail(Code.HYP_BAD, "malformed induction hypothesis")
        if h.pred in hmap:
            raise _Fail(Code.HYP_BAD, f"two induction hypotheses for {h.pred}")
        if h.pred not in arity:
            raise _Fail(Code.PI_NOT_DEFINED, f"{h.pred} is not defined by the targeted definition")
        if len(h.vars) != arity[h.pred]:
            raise _Fail(Code.HYP_BAD, f"hypothesis for {h.pred} has {len(h.vars)} variable(s), arity is {arity[h.pred]}")
        hmap[h.pred] = h
    if atom.pred not in hmap:
        raise _Fail(Code.P_NOT_IN_PI, f"{atom.pred} has no induction hypothesis", atom)
    if len(atom.args) != arity[atom.pred]:
        raise _Fail(Code.BAD_PARAMS, f"{atom.pred} applied to the wrong number of arguments", atom)
    if check_atom and atom not in C.left:
        raise _Fail(Code.PRINCIPAL_MISSING, "the defined atom is not on the left", atom)
    context_free = free_in_all(C.left | C.right)
    hyp_params = set()
    for h in hmap.values():
        hyp_params |= free_objects(h.formula) - set(h.vars)
    for i, r in enumerate(D.rules):
        clash = set(r.bound) & context_free
        if clash:
            raise _Fail(Code.DEFL_SIDE, f"bound symbol {sorted(clash)[0]} of rule {i} occurs freely in the sequent")
        clash = set(r.bound) & hyp_params
        if clash:
            raise _Fail(Code.DEFL_SIDE, f"bound symbol {sorted(clash)[0]} of rule {i} occurs freely in an induction hypothesis")
    minors = []
    for r in D.rules:
        if r.head.pred in hmap:
            try:
                body = replace_positive(r.body, hmap)
            except BothPolarity as e:
                raise _Fail(Code.BOTH_POLARITY, str(e), r.body) from None
            minors.append((r, body, hmap[r.head.pred].instantiate(r.head.args)))
    major = hmap[atom.pred].instantiate(atom.args)
    return D, atom, hmap, minors, major


def _check_defl(C: Sequent, app: RuleApp, premises: list):
    D, atom, hmap, minors, major = _defl_setup(C, app)
    _expect_count(premises, len(minors) + 1, "defL")
    bases = [C.left - {atom}, C.left]
    for k, ((r, body, fq), P) in enumerate(zip(minors, premises)):
        if not any(P == _seq(b | {body}, C.right | {fq}) for b in bases):
            raise _Fail(Code.MINOR_PREMISE_MISMATCH,
                        f"minor premise {k} (rule for {r.head.pred}) should add {show(body)} on the left and {show(fq)} on the right",
                        body, fq)
    P = premises[-1]
    if not any(P == _seq(b | {major}, C.right) for b in bases):
        raise _Fail(Code.MAJOR_PREMISE_MISMATCH, f"major premise should add {show(major)} on the left", major)


def defl2_fragment(C: Sequent, app: RuleApp, premises: list) -> list:
    """The primitive derivation standing for a defL2 step.

    Returns (conclusion, rule, premises) triples: the defL step first, then one
    weakening per minor premise, then the axiom closing the major premise.
    """
    D, atom, hmap, minors, major = _defl_setup(C, app)
    if major not in C.right:
        raise _Fail(Code.HEAD_MISSING, f"defL2 needs {show(major)} on the right", major)
    _expect_count(premises, len(minors), "defL2")
    steps = []
    weakened = []
    for (r, body, fq), P in zip(minors, premises):
        base = C.left if atom in P.left else C.left - {atom}
        W = _seq(base | {body}, C.right | {fq})
        weakened.append(W)
        steps.append((W, RuleApp("wk", sequent=P), [P]))
    closing = _seq((C.left - {atom}) | {major}, C.right)
    steps.append((closing, RuleApp("ax"), []))
    prim = RuleApp("defL", definition=D, atom=atom, hyps=app.hyps)
    return [(C, prim, weakened + [closing])] + steps


def _check_node(C: Sequent, app: RuleApp, premises: list):
    tag = app.tag
    if tag not in TAGS:
        raise _Fail(Code.UNKNOWN_RULE, f"unknown rule {tag!r}")
    if tag == "ax":
        _expect_count(premises, 0, "ax")
        if not (C.left & C.right or Bot() in C.left or Top() in C.right):
            raise _Fail(Code.NOT_AXIOM, "no shared formula, no false on the left, no true on the right")
        return
    if tag == "eqR":
        _expect_count(premises, 0, "eqR")
        if not any(isinstance(f, Eq) and f.lhs == f.rhs for f in C.right):
            raise _Fail(Code.NOT_AXIOM, "no equation t = t on the right")
        return
    if tag == "wk":
        _expect_count(premises, 1, "wk")
        P = premises[0]
        if app.sequent is not None and app.sequent != P:
            raise _Fail(Code.PREMISE_MISMATCH, "premise differs from the stated weakening")
        if not (P.left <= C.left and P.right <= C.right):
            raise _Fail(Code.NOT_SUBSET, "premise is not contained in the conclusion")
        return
    if tag == "subst":
        _expect_count(premises, 1, "subst")
        P = premises[0]
        if len(app.terms) != 1 or len(app.vars) != 1:
            raise _Fail(Code.BAD_PARAMS, "subst needs one term and one object symbol")
        t, x = app.terms[0], app.vars[0]
        if app.sequent is not None and app.sequent != P:
            raise _Fail(Code.PREMISE_MISMATCH, "premise differs from the stated one")
        bound = set()
        for f in P.left | P.right:
            bound |= bound_objects(f)
        clash = bound & term_objects(t)
        if clash:
            raise _Fail(Code.SUBST_CAPTURE, f"{sorted(clash)[0]} is quantified in the premise and occurs in {show_term(t)}")
        want = _seq((substitute(f, t, x) for f in P.left), (substitute(f, t, x) for f in P.right))
        if want != C:
            raise _Fail(Code.PREMISE_MISMATCH, f"conclusion is not the premise with {show_term(t)} for {x}")
        return
    if tag == "cut":
        _expect_count(premises, 2, "cut")
        phi = app.formula
        if phi is None:
            raise _Fail(Code.BAD_PARAMS, "cut needs a cut formula")
        if premises[0] != _seq(C.left, C.right | {phi}):
            raise _Fail(Code.PREMISE_MISMATCH, "first premise should add the cut formula on the right", phi)
        if premises[1] != _seq(C.left | {phi}, C.right):
            raise _Fail(Code.PREMISE_MISMATCH, "second premise should add the cut formula on the left", phi)
        return
    if tag in _CONNECTIVE:
        phi, side = _principal(C, app)
        if tag in _EIGEN:
            if phi.var in free_in_all(C.left | C.right):
                raise _Fail(Code.EIGENVARIABLE, f"{phi.var} occurs freely in the conclusion", phi)
        term = app.terms[0] if tag in _WITNESSED else None
        cands = [_connective_premises(tag, phi, L, R, term) for L, R in _bases(C, phi, side)]
        _expect_count(premises, len(cands[0]), tag)
        for k, P in enumerate(premises):
            if not any(P == c[k] for c in cands):
                raise _Fail(Code.PREMISE_MISMATCH, f"premise {k} does not match {tag} on {show(phi)}", phi)
        return
    if tag == "eqL":
        _expect_count(premises, 1, "eqL")
        if len(app.vars) != 2 or len(app.terms) != 2 or app.sequent is None or app.vars[0] == app.vars[1]:
            raise _Fail(Code.BAD_PARAMS, "eqL needs distinct x, y, terms t, s and a template")
        (x, y), (t, s), T = app.vars, app.terms, app.sequent
        s1, s2 = {x: t, y: s}, {x: s, y: t}
        want = _seq([substitute_many(f, s1) for f in T.left] + [Eq(t, s)],
                    [substitute_many(f, s1) for f in T.right])
        if want != C:
            raise _Fail(Code.EQL_MISMATCH, "conclusion is not the template instance with the equation")
        prem = _seq([substitute_many(f, s2) for f in T.left], [substitute_many(f, s2) for f in T.right])
        if premises[0] != prem:
            raise _Fail(Code.PREMISE_MISMATCH, "premise is not the swapped template instance")
        return
    if tag == "defR":
        _expect_count(premises, 1, "defR")
        D = app.definition
        if D is None or Def(D) not in C.left:
            raise _Fail(Code.DEF_MISSING, "the targeted definition is not on the left")
        if app.index is None or not 0 <= app.index < len(D.rules):
            raise _Fail(Code.BAD_RULE_INDEX, f"definition has no rule {app.index}")
        r = D.rules[app.index]
        if len(app.terms) != len(r.bound):
            raise _Fail(Code.WITNESS_ARITY, f"rule {app.index} binds {len(r.bound)} symbol(s), {len(app.terms)} witness(es) given")
        m = dict(zip(r.bound, app.terms))
        head = substitute_many(r.head, m)
        if head not in C.right:
            raise _Fail(Code.HEAD_MISSING, "the rule head instance is not on the right", head)
        body = substitute_many(r.body, m)
        P = premises[0]
        if P not in (_seq(C.left, (C.right - {head}) | {body}), _seq(C.left, C.right | {body})):
            raise _Fail(Code.PREMISE_MISMATCH, f"premise should replace {show(head)} by {show(body)}", head, body)
        return
    if tag == "defL":
        _check_defl(C, app, premises)
        return
    if tag == "defL2":
        for W, rule, prem in defl2_fragment(C, app, premises):
            _check_node(W, rule, prem)
        return
    raise AssertionError(tag)


# ------------------------------------------------------------------- check

def structure_error(p: Proof) -> Optional[CheckError]:
    n = len(p.nodes)
    if not 0 <= p.root < n:
        return CheckError(Code.BAD_STRUCTURE, f"root index {p.root} out of range")
    parent = {p.root: None}
    stack = [p.root]
    while stack:
        i = stack.pop()
        for c in p.nodes[i].children:
            if not isinstance(c, int) or not 0 <= c < n:
                return CheckError(Code.BAD_STRUCTURE, f"node {i} has invalid child {c}", node=i)
            if c in parent:
                return CheckError(Code.BAD_STRUCTURE, f"node {c} is reached twice (cycle or sharing)", node=c)
            parent[c] = i
            stack.append(c)
    if len(parent) != n:
        missing = min(set(range(n)) - set(parent))
        return CheckError(Code.BAD_STRUCTURE, f"node {missing} is not reachable from the root", node=missing)
    return None


def check(p: Proof, expected: Optional[Sequent] = None) -> Optional[CheckError]:
    """None when p is a proof of expected (or of its own root); else the first error."""
    err = structure_error(p)
    if err is not None:
        return err
    root = p.nodes[p.root]
    if expected is not None and root.sequent != expected:
        return CheckError(Code.ROOT_MISMATCH, "root sequent differs from the expected sequent",
                          node=p.root, tag=root.rule.tag)
    for i, path in p.preorder():
        node = p.nodes[i]
        premises = [p.nodes[c].sequent for c in node.children]
        try:
            _check_node(node.sequent, node.rule, premises)
        except _Fail as f:
            return CheckError(f.code, f.message, node=i, tag=node.rule.tag,
                              formulas=f.formulas, path=path)
    return None


def assert_valid(p: Proof, expected: Optional[Sequent] = None) -> None:
    err = check(p, expected)
    if err is not None:
        raise err


# ------------------------------------------------------------ defL2 macro

def expand_def_l2(p: Proof, i: int) -> Proof:
    """Replace the defL2 node i by its primitive fragment (defL, wk..., ax)."""
    node = p.nodes[i]
    if node.rule.tag != "defL2":
        raise ValueError(f"node {i} is not a defL2 step")
    premises = [p.nodes[c].sequent for c in node.children]
    try:
        frag = defl2_fragment(node.sequent, node.rule, premises)
    except _Fail as f:
        raise CheckError(f.code, f.message, node=i, tag="defL2", formulas=f.formulas) from None
    nodes = list(p.nodes)
    top, *rest = frag
    kids = []
    for (W, rule, _), child in zip(rest[:-1], node.children):
        nodes.append(ProofNode(W, rule, (child,)))
        kids.append(len(nodes) - 1)
    W, rule, _ = rest[-1]
    nodes.append(ProofNode(W, rule, ()))
    kids.append(len(nodes) - 1)
    nodes[i] = ProofNode(node.sequent, top[1], tuple(kids))
    return Proof(nodes, p.root)


def expand_all(p: Proof) -> Proof:
    for i in range(len(p.nodes)):
        if p.nodes[i].rule.tag == "defL2":
            p = expand_def_l2(p, i)
    return p


# ------------------------------------------------------ FO approximation

def matimps(defn: Definition) -> list:
    """One material implication  forall x: body => head  per rule."""
    out = []
    for r in defn.rules:
        f: Formula = Implies(r.body, r.head)
        for x in reversed(r.bound):
            f = Forall(x, f)
        out.append(f)
    return out


def indscheme_instance(defn: Definition, pred: str, hyps: Iterable[Hypothesis],
                       xs: Optional[tuple] = None) -> Formula:
    """(AND over Pi-rules of  forall y: body[F/Pi+] => F_Q[s])  =>  forall x: P(x) => F_P[x]."""
    from .syntax import Obj, _fresh_tuple, all_names, big_and
    hmap = {h.pred: h for h in hyps}
    defined = defn.defined()
    for q in hmap:
        if q not in defined:
            raise FoidError(f"{q} is not defined by the definition")
    if pred not in hmap:
        raise FoidError(f"{pred} has no induction hypothesis")
    parts = []
    for r in defn.rules:
        if r.head.pred in hmap:
            f: Formula = Implies(replace_positive(r.body, hmap), hmap[r.head.pred].instantiate(r.head.args))
            for y in reversed(r.bound):
                f = Forall(y, f)
            parts.append(f)
    arity = len(defn.rules_for(pred)[0].head.args)
    if xs is None:
        used = all_names(Def(defn))
        for h in hmap.values():
            used |= all_names(h.formula) | set(h.vars)
        xs = _fresh_tuple(arity, used)
    args = tuple(Obj(x) for x in xs)
    concl: Formula = Implies(Atom(pred, args), hmap[pred].instantiate(args))
    for x in reversed(xs):
        concl = Forall(x, concl)
    return Implies(big_and(parts), concl)


# ------------------------------------------------------------------- lints

@dataclass(frozen=True)
class LintWarning:
    code: str
    node: int
    message: str

    def __str__(self):
        return f"{self.code} at node {self.node}: {self.message}"


def _negative_preds(defs: list) -> set:
    out = set()
    for d in defs:
        for r in d.rules:
            for _, a, pol in occurrences(r.body):
                if pol is not Polarity.POSITIVE:
                    out.add(a.pred)
    return out


def cut_lint_applies(seq: Sequent) -> bool:
    """Root is regular and every definition body is built from literals by & and |."""
    defs = seq.definitions()
    others = [f for f in seq.left if not isinstance(f, Def)] + list(seq.right)
    return (all(is_pure_fo(f) for f in others)
            and all(is_literal_combination(r.body) for d in defs for r in d.rules))


def is_elementary_cut(phi: Formula, negative: set) -> bool:
    ys = []
    while isinstance(phi, Forall):
        ys.append(phi.var)
        phi = phi.body
    if not (isinstance(phi, Or) and isinstance(phi.left, Atom) and phi.right == Not(phi.left)):
        return False
    a = phi.left
    from .syntax import Obj
    return (a.pred in negative and len(set(ys)) == len(ys)
            and a.args == tuple(Obj(y) for y in ys))


def lint(p: Proof) -> list:
    warnings = []
    root = p.conclusion
    cuts = cut_lint_applies(root)
    negative = _negative_preds(root.definitions())
    for i, _ in p.preorder():
        node = p.nodes[i]
        app = node.rule
        if app.tag in ("defL", "defL2") and app.definition is not None and app.atom is not None:
            pi = {h.pred for h in app.hyps}
            try:
                md = mutual_dependents(app.definition, app.atom.pred)
            except FoidError:
                continue
            extra = sorted(pi - md)
            if extra:
                warnings.append(LintWarning("PI_NOT_IN_MD", i,
                                            f"Pi contains {', '.join(extra)}, not mutually dependent with {app.atom.pred}"))
        if app.tag == "cut" and cuts and app.formula is not None:
            if not is_elementary_cut(app.formula, negative):
                warnings.append(LintWarning("NON_ELEMENTARY_CUT", i,
                                            f"cut formula {show(app.formula)} is not of the form forall y. Q(y) | ~Q(y)"
                                            " for a negatively occurring Q"))
    return warnings


# -------------------------------------------------------------- elaboration

class ElaborationError(FoidError):
    def __init__(self, message: str, span=None):
        self.span = span
        super().__init__(f"{span}: {message}" if span is not None else message)


@dataclass
class ScriptNode:
    rule: RuleApp
    annotation: Optional[Sequent] = None
    children: list = field(default_factory=list)
    span: object = field(default=None, compare=False, repr=False)


def default_premises(C: Sequent, app: RuleApp) -> Optional[list]:
    """Premises an author most likely means; None when they cannot be computed."""
    try:
        return _default_premises(C, app)
    except (_Fail, FoidError, AttributeError, TypeError, ValueError, IndexError):
        return None


def _default_premises(C: Sequent, app: RuleApp) -> list:
    tag = app.tag
    if tag in ("ax", "eqR"):
        return []
    if tag == "wk":
        return [app.sequent]
    if tag == "subst":
        return [app.sequent]
    if tag == "cut":
        return [_seq(C.left, C.right | {app.formula}), _seq(C.left | {app.formula}, C.right)]
    if tag in _CONNECTIVE:
        phi, side = _principal(C, app)
        L, R = _bases(C, phi, side)[1 if app.keep else 0]
        term = app.terms[0] if tag in _WITNESSED else None
        return _connective_premises(tag, phi, L, R, term)
    if tag == "eqL":
        (x, y), (t, s), T = app.vars, app.terms, app.sequent
        m = {x: s, y: t}
        return [_seq([substitute_many(f, m) for f in T.left], [substitute_many(f, m) for f in T.right])]
    if tag == "defR":
        r = app.definition.rules[app.index]
        m = dict(zip(r.bound, app.terms))
        head, body = substitute_many(r.head, m), substitute_many(r.body, m)
        right = C.right if app.keep else C.right - {head}
        return [_seq(C.left, right | {body})]
    if tag in ("defL", "defL2"):
        D, atom, hmap, minors, major = _defl_setup(C, app, check_atom=False)
        base = C.left if app.keep else C.left - {atom}
        right = C.right if tag == "defL" else C.right - {major}
        out = [_seq(base | {body}, right | {fq}) for _, body, fq in minors]
        if tag == "defL":
            out.append(_seq(base | {major}, C.right))
        return out
    raise _Fail(Code.UNKNOWN_RULE, tag)


def elaborate(script: ScriptNode, conclusion: Sequent) -> Proof:
    """Turn a script tree into a Proof, filling in premise sequents."""
    nodes: list = []

    def go(sn: ScriptNode, concl: Optional[Sequent]) -> int:
        if sn.annotation is not None:
            concl = sn.annotation
        if concl is None:
            raise ElaborationError(f"cannot compute the conclusion of this {sn.rule.tag} step; annotate it with @ <...>", sn.span)
        idx = len(nodes)
        nodes.append(None)
        prem = default_premises(concl, sn.rule)
        kids = []
        for k, ch in enumerate(sn.children):
            guess = prem[k] if prem is not None and k < len(prem) else None
            kids.append(go(ch, guess))
        nodes[idx] = ProofNode(concl, sn.rule, tuple(kids))
        return idx

    go(script, conclusion)
    return Proof(nodes, 0)


# ------------------------------------------------------- argument printing

def show_args(app: RuleApp, names=None) -> str:
    """Argument list in script syntax, without the surrounding parentheses."""
    from .printer import show_sequent as ss
    tag = app.tag
    keep = ["keep"] if app.keep else []
    if tag in ("ax", "eqR"):
        groups = []
    elif tag == "wk":
        groups = [ss(app.sequent, names)]
    elif tag == "subst":
        groups = [f"{show_term(app.terms[0])}, {app.vars[0]}", ss(app.sequent, names)]
    elif tag == "cut":
        groups = [show(app.formula, names)]
    elif tag in _WITNESSED:
        groups = [show(app.formula, names), show_term(app.terms[0])] + keep
    elif tag in _CONNECTIVE:
        groups = [show(app.formula, names)] + keep
    elif tag == "eqL":
        groups = [", ".join(app.vars), ", ".join(show_term(t) for t in app.terms), ss(app.sequent, names)]
    elif tag == "defR":
        groups = [show(Def(app.definition), names), str(app.index)]
        if app.terms:
            groups.append(", ".join(show_term(t) for t in app.terms))
        groups += keep
    elif tag in ("defL", "defL2"):
        groups = [show(Def(app.definition), names), show(app.atom, names)]
        groups += [show_hypothesis(h, names) for h in app.hyps]
        groups += keep
    else:
        raise ValueError(f"unknown rule {tag!r}")
    return "; ".join(groups)


def show_hypothesis(h: Hypothesis, names=None) -> str:
    head = f"{h.pred}({', '.join(h.vars)})" if h.vars else h.pred
    return f"{head} := {show(h.formula, names)}"


# ------------------------------------------------------------ dump format

def dump(p: Proof, names=None) -> str:
    """One tab-separated line per node: index, tag, children, sequent, key=value fields."""
    lines = []
    for i, node in enumerate(p.nodes):
        app = node.rule
        kids = ",".join(map(str, node.children)) or "-"
        fields = []
        if app.formula is not None:
            fields.append(f"formula={show(app.formula, names)}")
        if app.keep:
            fields.append("keep=1")
        fields += [f"term={show_term(t)}" for t in app.terms]
        fields += [f"var={v}" for v in app.vars]
        if app.sequent is not None:
            fields.append(f"sequent={show_sequent(app.sequent, names)}")
        if app.definition is not None:
            fields.append(f"def={show(Def(app.definition), names)}")
        if app.index is not None:
            fields.append(f"index={app.index}")
        if app.atom is not None:
            fields.append(f"atom={show(app.atom, names)}")
        fields += [f"hyp={show_hypothesis(h, names)}" for h in app.hyps]
        row = [str(i), app.tag, kids, show_sequent(node.sequent, names)] + fields
        lines.append("\t".join(row))
    if p.root != 0:
        lines.insert(0, f"root\t{p.root}")
    return "\n".join(lines) + "\n"
