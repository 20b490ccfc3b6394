"""Text syntax for theories, sequents, structures and proof scripts.

    // comment
    object zero, a.
    function succ/1.
    predicate Nat/1, Even/1, P/0.
    def Phi { Even(zero) <- true. forall n. Even(succ(n)) <- Nat(n) & ~Even(n). }
    formula Peano: forall x. ~(zero = succ(x)).
    sequent S: [Peano], [Phi] |- ~Even(succ(zero)).
    structure O' { dom = 2; zero = 0; succ: 0->1, 1->1; Nat: 0, 1; }
    proof of S: notR(~Even(succ(zero))) { defL(Phi; Even(succ(zero)); Even(z) := ...) { ... } }.

Connectives by decreasing binding strength: ~, &, |, =>, <=>; binary
connectives associate to the right and quantifiers extend as far as possible.
Bound symbols need no declaration; free object symbols must be declared.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from .kernel import TAGS, RuleApp, ScriptNode, show_args
from .printer import show, show_definition, show_sequent
from .semantics_core import TwoValuedStructure, all_tuples
from .syntax import (FALSE, TRUE, And, App, Atom, Def, Definition, Eq, Exists,
                     FoidError, Forall, Formula, Hypothesis, Iff, Implies, Not,
                     Obj, Or, Rule, Sequent, Symbol)


class SourceSpan(NamedTuple):
    file: str
    line: int
    column: int
    length: int

    def __str__(self):
        return f"{self.file}:{self.line}:{self.column}"


class ParseError(FoidError):
    def __init__(self, span: SourceSpan, message: str):
        self.span = span
        self.message = message
        super().__init__(f"{span}: {message}")


class FoidSyntaxError(ParseError):
    pass


class ArityMismatch(ParseError):
    pass


class UnknownSymbol(ParseError):
    pass


class OutOfDomainValue(ParseError):
    pass


class IncompleteFunctionTable(ParseError):
    pass


class DuplicateName(ParseError):
    pass


# ------------------------------------------------------------------ lexing

class Token(NamedTuple):
    kind: str   # id, num, op, eof
    text: str
    line: int
    col: int


_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\f]+)
  | (?P<nl>\n)
  | (?P<comment>//[^\n]*)
  | (?P<num>[0-9]+)
  | (?P<id>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<op><=>|=>|<-|\|-|->|:=|[~&|=(){}\[\],.;:@<>/])
""", re.VERBOSE)

KEYWORDS = {"true", "false", "forall", "exists"}


def tokenize(text: str, file: str = "<input>") -> list:
    out = []
    pos, line, col = 0, 1, 1
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None:
            raise FoidSyntaxError(SourceSpan(file, line, col, 1), f"unexpected character {text[pos]!r}")
        kind = m.lastgroup
        s = m.group()
        if kind == "nl":
            line += 1
            col = 1
        else:
            if kind in ("num", "id", "op"):
                out.append(Token(kind, s, line, col))
            col += len(s)
        pos = m.end()
    out.append(Token("eof", "", line, col))
    return out


# ---------------------------------------------------------------- document

@dataclass
class ProofScript:
    name: str
    target: str
    root: ScriptNode
    span: object = field(default=None, compare=False, repr=False)


@dataclass
class Document:
    symbols: dict = field(default_factory=dict)        # name -> Symbol
    definitions: dict = field(default_factory=dict)    # name -> Definition
    formulas: dict = field(default_factory=dict)       # name -> Formula
    sequents: dict = field(default_factory=dict)       # name -> Sequent
    structures: dict = field(default_factory=dict)     # name -> TwoValuedStructure
    proofs: list = field(default_factory=list)         # ProofScript
    order: list = field(default_factory=list, compare=False, repr=False)
    file: str = field(default="<input>", compare=False, repr=False)

    def names(self) -> dict:
        """Definition -> first name, for printing [Name] references."""
        out: dict = {}
        for n, d in self.definitions.items():
            out.setdefault(d, n)
        return out

    def proof(self, name: str) -> ProofScript:
        for p in self.proofs:
            if p.name == name:
                return p
        raise KeyError(name)

    def elaborate(self, script: ProofScript):
        from .kernel import elaborate
        return elaborate(script.root, self.sequents[script.target])


# ------------------------------------------------------------------ parser

_RULE_END = {".", "}"}


class _Parser:
    def __init__(self, text: str, file: str, doc: Optional[Document] = None):
        self.file = file
        self.toks = tokenize(text, file)
        self.i = 0
        self.doc = doc if doc is not None else Document(file=file)
        self.scope: list = []

    # -- token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def span(self, t: Optional[Token] = None) -> SourceSpan:
        t = t or self.tok
        return SourceSpan(self.file, t.line, t.col, max(1, len(t.text)))

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("op", "id") and t.text == text

    def advance(self) -> Token:
        t = self.tok
        if t.kind != "eof":
            self.i += 1
        return t

    def error(self, expected: str, t: Optional[Token] = None):
        t = t or self.tok
        got = "end of input" if t.kind == "eof" else repr(t.text)
        raise FoidSyntaxError(self.span(t), f"expected {expected}, found {got}")

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.error(repr(text))
        return self.advance()

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.advance()
            return True
        return False

    def ident(self, what: str = "identifier") -> Token:
        t = self.tok
        if t.kind != "id" or t.text in KEYWORDS:
            self.error(what)
        return self.advance()

    def number(self) -> Token:
        if self.tok.kind != "num":
            self.error("number")
        return self.advance()

    # -- names
    def lookup(self, name: str):
        d = self.doc
        if name in d.symbols:
            return "symbol", d.symbols[name]
        for kind, table in (("definition", d.definitions), ("formula", d.formulas),
                            ("sequent", d.sequents), ("structure", d.structures)):
            if name in table:
                return kind, table[name]
        return None, None

    def claim(self, t: Token):
        if self.lookup(t.text)[0] is not None:
            raise DuplicateName(self.span(t), f"{t.text} is already declared")

    def bound(self, name: str) -> bool:
        return any(name in s for s in self.scope)

    def bindable(self, t: Token):
        kind, val = self.lookup(t.text)
        if kind == "symbol" and val.kind == "object":
            return
        if kind is not None:
            raise FoidSyntaxError(self.span(t), f"{t.text} cannot be used as an object symbol")

    # -- document
    def document(self) -> Document:
        while self.tok.kind != "eof":
            self.item()
        return self.doc

    def item(self):
        t = self.tok
        if t.kind != "id":
            self.error("a declaration")
        kw = t.text
        if kw == "object":
            self.advance()
            while True:
                n = self.ident("object name")
                self.claim(n)
                self.doc.symbols[n.text] = Symbol(n.text, "object")
                self.doc.order.append(("symbol", n.text))
                if not self.accept(","):
                    break
            self.expect(".")
        elif kw in ("function", "predicate"):
            self.advance()
            while True:
                n = self.ident(f"{kw} name")
                self.expect("/")
                k = self.number()
                arity = int(k.text)
                if kw == "function" and arity == 0:
                    raise ArityMismatch(self.span(k), "functions need arity at least 1; declare an object instead")
                self.claim(n)
                self.doc.symbols[n.text] = Symbol(n.text, kw, arity)
                self.doc.order.append(("symbol", n.text))
                if not self.accept(","):
                    break
            self.expect(".")
        elif kw == "def":
            self.advance()
            n = self.ident("definition name")
            self.claim(n)
            d = self.definition_body()
            self.doc.definitions[n.text] = d
            self.doc.order.append(("definition", n.text))
        elif kw == "formula":
            self.advance()
            n = self.ident("formula name")
            self.claim(n)
            self.expect(":")
            f = self.formula()
            self.expect(".")
            self.doc.formulas[n.text] = f
            self.doc.order.append(("formula", n.text))
        elif kw == "sequent":
            self.advance()
            n = self.ident("sequent name")
            self.claim(n)
            self.expect(":")
            s = self.sequent()
            self.expect(".")
            self.doc.sequents[n.text] = s
            self.doc.order.append(("sequent", n.text))
        elif kw == "structure":
            self.advance()
            n = self.ident("structure name")
            self.claim(n)
            self.doc.structures[n.text] = self.structure_body()
            self.doc.order.append(("structure", n.text))
        elif kw == "proof":
            self.proof_item()
        else:
            self.error("object, function, predicate, def, formula, sequent, structure or proof")

    # -- definitions
    def definition_body(self) -> Definition:
        start = self.expect("{")
        rules = []
        while not self.at("}"):
            rules.append(self.rule())
        self.expect("}")
        try:
            return Definition(tuple(rules))
        except FoidError as e:
            raise FoidSyntaxError(self.span(start), str(e)) from None

    def rule(self) -> Rule:
        start = self.tok
        bound: list = []
        if self.accept("forall"):
            while True:
                v = self.ident("variable")
                self.bindable(v)
                bound.append(v.text)
                if not self.accept(","):
                    break
            self.expect(".")
        self.scope.append(set(bound))
        try:
            head = self.primary()
            if not isinstance(head, Atom):
                raise FoidSyntaxError(self.span(start), "rule head must be a predicate atom")
            self.expect("<-")
            body = self.formula()
            self.expect(".")
        finally:
            self.scope.pop()
        try:
            return Rule(tuple(bound), head, body)
        except FoidError as e:
            raise FoidSyntaxError(self.span(start), str(e)) from None

    # -- formulas
    def formula(self) -> Formula:
        left = self.implication()
        if self.accept("<=>"):
            return Iff(left, self.formula())
        return left

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.accept("=>"):
            return Implies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        if self.accept("|"):
            return Or(left, self.disjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.unary()
        if self.accept("&"):
            return And(left, self.conjunction())
        return left

    def unary(self) -> Formula:
        if self.accept("~"):
            return Not(self.unary())
        if self.at("forall") or self.at("exists"):
            kind = Forall if self.advance().text == "forall" else Exists
            vs = []
            while True:
                v = self.ident("variable")
                self.bindable(v)
                vs.append(v.text)
                if not self.accept(","):
                    break
            self.expect(".")
            self.scope.append(set(vs))
            try:
                body = self.formula()
            finally:
                self.scope.pop()
            for v in reversed(vs):
                body = kind(v, body)
            return body
        return self.primary()

    def primary(self) -> Formula:
        t = self.tok
        if self.accept("true"):
            return TRUE
        if self.accept("false"):
            return FALSE
        if self.accept("("):
            f = self.formula()
            self.expect(")")
            return f
        if self.accept("["):
            n = self.ident("definition or formula name")
            self.expect("]")
            kind, val = self.lookup(n.text)
            if kind == "definition":
                return Def(val)
            if kind == "formula":
                return val
            raise UnknownSymbol(self.span(n), f"{n.text} is not a defined definition or formula")
        if self.at("{"):
            return Def(self.definition_body())
        if t.kind != "id" or t.text in KEYWORDS:
            self.error("a formula")
        kind, val = self.lookup(t.text)
        if not self.bound(t.text):
            if kind == "symbol" and val.kind == "predicate":
                return self.atom()
            if kind == "definition" and not self.peek().text == "(":
                self.advance()
                return Def(val)
            if kind == "formula" and not self.peek().text == "(":
                self.advance()
                return val
        lhs = self.term()
        if not self.at("="):
            self.error("'=' after a term (or a declared predicate)")
        self.advance()
        return Eq(lhs, self.term())

    def atom(self) -> Atom:
        t = self.advance()
        sym = self.doc.symbols[t.text]
        args: list = []
        if self.accept("("):
            args.append(self.term())
            while self.accept(","):
                args.append(self.term())
            self.expect(")")
        if len(args) != sym.arity:
            raise ArityMismatch(self.span(t), f"{t.text} expects {sym.arity} argument(s), got {len(args)}")
        return Atom(t.text, tuple(args))

    def term(self):
        t = self.tok
        if t.kind != "id" or t.text in KEYWORDS:
            self.error("a term")
        self.advance()
        name = t.text
        if self.at("("):
            kind, sym = self.lookup(name)
            if kind != "symbol" or sym.kind != "function":
                raise UnknownSymbol(self.span(t), f"{name} is not a declared function")
            self.advance()
            args = [self.term()]
            while self.accept(","):
                args.append(self.term())
            self.expect(")")
            if len(args) != sym.arity:
                raise ArityMismatch(self.span(t), f"{name} expects {sym.arity} argument(s), got {len(args)}")
            return App(name, tuple(args))
        if self.bound(name):
            return Obj(name)
        kind, sym = self.lookup(name)
        if kind == "symbol" and sym.kind == "object":
            return Obj(name)
        if kind == "symbol" and sym.kind == "function":
            raise ArityMismatch(self.span(t), f"{name} expects {sym.arity} argument(s), got 0")
        raise UnknownSymbol(self.span(t), f"unknown object symbol {name}")

    def formula_list(self, stops: tuple) -> list:
        out = []
        if self.tok.kind == "eof" or any(self.at(s) for s in stops):
            return out
        out.append(self.formula())
        while self.accept(","):
            out.append(self.formula())
        return out

    def sequent(self, stops: tuple = (".",)) -> Sequent:
        left = self.formula_list(("|-",))
        self.expect("|-")
        right = self.formula_list(stops)
        return Sequent.of(left, right)

    # -- structures
    def structure_body(self, require_declared: bool = False) -> TwoValuedStructure:
        open_tok = self.expect("{")
        self.expect("dom")
        self.expect("=")
        nt = self.number()
        n = int(nt.text)
        if n < 1:
            raise OutOfDomainValue(self.span(nt), "domain size must be at least 1")
        self.expect(";")
        objects: dict = {}
        functions: dict = {}
        relations: dict = {}
        arity: dict = {}
        seen: set = set()

        def value() -> int:
            v = self.number()
            if int(v.text) >= n:
                raise OutOfDomainValue(self.span(v), f"{v.text} is outside the domain 0..{n - 1}")
            return int(v.text)

        def tup() -> tuple:
            if self.accept("("):
                if self.accept(")"):
                    return ()
                vals = [value()]
                while self.accept(","):
                    vals.append(value())
                self.expect(")")
                return tuple(vals)
            return (value(),)

        while not self.at("}"):
            nt_ = self.ident("symbol name")
            name = nt_.text
            if name in seen:
                raise DuplicateName(self.span(nt_), f"{name} is interpreted twice")
            seen.add(name)
            kind, sym = self.lookup(name)
            declared = sym if kind == "symbol" else None
            if kind is not None and kind != "symbol":
                raise FoidSyntaxError(self.span(nt_), f"{name} is not a symbol")
            if self.accept("="):
                if self.at("true") or self.at("false"):
                    val = self.advance().text == "true"
                    if declared is not None and (declared.kind != "predicate" or declared.arity != 0):
                        raise ArityMismatch(self.span(nt_), f"{name} is not a 0-ary predicate")
                    relations[name] = frozenset({()}) if val else frozenset()
                    arity[name] = 0
                else:
                    if declared is not None and declared.kind != "object":
                        raise ArityMismatch(self.span(nt_), f"{name} is not an object symbol")
                    objects[name] = value()
            else:
                self.expect(":")
                entries = []
                while not self.at(";"):
                    a = tup()
                    if self.accept("->"):
                        entries.append((a, value()))
                    else:
                        entries.append((a, None))
                    if not self.accept(","):
                        break
                is_fn = any(v is not None for _, v in entries)
                if declared is not None:
                    is_fn = declared.kind == "function"
                    if declared.kind == "object":
                        raise ArityMismatch(self.span(nt_), f"{name} is an object symbol; write {name} = value")
                    k = declared.arity
                elif entries:
                    k = len(entries[0][0])
                else:
                    raise UnknownSymbol(self.span(nt_), f"arity of undeclared {name} cannot be inferred from an empty table")
                for a, v in entries:
                    if len(a) != k:
                        raise ArityMismatch(self.span(nt_), f"{name} has arity {k}, got a {len(a)}-tuple")
                    if (v is None) == is_fn:
                        raise FoidSyntaxError(self.span(nt_), f"mixed function and relation entries for {name}")
                if is_fn:
                    table = {}
                    for a, v in entries:
                        if a in table and table[a] != v:
                            raise FoidSyntaxError(self.span(nt_), f"{name} maps {a} to two values")
                        table[a] = v
                    if len(table) != n ** k:
                        missing = next(t for t in all_tuples(n, k) if t not in table)
                        raise IncompleteFunctionTable(self.span(nt_), f"{name} has no value for {missing}")
                    functions[name] = table
                else:
                    relations[name] = frozenset(a for a, _ in entries)
                arity[name] = k
            self.expect(";")
        self.expect("}")
        try:
            return TwoValuedStructure(n, objects, functions, relations, arity)
        except ValueError as e:
            raise FoidSyntaxError(self.span(open_tok), str(e)) from None

    # -- proofs
    def proof_item(self):
        start = self.expect("proof")
        name = None
        if not self.at("of"):
            name = self.ident("proof name").text
        self.expect("of")
        tgt = self.ident("sequent name")
        if tgt.text not in self.doc.sequents:
            raise UnknownSymbol(self.span(tgt), f"{tgt.text} is not a named sequent")
        self.expect(":")
        root = self.node()
        self.expect(".")
        name = name or tgt.text
        if any(p.name == name for p in self.doc.proofs):
            raise DuplicateName(self.span(start), f"a proof named {name} already exists")
        self.doc.proofs.append(ProofScript(name, tgt.text, root, self.span(start)))
        self.doc.order.append(("proof", name))

    def node(self) -> ScriptNode:
        t = self.tok
        if t.kind != "id" or t.text not in TAGS:
            self.error("a rule name (" + ", ".join(TAGS) + ")")
        self.advance()
        app = self.rule_args(t)
        ann = None
        if self.accept("@"):
            self.expect("<")
            ann = self.sequent(stops=(">",))
            self.expect(">")
        children = []
        if self.accept("{"):
            while not self.at("}"):
                children.append(self.node())
                if not self.accept(";"):
                    break
            self.expect("}")
        return ScriptNode(app, ann, children, self.span(t))

    def _keep(self) -> bool:
        if self.at(";") and self.peek().text == "keep":
            self.advance()
            self.advance()
            return True
        return False

    def _terms(self, stops=(";", ")")) -> tuple:
        if any(self.at(s) for s in stops):
            return ()
        out = [self.term()]
        while self.accept(","):
            out.append(self.term())
        return tuple(out)

    def _object_name(self) -> str:
        t = self.ident("object symbol")
        kind, sym = self.lookup(t.text)
        if not (kind == "symbol" and sym.kind == "object"):
            raise UnknownSymbol(self.span(t), f"{t.text} is not a declared object symbol")
        return t.text

    def _definition_ref(self) -> Definition:
        t = self.tok
        f = self.primary()
        if not isinstance(f, Def):
            raise FoidSyntaxError(self.span(t), "expected a definition")
        return f.definition

    def hypothesis(self) -> Hypothesis:
        t = self.ident("predicate")
        kind, sym = self.lookup(t.text)
        if kind != "symbol" or sym.kind != "predicate":
            raise UnknownSymbol(self.span(t), f"{t.text} is not a declared predicate")
        vs = []
        if self.accept("("):
            while True:
                v = self.ident("variable")
                self.bindable(v)
                vs.append(v.text)
                if not self.accept(","):
                    break
            self.expect(")")
        self.expect(":=")
        self.scope.append(set(vs))
        try:
            f = self.formula()
        finally:
            self.scope.pop()
        try:
            return Hypothesis(t.text, tuple(vs), f)
        except ValueError as e:
            raise FoidSyntaxError(self.span(t), str(e)) from None

    def rule_args(self, t: Token) -> RuleApp:
        tag = t.text
        if not self.accept("("):
            if tag in ("ax", "eqR"):
                return RuleApp(tag)
            self.error(f"'(' with the arguments of {tag}")
        if tag in ("ax", "eqR"):
            app = RuleApp(tag)
        elif tag == "wk":
            app = RuleApp(tag, sequent=self.sequent(stops=(")",)))
        elif tag == "subst":
            term = self.term()
            self.expect(",")
            x = self._object_name()
            self.expect(";")
            app = RuleApp(tag, terms=(term,), vars=(x,), sequent=self.sequent(stops=(")",)))
        elif tag == "cut":
            app = RuleApp(tag, formula=self.formula())
        elif tag in ("allL", "exR"):
            phi = self.formula()
            self.expect(";")
            term = self.term()
            app = RuleApp(tag, formula=phi, terms=(term,), keep=self._keep())
        elif tag == "eqL":
            x = self._object_name()
            self.expect(",")
            y = self._object_name()
            self.expect(";")
            a = self.term()
            self.expect(",")
            b = self.term()
            self.expect(";")
            app = RuleApp(tag, vars=(x, y), terms=(a, b), sequent=self.sequent(stops=(")",)))
        elif tag == "defR":
            d = self._definition_ref()
            self.expect(";")
            idx = int(self.number().text)
            terms: tuple = ()
            if self.at(";") and self.peek().text != "keep":
                self.advance()
                terms = self._terms()
            app = RuleApp(tag, definition=d, index=idx, terms=terms, keep=self._keep())
        elif tag in ("defL", "defL2"):
            d = self._definition_ref()
            self.expect(";")
            at = self.tok
            atom = self.primary()
            if not isinstance(atom, Atom):
                raise FoidSyntaxError(self.span(at), "expected the defined atom")
            hyps = []
            keep = False
            while self.accept(";"):
                if self.accept("keep"):
                    keep = True
                    break
                hyps.append(self.hypothesis())
            app = RuleApp(tag, definition=d, atom=atom, hyps=tuple(hyps), keep=keep)
        else:
            app = RuleApp(tag, formula=self.formula(), keep=self._keep())
        self.expect(")")
        return app


# ------------------------------------------------------------- entry points

def _guard(fn, text: str, file: str):
    try:
        return fn()
    except ParseError:
        raise
    except RecursionError:
        raise FoidSyntaxError(SourceSpan(file, 1, 1, 1), "input nests too deeply") from None


def parse(text: str, file: str = "<input>") -> Document:
    p = _Parser(text, file)
    return _guard(p.document, text, file)


def parse_file(path: str) -> Document:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read(), str(path))


def _fragment(text: str, doc: Optional[Document], method: str, file: str, *args):
    p = _Parser(text, file, doc if doc is not None else Document(file=file))

    def run():
        v = getattr(p, method)(*args)
        if p.tok.kind != "eof":
            p.error("end of input")
        return v
    return _guard(run, text, file)


def parse_formula(text: str, doc: Optional[Document] = None, file: str = "<formula>") -> Formula:
    return _fragment(text, doc, "formula", file)


def parse_term(text: str, doc: Optional[Document] = None, file: str = "<term>"):
    return _fragment(text, doc, "term", file)


def parse_sequent(text: str, doc: Optional[Document] = None, file: str = "<sequent>") -> Sequent:
    return _fragment(text, doc, "sequent", file, ("<eof>",))


def parse_hypothesis(text: str, doc: Optional[Document] = None, file: str = "<hypothesis>") -> Hypothesis:
    return _fragment(text, doc, "hypothesis", file)


def parse_structure(text: str, file: str = "<structure>") -> TwoValuedStructure:
    """A structure block `structure Name { ... }` or just its braces; symbols may be undeclared."""
    p = _Parser(text, file)

    def run():
        if p.at("{"):
            s = p.structure_body()
            if p.tok.kind != "eof":
                p.error("end of input")
            return s
        doc = p.document()
        if len(doc.structures) != 1:
            raise FoidSyntaxError(SourceSpan(file, 1, 1, 1), "expected exactly one structure")
        return next(iter(doc.structures.values()))
    return _guard(run, text, file)


# ----------------------------------------------------------------- printing

def show_structure(s: TwoValuedStructure, name: str) -> str:
    parts = [f"dom = {s.size};"]
    for o in sorted(s.objects):
        parts.append(f"{o} = {s.objects[o]};")
    for f in sorted(s.functions):
        t = s.functions[f]
        parts.append(f"{f}: " + ", ".join(f"{_tup(a)}->{v}" for a, v in sorted(t.items())) + ";")
    for r in sorted(s.relations):
        if s.arity[r] == 0:
            parts.append(f"{r} = {'true' if () in s.relations[r] else 'false'};")
        else:
            parts.append(f"{r}: " + ", ".join(_tup(a) for a in sorted(s.relations[r])) + ";")
    return f"structure {name} {{ " + " ".join(parts) + " }"


def _tup(a: tuple) -> str:
    return str(a[0]) if len(a) == 1 else "(" + ",".join(map(str, a)) + ")"


def show_node(n: ScriptNode, names=None, indent: int = 0) -> str:
    pad = "  " * indent
    args = show_args(n.rule, names)
    s = pad + n.rule.tag
    if args or n.rule.tag not in ("ax", "eqR"):
        s += f"({args})"
    if n.annotation is not None:
        s += f" @ <{show_sequent(n.annotation, names)}>"
    if n.children:
        inner = ";\n".join(show_node(c, names, indent + 1) for c in n.children)
        s += " {\n" + inner + "\n" + pad + "}"
    return s


def print_document(doc: Document) -> str:
    names = doc.names()
    out = []
    order = doc.order or (
        [("symbol", n) for n in doc.symbols] + [("definition", n) for n in doc.definitions]
        + [("formula", n) for n in doc.formulas] + [("sequent", n) for n in doc.sequents]
        + [("structure", n) for n in doc.structures] + [("proof", p.name) for p in doc.proofs])
    i = 0
    while i < len(order):
        kind, name = order[i]
        if kind == "symbol":
            sym = doc.symbols[name]
            group = [sym]
            while (i + 1 < len(order) and order[i + 1][0] == "symbol"
                   and doc.symbols[order[i + 1][1]].kind == sym.kind):
                i += 1
                group.append(doc.symbols[order[i][1]])
            if sym.kind == "object":
                out.append("object " + ", ".join(s.name for s in group) + ".")
            else:
                out.append(f"{sym.kind} " + ", ".join(f"{s.name}/{s.arity}" for s in group) + ".")
        elif kind == "definition":
            d = doc.definitions[name]
            out.append(show_definition(d, name))
        elif kind == "formula":
            out.append(f"formula {name}: {show(doc.formulas[name], names)}.")
        elif kind == "sequent":
            out.append(f"sequent {name}: {show_sequent(doc.sequents[name], names)}.")
        elif kind == "structure":
            out.append(show_structure(doc.structures[name], name))
        elif kind == "proof":
            p = doc.proof(name)
            label = "" if p.name == p.target else f"{p.name} "
            out.append(f"proof {label}of {p.target}:\n{show_node(p.root, names, 1)}.")
        i += 1
    return "\n".join(out) + "\n"


def pretty(v, doc: Optional[Document] = None) -> str:
    """Print a Document, Formula, Sequent or structure in reparseable syntax."""
    names = doc.names() if doc is not None else None
    if isinstance(v, Document):
        return print_document(v)
    if isinstance(v, Formula):
        return show(v, names)
    if isinstance(v, Sequent):
        return show_sequent(v, names)
    if isinstance(v, TwoValuedStructure):
        return show_structure(v, "S")
    raise TypeError(f"cannot print {type(v).__name__}")


# ------------------------------------------------------------- dump loading

def load_dump(text: str, doc: Document):
    """Rebuild a Proof from the tab-separated dump produced by kernel.dump."""
    from .kernel import Proof, ProofNode
    nodes = []
    root = 0
    for ln, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        cols = line.split("\t")
        span = SourceSpan("<dump>", ln, 1, len(line))
        if cols[0] == "root":
            root = int(cols[1])
            continue
        if len(cols) < 4:
            raise FoidSyntaxError(span, "expected index, tag, children and sequent")
        idx, tag, kids, seq = cols[:4]
        if int(idx) != len(nodes):
            raise FoidSyntaxError(span, f"node {idx} out of order")
        children = () if kids == "-" else tuple(int(k) for k in kids.split(","))
        f = {"terms": [], "vars": [], "hyps": []}
        kw = {}
        for col in cols[4:]:
            key, _, val = col.partition("=")
            if key == "formula":
                kw["formula"] = parse_formula(val, doc)
            elif key == "keep":
                kw["keep"] = val == "1"
            elif key == "term":
                f["terms"].append(parse_term(val, doc))
            elif key == "var":
                f["vars"].append(val)
            elif key == "sequent":
                kw["sequent"] = parse_sequent(val, doc)
            elif key == "def":
                d = parse_formula(val, doc)
                if not isinstance(d, Def):
                    raise FoidSyntaxError(span, "def= must name a definition")
                kw["definition"] = d.definition
            elif key == "index":
                kw["index"] = int(val)
            elif key == "atom":
                kw["atom"] = parse_formula(val, doc)
            elif key == "hyp":
                f["hyps"].append(parse_hypothesis(val, doc))
            else:
                raise FoidSyntaxError(span, f"unknown field {key}")
        app = RuleApp(tag, terms=tuple(f["terms"]), vars=tuple(f["vars"]), hyps=tuple(f["hyps"]), **kw)
        nodes.append(ProofNode(parse_sequent(seq, doc), app, children))
    return Proof(nodes, root)
