"""Corpus runner: every .foid file with a sidecar .expect file is a case.

Sidecar lines (blank lines and // comments are ignored):

    option wide_functions | option max_n=N | option cap=N
    check PROOF ok [lint=CODE,CODE]
    check PROOF fail CODE
    validate SEQUENT wf|stable no_counterexample|counterexample
    model DEF STRUCTURE "expected line"
    stable DEF STRUCTURE COUNT

Any line may end with source=worked|derived|trivial, recording where the
expected value comes from: a worked example, an independent computation,
or plain counting.

Each expectation runs through the command-line front end in-process.
"""
from __future__ import annotations

import io
import os
import shlex
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from dataclasses import replace

from . import cli
from .kernel import Proof, ProofNode
from .parser import parse_file
from .syntax import Eq, Hypothesis, Not, Obj, Sequent, substitute, substitute_many

SOURCES = ("worked", "derived", "trivial")


class SidecarError(ValueError):
    pass


@dataclass(frozen=True)
class Expectation:
    line: int
    kind: str
    args: tuple
    source: str = "derived"


@dataclass
class CorpusCase:
    theory: Path
    expectations: list
    options: dict = field(default_factory=dict)


@dataclass
class CaseResult:
    file: str
    line: int
    kind: str
    subject: str
    ok: bool
    detail: str
    seconds: float


@dataclass
class CorpusReport:
    results: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def failures(self) -> list:
        return [r for r in self.results if not r.ok]

    def summary(self) -> str:
        bad = self.failures()
        lines = [f"{'PASS' if r.ok else 'FAIL'} {r.file}:{r.line} {r.kind} {r.subject}"
                 + ("" if r.ok else f": {r.detail}") for r in self.results]
        lines.append(f"{len(self.results) - len(bad)}/{len(self.results)} expectations met")
        return "\n".join(lines)


def find_corpus(start: Optional[Path] = None) -> Path:
    """FOID_CORPUS, else the nearest corpus/ directory above start or this package."""
    env = os.environ.get("FOID_CORPUS")
    if env:
        return Path(env)
    roots = [Path(start) if start else Path.cwd(), Path(__file__).resolve().parent]
    for root in roots:
        for d in [root, *root.resolve().parents]:
            if (d / "corpus").is_dir():
                return d / "corpus"
    raise FileNotFoundError("no corpus/ directory found; set FOID_CORPUS")


def read_sidecar(path: Path) -> tuple:
    """(options, expectations) of one .expect file."""
    options: dict = {}
    out = []
    for no, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        text = raw.split("//", 1)[0].strip()
        if not text:
            continue
        try:
            words = shlex.split(text)
        except ValueError as e:
            raise SidecarError(f"{path}:{no}: {e}") from None
        source = "derived"
        if words[-1].startswith("source="):
            source = words.pop()[len("source="):]
            if source not in SOURCES:
                raise SidecarError(f"{path}:{no}: unknown source {source!r}")
        kind, args = words[0], tuple(words[1:])
        if kind == "option":
            for a in args:
                k, _, v = a.partition("=")
                options[k] = int(v) if v else True
            continue
        arity = {"check": (2, 3), "validate": (3, 3), "model": (3, 3), "stable": (3, 3)}.get(kind)
        if arity is None or not arity[0] <= len(args) <= arity[1]:
            raise SidecarError(f"{path}:{no}: cannot read {text!r}")
        out.append(Expectation(no, kind, args, source))
    return options, out


def discover(root: Optional[Path] = None) -> list:
    root = Path(root) if root else find_corpus()
    cases = []
    for theory in sorted(root.rglob("*.foid")):
        side = theory.with_suffix(".expect")
        if side.exists():
            options, exps = read_sidecar(side)
            cases.append(CorpusCase(theory, exps, options))
    return cases


def _records(text: str) -> list:
    out = []
    for line in text.splitlines():
        rec = {}
        for w in shlex.split(line):
            k, _, v = w.partition("=")
            rec[k] = v
        out.append(rec)
    return out


def _codes(field: str) -> set:
    return {c for c in field.split(",") if c}


def _run(argv: list) -> tuple:
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(argv, out, err)
    return code, out.getvalue(), err.getvalue()


def _flags(options: dict) -> list:
    flags = []
    if options.get("wide_functions"):
        flags.append("--wide-functions")
    for k in ("max_n", "cap"):
        if k in options:
            flags += [f"--{k.replace('_', '-')}", str(options[k])]
    return flags


def _evaluate(case: CorpusCase, e: Expectation, cache: dict) -> tuple:
    f = str(case.theory)
    if e.kind == "check":
        name, verdict = e.args[0], e.args[1]
        if f not in cache:
            cache[f] = _run(["check", "--format", "structured", f])
        _, out, err = cache[f]
        recs = [r for r in _records(out) if r.get("proof") == name and "status" in r]
        if not recs:
            return False, f"no proof named {name}" + (f" ({err.strip()})" if err.strip() else "")
        r = recs[0]
        if verdict == "ok":
            want = ""
            if len(e.args) == 3:
                if not e.args[2].startswith("lint="):
                    return False, "malformed lint field"
                want = e.args[2][len("lint="):]
            if r["status"] != "ok":
                return False, f"rejected with {r.get('code')}"
            if _codes(r["warnings"]) != _codes(want):
                return False, f"lint warnings {r['warnings'] or 'none'}, expected {want or 'none'}"
            return True, f"ok in {r['seconds']} s"
        want = e.args[2] if len(e.args) == 3 else None
        if r["status"] == "ok":
            return False, "accepted, expected a rejection"
        if want and r.get("code") != want:
            return False, f"rejected with {r.get('code')}, expected {want}"
        return True, f"rejected with {r.get('code')}"
    if e.kind == "validate":
        seq, sem, want = e.args
        _, out, err = _run(["validate", "--format", "structured", "--semantics", sem, *_flags(case.options), f, seq])
        recs = _records(out)
        if not recs:
            return False, err.strip() or "no output"
        got = recs[0].get("result")
        return got == want, f"{got} up to size {recs[0].get('max_n')}"
    if e.kind == "model":
        d, ctx, want = e.args
        _, out, err = _run(["model", "--format", "structured", f, d, ctx])
        recs = _records(out)
        if not recs:
            return False, err.strip() or "no output"
        got = f"{recs[0]['model']}; {'total' if recs[0]['total'] == 'true' else 'non-total'}"
        return got == want, got
    d, ctx, want = e.args
    _, out, err = _run(["stable", "--format", "structured", f, d, ctx])
    recs = [r for r in _records(out) if "count" in r]
    if not recs:
        return False, err.strip() or "no output"
    return recs[0]["count"] == want, f"{recs[0]['count']} stable models"


def run_corpus(root: Optional[Path] = None) -> CorpusReport:
    report = CorpusReport()
    base = Path(root) if root else find_corpus()
    for case in discover(base):
        cache: dict = {}
        for e in case.expectations:
            t0 = time.perf_counter()
            try:
                ok, detail = _evaluate(case, e, cache)
            except Exception as exc:  # a crash is a failed expectation, not a crashed run
                ok, detail = False, f"{type(exc).__name__}: {exc}"
            report.results.append(CaseResult(str(case.theory.relative_to(base)), e.line, e.kind,
                                             " ".join(e.args[:2]), ok, detail,
                                             time.perf_counter() - t0))
    return report


# ------------------------------------------------------------- mutations

@dataclass(frozen=True)
class CorpusProof:
    file: str
    name: str
    proof: Proof
    sequent: Sequent


@dataclass(frozen=True)
class Mutation:
    origin: str
    kind: str
    node: int
    proof: Proof
    sequent: Sequent


MUTATION_KINDS = ("witness", "drop_minor", "flip_principal", "flip_hypothesis",
                  "eigenvariable", "defl_side")

_FLIP = {"notL": "notR", "andL": "andR", "orL": "orR", "impL": "impR", "iffL": "iffR"}
_FLIP.update({v: k for k, v in _FLIP.items()})


def corpus_proofs(root: Optional[Path] = None) -> list:
    """Elaborated proofs of every accepted corpus file (rejected/ excluded)."""
    base = Path(root) if root else find_corpus()
    out = []
    for theory in sorted(base.glob("*.foid")):
        doc = parse_file(str(theory))
        for script in doc.proofs:
            out.append(CorpusProof(theory.name, script.name, doc.elaborate(script),
                                   doc.sequents[script.target]))
    return out


def _prune(p: Proof, i: int, keep: tuple) -> Proof:
    """Copy of p where node i keeps only the children at positions keep; dead nodes go."""
    nodes = list(p.nodes)
    n = nodes[i]
    nodes[i] = ProofNode(n.sequent, n.rule, tuple(n.children[k] for k in keep))
    order, stack = [], [p.root]
    while stack:
        j = stack.pop()
        order.append(j)
        stack.extend(nodes[j].children)
    index = {old: new for new, old in enumerate(order)}
    fresh = [ProofNode(nodes[j].sequent, nodes[j].rule, tuple(index[c] for c in nodes[j].children))
             for j in order]
    return Proof(fresh, 0)


def _augment(p: Proof, extra) -> Proof:
    """Add formula extra to the left of every sequent, templates included."""
    def grow(sq):
        return None if sq is None else Sequent(sq.left | {extra}, sq.right)
    nodes = [ProofNode(grow(n.sequent), replace(n.rule, sequent=grow(n.rule.sequent)), n.children)
             for n in p.nodes]
    return Proof(nodes, p.root)


def _fresh_obj(p: Proof) -> Obj:
    names = set()
    for n in p.nodes:
        names.update(str(f) for f in n.sequent.left | n.sequent.right)
    k = 0
    while f"w{k}" in " ".join(names):
        k += 1
    return Obj(f"w{k}")


def mutations(cp: CorpusProof) -> list:
    """Structurally wrong variants of one proof, each with the kind of damage done.

    witness          an allL/exR/defR witness swapped for a fresh object
    drop_minor       a defL minor premise (with its subtree) removed
    flip_principal   a propositional left rule turned into its right twin and back
    flip_hypothesis  a defL induction hypothesis F replaced by ~F
    eigenvariable    x = x added everywhere, x the variable of an allR/exL
    defl_side        y = y added everywhere, y a rule-bound symbol of a defL target
    """
    p, out = cp.proof, []
    origin = f"{cp.file}:{cp.name}"

    def emit(kind, i, q, seq=cp.sequent):
        out.append(Mutation(origin, kind, i, q, seq))

    w = _fresh_obj(p)
    eigen_seen, side_seen = set(), set()
    for i, n in enumerate(p.nodes):
        app = n.rule
        if app.tag in ("allL", "exR") and app.terms:
            phi = app.formula
            if substitute(phi.body, w, phi.var) != substitute(phi.body, app.terms[0], phi.var):
                emit("witness", i, p.replace_node(i, replace(n, rule=replace(app, terms=(w,)))))
        if app.tag == "defR" and app.terms:
            r = app.definition.rules[app.index]
            for k in range(len(app.terms)):
                terms = app.terms[:k] + (w,) + app.terms[k + 1:]
                if substitute_many(r.body, dict(zip(r.bound, terms))) != substitute_many(r.body, dict(zip(r.bound, app.terms))):
                    emit("witness", i, p.replace_node(i, replace(n, rule=replace(app, terms=terms))))
        if app.tag in ("defL", "defL2") and len(n.children) > 1:
            for k in range(len(n.children) - 1):
                keep = tuple(j for j in range(len(n.children)) if j != k)
                emit("drop_minor", i, _prune(p, i, keep))
        if app.tag in _FLIP:
            emit("flip_principal", i, p.replace_node(i, replace(n, rule=replace(app, tag=_FLIP[app.tag]))))
        if app.tag in ("defL", "defL2"):
            for k, h in enumerate(app.hyps):
                hyps = app.hyps[:k] + (Hypothesis(h.pred, h.vars, Not(h.formula)),) + app.hyps[k + 1:]
                emit("flip_hypothesis", i, p.replace_node(i, replace(n, rule=replace(app, hyps=hyps))))
            for r in app.definition.rules:
                for y in r.bound:
                    if y not in side_seen:
                        side_seen.add(y)
                        q = _augment(p, Eq(Obj(y), Obj(y)))
                        emit("defl_side", i, q, q.conclusion)
        if app.tag in ("allR", "exL") and app.formula.var not in eigen_seen:
            x = app.formula.var
            eigen_seen.add(x)
            q = _augment(p, Eq(Obj(x), Obj(x)))
            emit("eigenvariable", i, q, q.conclusion)
    return out


def corpus_mutations(root: Optional[Path] = None) -> list:
    return [m for cp in corpus_proofs(root) for m in mutations(cp)]


def main(argv: Optional[list] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    report = run_corpus(Path(argv[0]) if argv else None)
    print(report.summary())
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
