"""Command-line front end.

Exit codes: 0 success, 1 a proof or sequent failed, 2 usage or input error.
Structured output (--format structured) prints one record per line as
space-separated key=value fields; values containing spaces are quoted.
"""
from __future__ import annotations

import argparse
import io
import os
import shlex
import sys
import time
from dataclasses import dataclass
from typing import Optional, TextIO

from . import core
from .kernel import ElaborationError, check, indscheme_instance, lint, matimps
from .parser import Document, ParseError, parse, parse_file, parse_hypothesis
from .printer import show, show_sequent
from .semantics_core import ThreeValuedStructure
from .stable_engine import SpaceTooLarge, stable_models
from .syntax import Def, FoidError, Sequent, free_objects, symbols_of
from .validator import (ABORTED, COUNTEREXAMPLE, DEFAULT_MAX_N, SEMANTICS,
                        VocabularyError, validate)
from .wf_engine import well_founded_model, wf_model

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DEFAULT_CAP = 20


class UsageError(FoidError):
    pass


@dataclass
class Config:
    max_n: int = DEFAULT_MAX_N
    cap: int = DEFAULT_CAP
    semantics: str = "wf"
    format: str = "text"
    color: bool = False
    verbose: bool = False
    wide_functions: bool = False

    def __post_init__(self):
        if self.max_n < 1 or self.cap < 1:
            raise UsageError("--max-n and --cap must be positive")
        if self.format not in ("text", "structured"):
            raise UsageError(f"unknown format {self.format!r}")


class Output:
    """Collects stdout and stderr text so commands can also run in-process."""

    def __init__(self, cfg: Config, out: Optional[TextIO] = None, err: Optional[TextIO] = None):
        self.cfg = cfg
        self.out = out if out is not None else io.StringIO()
        self.err = err if err is not None else io.StringIO()

    def _paint(self, text: str, code: str) -> str:
        return f"\033[{code}m{text}\033[0m" if self.cfg.color else text

    def ok(self, text: str) -> str:
        return self._paint(text, "32")

    def bad(self, text: str) -> str:
        return self._paint(text, "31")

    def line(self, text: str = ""):
        print(text, file=self.out)

    def error(self, text: str):
        print(text, file=self.err)

    def record(self, **fields):
        parts = []
        for k, v in fields.items():
            v = "" if v is None else str(v)
            plain = v and not any(c.isspace() or c in "\"'\\" for c in v)
            parts.append(f"{k}={v if plain else shlex.quote(v)}")
        print(" ".join(parts), file=self.out)

    @property
    def structured(self) -> bool:
        return self.cfg.format == "structured"


def _load(path: str) -> Document:
    try:
        return parse_file(path)
    except OSError as e:
        raise UsageError(f"{path}: {e.strerror or e}") from None


def _lookup(table: dict, name: str, what: str, path: str):
    try:
        return table[name]
    except KeyError:
        known = ", ".join(sorted(table)) or "none"
        raise UsageError(f"{path}: no {what} named {name!r} (known: {known})") from None


def _plural(n: int, word: str) -> str:
    return f"{n} {word}" + ("" if n == 1 else "s")


# ------------------------------------------------------------------ commands

def cmd_check(paths: list, cfg: Config, o: Output, lint_only: bool = False) -> int:
    failed = 0
    total = 0
    for path in paths:
        doc = _load(path)
        prefix = f"{path}: " if len(paths) > 1 else ""
        file_failed = 0
        for script in doc.proofs:
            total += 1
            t0 = time.perf_counter()
            try:
                proof = doc.elaborate(script)
            except ElaborationError as e:
                file_failed += 1
                o.error(f"{path}: proof {script.name}: {e}")
                if o.structured:
                    o.record(file=path, proof=script.name, status="error", code="ELABORATION", message=str(e))
                continue
            err = check(proof, doc.sequents[script.target])
            dt = time.perf_counter() - t0
            warnings = lint(proof) if err is None else []
            if err is not None:
                file_failed += 1
                span = f"{script.span}: " if script.span is not None else f"{path}: "
                o.error(f"{span}proof {script.name}: {err.describe()}")
                if err.node is not None and cfg.verbose:
                    o.error(f"    conclusion there: {show_sequent(proof.nodes[err.node].sequent, doc.names())}")
            if o.structured:
                o.record(file=path, proof=script.name, status="ok" if err is None else "error",
                         code="" if err is None else err.code.value,
                         path="" if err is None else "/".join(map(str, err.path)),
                         seconds=f"{dt:.4f}", warnings=",".join(w.code for w in warnings))
                for w in warnings:
                    o.record(file=path, proof=script.name, warning=w.code, node=w.node, message=w.message)
            else:
                if err is None and (not lint_only or warnings or cfg.verbose):
                    o.line(f"{prefix}{script.name}: {o.ok('ok')}" + (f" ({dt * 1000:.1f} ms)" if cfg.verbose else ""))
                for w in warnings:
                    o.line(f"  warning: {w}")
        failed += file_failed
    n_ok = total - failed
    if not o.structured:
        if total == 0:
            o.line("0 proofs")
        elif failed == 0:
            o.line(o.ok(f"ok ({_plural(total, 'proof')})"))
        else:
            o.line(o.bad(f"failed: {failed} of {_plural(total, 'proof')}") + f" ({n_ok} ok)")
    else:
        o.record(summary="check", proofs=total, failed=failed)
    return EXIT_OK if failed == 0 else EXIT_FAIL


def _three_valued_line(A: ThreeValuedStructure, preds, total: bool) -> str:
    return f"{A.describe(preds)}; {'total' if total else 'non-total'}"


def cmd_model(path: str, def_name: str, ctx_name: str, cfg: Config, o: Output) -> int:
    doc = _load(path)
    defn = _lookup(doc.definitions, def_name, "definition", path)
    ctx = _lookup(doc.structures, ctx_name, "structure", path)
    preds = sorted(defn.defined())
    if cfg.semantics == "stable":
        return _print_stable(defn, ctx, preds, cfg, o)
    if cfg.verbose:
        A, trace = well_founded_model(defn, ctx)
        log = trace.log(preds)
    else:
        A, log = wf_model(defn, ctx), None
    total = A.is_two_valued()
    if o.structured:
        o.record(definition=def_name, context=ctx_name, semantics="wf", model=A.describe(preds),
                 total=str(total).lower())
    else:
        if log:
            o.line(log)
        o.line(_three_valued_line(A, preds, total))
    return EXIT_OK


def _print_stable(defn, ctx, preds, cfg: Config, o: Output) -> int:
    models = stable_models(defn, ctx, cap=cfg.cap)
    for k, M in enumerate(models, 1):
        text = ThreeValuedStructure.two_valued(M).describe(preds)
        if o.structured:
            o.record(semantics="stable", index=k, model=text)
        else:
            o.line(f"model {k}: {text}")
    if o.structured:
        o.record(semantics="stable", count=len(models))
    else:
        o.line(_plural(len(models), "stable model"))
    return EXIT_OK


def cmd_stable(path: str, def_name: str, ctx_name: str, cfg: Config, o: Output) -> int:
    doc = _load(path)
    defn = _lookup(doc.definitions, def_name, "definition", path)
    ctx = _lookup(doc.structures, ctx_name, "structure", path)
    return _print_stable(defn, ctx, sorted(defn.defined()), cfg, o)


def cmd_validate(path: str, seq_name: str, cfg: Config, o: Output) -> int:
    doc = _load(path)
    seq = _lookup(doc.sequents, seq_name, "sequent", path)
    sems = SEMANTICS if cfg.semantics == "both" else (cfg.semantics,)
    code = EXIT_OK
    for sem in sems:
        t0 = time.perf_counter()
        v = validate(seq, sem, cfg.max_n, cfg.cap, allow_wide_functions=cfg.wide_functions)
        dt = time.perf_counter() - t0
        if v.result in (COUNTEREXAMPLE, ABORTED):
            code = EXIT_FAIL
        if o.structured:
            o.record(sequent=seq_name, seconds=f"{dt:.3f}", **dict(v.records()))
        else:
            text = v.describe()
            o.line(f"{seq_name}: " + (o.ok(text) if v.ok else o.bad(text))
                   + (f" ({v.visited} nodes, {dt:.2f} s)" if cfg.verbose else ""))
    return code


def read_hypotheses(text: str, doc: Document, file: str = "<hypotheses>") -> list:
    """Lines 'DefName Pred: Hyp; Hyp; ...' -> [(definition, pred, [Hypothesis])]."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("//", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        words = head.split()
        if not sep or len(words) != 2:
            raise UsageError(f"{file}:{lineno}: expected 'Definition Pred: hypothesis; ...'")
        defn = _lookup(doc.definitions, words[0], "definition", file)
        hyps = [parse_hypothesis(h.strip(), doc, f"{file}:{lineno}")
                for h in rest.rstrip(".").split(";") if h.strip()]
        out.append((defn, words[1], hyps))
    return out


def export_fo(doc: Document, seq: Sequent, schemes: list) -> str:
    """A pure-FO document: material implications of every definition in seq,
    the requested induction scheme instances, and seq with definitions replaced by them."""
    names = doc.names()
    defs = seq.definitions()
    formulas = []
    for d in defs:
        label = names.get(d, "Def")
        for k, f in enumerate(matimps(d)):
            formulas.append((f"{label}_rule{k}", f))
    for k, (d, pred, hyps) in enumerate(schemes):
        label = names.get(d, "Def")
        formulas.append((f"{label}_ind{k}_{pred}", indscheme_instance(d, pred, hyps)))
    symbols: dict = {}
    for f in list(seq.left | seq.right) + [f for _, f in formulas]:
        for s in symbols_of(f):
            symbols.setdefault((s.kind, s.name), s)
    free = set()
    for f in list(seq.left | seq.right):
        free |= free_objects(f)
    lines = []
    objs = sorted(n for (k, n) in symbols if k == "object" and n in free)
    if objs:
        lines.append(f"object {', '.join(objs)}.")
    funcs = sorted((n, s.arity) for (k, n), s in symbols.items() if k == "function")
    if funcs:
        lines.append("function " + ", ".join(f"{n}/{a}" for n, a in funcs) + ".")
    preds = sorted((n, s.arity) for (k, n), s in symbols.items() if k == "predicate")
    if preds:
        lines.append("predicate " + ", ".join(f"{n}/{a}" for n, a in preds) + ".")
    lines.append("")
    for label, f in formulas:
        lines.append(f"formula {label}: {show(f)}.")
    left = [f"[{label}]" for label, _ in formulas] + sorted(show(f, names) for f in seq.left if not isinstance(f, Def))
    right = sorted(show(f, names) for f in seq.right)
    lines.append("")
    lines.append(f"sequent Approx: {', '.join(left)} |- {', '.join(right)}.")
    return "\n".join(lines) + "\n"


def cmd_export_fo(path: str, seq_name: str, hyp_path: Optional[str], cfg: Config, o: Output) -> int:
    doc = _load(path)
    seq = _lookup(doc.sequents, seq_name, "sequent", path)
    schemes = []
    if hyp_path is not None:
        try:
            with open(hyp_path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise UsageError(f"{hyp_path}: {e.strerror or e}") from None
        schemes = read_hypotheses(text, doc, hyp_path)
    text = export_fo(doc, seq, schemes)
    parse(text, "<export>")  # the export must itself be a valid document
    o.out.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-n", type=int, default=DEFAULT_MAX_N, help="largest domain size to search")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP,
                        help="effort cap: 2^cap search nodes, cap unknown atoms for stable models")
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("-v", "--verbose", action="store_true")
    common.add_argument("--wide-functions", action="store_true",
                        help="allow enumerating functions of arity 2 or more")

    p = argparse.ArgumentParser(prog="foid", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version="foid 0.1.0 (" + core.BACKEND + " kernels)")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="check every proof in the files")
    c.add_argument("files", nargs="+")
    c = sub.add_parser("lint", parents=[common], help="check proofs and report lint warnings")
    c.add_argument("files", nargs="+")
    c = sub.add_parser("model", parents=[common], help="well-founded or stable models of a definition")
    c.add_argument("file")
    c.add_argument("definition")
    c.add_argument("context")
    c.add_argument("--semantics", choices=("wf", "stable"), default="wf")
    c = sub.add_parser("stable", parents=[common], help="all stable models of a definition")
    c.add_argument("file")
    c.add_argument("definition")
    c.add_argument("context")
    c = sub.add_parser("validate", parents=[common], help="search for a finite counterexample")
    c.add_argument("file")
    c.add_argument("sequent")
    c.add_argument("--semantics", choices=("wf", "stable", "both"), default="both")
    c = sub.add_parser("export-fo", parents=[common], help="first-order approximation of a sequent")
    c.add_argument("file")
    c.add_argument("sequent")
    c.add_argument("--hypotheses", metavar="FILE",
                   help="lines 'Definition Pred: Q(x) := F; ...' selecting induction scheme instances")
    return p


def run(argv: list, out: Optional[TextIO] = None, err: Optional[TextIO] = None) -> int:
    """Run one command; returns the exit code instead of exiting."""
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else EXIT_USAGE
    color = (args.format == "text" and not os.environ.get("FOID_NO_COLOR")
             and hasattr(out, "isatty") and out.isatty())
    try:
        cfg = Config(max_n=args.max_n, cap=args.cap, semantics=getattr(args, "semantics", "wf"),
                     format=args.format, color=color, verbose=args.verbose,
                     wide_functions=args.wide_functions)
        o = Output(cfg, out, err)
        cmd = args.command
        if cmd in ("check", "lint"):
            return cmd_check(args.files, cfg, o, lint_only=cmd == "lint")
        if cmd == "model":
            return cmd_model(args.file, args.definition, args.context, cfg, o)
        if cmd == "stable":
            return cmd_stable(args.file, args.definition, args.context, cfg, o)
        if cmd == "validate":
            return cmd_validate(args.file, args.sequent, cfg, o)
        return cmd_export_fo(args.file, args.sequent, args.hypotheses, cfg, o)
    except (ParseError, UsageError, VocabularyError) as e:
        print(f"error: {e}", file=err)
        return EXIT_USAGE
    except SpaceTooLarge as e:
        print(f"error: {e}; raise --cap to go further", file=err)
        return EXIT_FAIL
    except FoidError as e:
        print(f"error: {e}", file=err)
        return EXIT_USAGE


def main(argv: Optional[list] = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
