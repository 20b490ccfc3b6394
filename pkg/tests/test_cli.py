import io
import subprocess
import sys

import pytest

from conftest import CORPUS, FIXTURES
from foid import cli
from foid.parser import parse


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def test_check_accepts_the_corpus_file():
    code, out, _ = run("check", CORPUS / "liar.foid")
    assert code == 0 and "NonTotal: ok" in out


def test_check_rejects_a_mutated_file(tmp_path):
    text = (CORPUS / "liar.foid").read_text()
    bad = tmp_path / "liar.foid"
    bad.write_text(text.replace("defR(Liar; 0) { ax }", "defR(Liar; 0) { ax @ <~P |- ~P> }", 1))
    code, out, err = run("check", bad)
    assert code == 1 and "PREMISE_MISMATCH" in err and "failed: 1 of 1 proof" in out
    code, out, _ = run("check", "--format", "structured", bad)
    assert code == 1 and "code=PREMISE_MISMATCH" in out
    # a step whose conclusion cannot be reconstructed also fails the file
    bad.write_text(text.replace("defR(Liar; 0)", "defR(Liar; 3)", 1))
    code, _, err = run("check", bad)
    assert code == 1 and "annotate it" in err


def test_lint_reports_warnings():
    code, out, _ = run("lint", CORPUS / "cut_mixed.foid")
    assert code == 0 and "NON_ELEMENTARY_CUT" in out


def test_model_and_stable():
    assert run("model", CORPUS / "liar.foid", "Liar", "Point")[:2] == (0, "P: u; non-total\n")
    code, out, _ = run("stable", CORPUS / "choice.foid", "Choice", "Point")
    assert code == 0 and out.splitlines() == ["model 1: P: t; Q: f", "model 2: P: f; Q: t", "2 stable models"]
    code, out, _ = run("model", "--semantics", "stable", CORPUS / "liar.foid", "Liar", "Point")
    assert code == 0


def test_validate_exit_codes():
    code, out, _ = run("validate", CORPUS / "choice.foid", "NoModel")
    assert code == 1 and "counterexample under stable at size 1" in out
    code, out, _ = run("validate", "--semantics", "wf", CORPUS / "choice.foid", "NoModel")
    assert code == 0 and "no counterexample under wf up to size 3" in out
    code, out, _ = run("validate", "--format", "structured", "--semantics", "stable",
                       CORPUS / "choice.foid", "NoModel")
    assert "result=counterexample" in out and "size=1" in out


def test_export_fo_with_hypotheses():
    code, out, _ = run("export-fo", FIXTURES / "nat.foid", "Closed",
                       "--hypotheses", FIXTURES / "nat.hyp")
    assert code == 0
    doc = parse(out)
    assert "PhiNat_ind0_Nat" in doc.formulas
    assert "sequent Approx" in out and "[PhiNat]" not in out
    code, out, _ = run("export-fo", FIXTURES / "nat.foid", "Closed")
    assert code == 0 and "PhiNat_ind0_Nat" not in out


@pytest.mark.parametrize("argv, fragment", [
    (["check", "missing.foid"], "No such file"),
    (["model", str(CORPUS / "liar.foid"), "Nope", "Point"], "no definition named 'Nope'"),
    (["validate", str(CORPUS / "liar.foid"), "Nope"], "Nope"),
])
def test_usage_errors(argv, fragment):
    code, _, err = run(*argv)
    assert code == 2 and fragment in err


def test_parse_errors_report_location(tmp_path):
    bad = tmp_path / "bad.foid"
    bad.write_text("predicate P/0.\nsequent S: P |- Q.\n")
    code, _, err = run("check", bad)
    assert code == 2 and "bad.foid:2:" in err


def test_bad_arguments_and_module_entry():
    assert run("frobnicate")[0] == 2
    proc = subprocess.run([sys.executable, "-m", "foid.cli", "check", str(CORPUS / "liar.foid")],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "ok (1 proof)" in proc.stdout
