import shutil

import pytest

from conftest import CORPUS
from foid import corpus
from foid.kernel import check


@pytest.fixture
def small(tmp_path):
    root = tmp_path / "corpus"
    root.mkdir()
    for name in ("liar", "choice"):
        for ext in (".foid", ".expect"):
            shutil.copy(CORPUS / f"{name}{ext}", root / f"{name}{ext}")
    return root


def test_small_corpus_passes(small):
    report = corpus.run_corpus(small)
    assert report.ok and len(report.results) == 9
    assert report.summary().endswith("9/9 expectations met")


def test_wrong_expectation_is_reported(small):
    side = small / "choice.expect"
    side.write_text(side.read_text().replace("stable Choice Point 2", "stable Choice Point 3"))
    report = corpus.run_corpus(small)
    assert not report.ok
    (bad,) = report.failures()
    assert bad.kind == "stable" and bad.file == "choice.foid"
    assert "FAIL choice.foid" in report.summary()


@pytest.mark.parametrize("line", [
    "check Foo ok source=rumour",
    "frobnicate X",
    "validate S wf",
    'model D S "unterminated',
])
def test_sidecar_errors(small, line):
    (small / "liar.expect").write_text(line + "\n")
    with pytest.raises(corpus.SidecarError) as info:
        corpus.read_sidecar(small / "liar.expect")
    assert "liar.expect:1" in str(info.value)


def test_sidecar_options_and_comments(small):
    (small / "liar.expect").write_text("// note\noption max_n=2 wide_functions\ncheck NonTotal ok  // trailing\n")
    options, exps = corpus.read_sidecar(small / "liar.expect")
    assert options == {"max_n": 2, "wide_functions": True}
    assert [(e.line, e.kind, e.args, e.source) for e in exps] == [(3, "check", ("NonTotal", "ok"), "derived")]


def test_find_corpus(small, monkeypatch, tmp_path):
    monkeypatch.setenv("FOID_CORPUS", str(small))
    assert corpus.find_corpus() == small
    monkeypatch.delenv("FOID_CORPUS")
    nested = tmp_path / "a" / "b"
    nested.mkdir(parents=True)
    assert corpus.find_corpus(nested) == small
    assert corpus.main([str(small)]) == 0


def test_mutations_are_rejected(small):
    proofs = corpus.corpus_proofs(small)
    assert [cp.name for cp in proofs] == ["NonTotal"]
    muts = corpus.corpus_mutations(small)
    assert muts and {m.kind for m in muts} <= set(corpus.MUTATION_KINDS)
    for m in muts:
        assert check(m.proof, m.sequent) is not None, (m.kind, m.node)
    for cp in proofs:
        assert check(cp.proof, cp.sequent) is None
