import csv

import pytest

from clvernacular import batch, document as D, engine
from clvernacular.batch import BatchConfig, read_manifest, run

from conftest import corpus

FAST = engine.SearchLimits(max_steps=512, max_splits=3, wall_clock=5.0)


def reference():
    with open(corpus("reference_summary.tsv"), encoding="utf-8") as fh:
        return [(r["name"], r["status"]) for r in csv.DictReader(fh, delimiter="\t")]


@pytest.fixture(scope="module")
def corpus_run():
    cfg = BatchConfig(engine.SearchLimits(wall_clock=20.0), frontpage=D.Frontpage(date="2026-01-01"),
                      chapter="tarski", theory_name="tarski")
    return run(read_manifest(corpus("manifest.txt")), cfg)


def test_corpus_matches_reference(corpus_run):
    assert [(e.name, e.status) for e in corpus_run.entries] == reference()


def test_corpus_document_checks(corpus_run):
    results = D.check_document(corpus_run.document)
    assert results and all(results_ok for _, results_ok in results)
    assert D.serialize(D.parse(D.serialize(corpus_run.document))) == D.serialize(corpus_run.document)


def test_summary_format(corpus_run):
    rows = corpus_run.summary().splitlines()
    assert rows[0] == "name\tstatus\ttime\tsize"
    name, status, time, size = rows[-1].split("\t")
    assert (name, status, size) == ("th_4_19", "PROVED", "17")
    assert float(time) >= 0 and len(time.split(".")[1]) == 3


def test_manifest_comments_and_relative_paths(write, tmp_path):
    m = write("m.txt", "# header\n\na.p  # first\n/abs/b.p\n")
    assert read_manifest(m) == [str(tmp_path / "a.p"), "/abs/b.p"]


def manifest(write, problems):
    names = []
    for name, text in problems:
        write(name, text)
        names.append(name)
    return read_manifest(write("m.txt", "\n".join(names) + "\n"))


def test_later_items_cite_earlier_theorems(write):
    paths = manifest(write, [
        ("one.p", "fof(ax, axiom, ![X]: (p(X) => q(X))).\n"
                  "fof(lem, conjecture, ![X]: (p(X) => q(X)))."),
        ("two.p", "fof(lem, axiom, ![X]: (p(X) => q(X))).\n"
                  "fof(thm, conjecture, p(a) => q(a))."),
    ])
    res = run(paths, BatchConfig(FAST))
    assert [e.status for e in res.entries] == ["PROVED", "PROVED"]
    assert res.entries[1].deps == ("lem",)
    thm = res.document.chapters[0].items[1]
    assert "lem" in {s.rule.axiom for s in thm.proofs[0].steps}
    # cited items are theorems of the document, not shared axioms
    assert "lem" not in {a.name for a in res.document.theory.axioms}
    assert all(ok for _, ok in D.check_document(res.document))


def test_unproved_dependency_is_dropped(write):
    paths = manifest(write, [
        ("one.p", "fof(lem, conjecture, p(a))."),
        ("two.p", "fof(lem, axiom, p(a)).\nfof(thm, conjecture, p(a))."),
    ])
    res = run(paths, BatchConfig(FAST))
    assert [e.status for e in res.entries] == ["EXHAUSTED", "EXHAUSTED"]
    items = res.document.chapters[0].items
    assert [it.is_theorem for it in items] == [False, False]


def test_citation_of_later_item_is_dropped(write):
    paths = manifest(write, [
        ("one.p", "fof(lem, axiom, p(a)).\nfof(thm, conjecture, p(a))."),
        ("two.p", "fof(lem, conjecture, p(a))."),
    ])
    res = run(paths, BatchConfig(FAST))
    assert [e.status for e in res.entries] == ["EXHAUSTED", "EXHAUSTED"]
    assert res.entries[0].deps == ()


def test_conflicting_redefinition_is_error(write):
    paths = manifest(write, [
        ("one.p", "fof(ax, axiom, p(a)).\nfof(g1, conjecture, p(a))."),
        ("two.p", "fof(ax, axiom, q(a)).\nfof(g2, conjecture, q(a))."),
        ("three.p", "fof(ax, axiom, p(a)).\nfof(g3, conjecture, p(a))."),
    ])
    res = run(paths, BatchConfig(FAST))
    assert [e.status for e in res.entries] == ["PROVED", batch.ERROR, "PROVED"]
    assert "declared differently" in res.entries[1].message
    assert [it.name for it in res.document.items()] == ["g1", "g3"]


def test_load_errors_become_rows(write, tmp_path):
    paths = manifest(write, [("bad.p", "fof(a, axiom, p(f(X))).\nfof(g, conjecture, p(a)).")])
    paths.append(str(tmp_path / "missing.p"))
    res = run(paths, BatchConfig(FAST))
    assert [(e.name, e.status) for e in res.entries] == [("bad.p", "ERROR"), ("missing.p", "ERROR")]
    assert list(res.document.items()) == []


def test_duplicate_item_names(write):
    paths = manifest(write, [("a.p", "fof(g, conjecture, p(a) => p(a))."),
                             ("b.p", "fof(g, conjecture, q(a) => q(a)).")])
    res = run(paths, BatchConfig(FAST))
    assert [e.status for e in res.entries] == ["PROVED", batch.ERROR]


def test_empty_manifest():
    res = run([], BatchConfig(FAST))
    assert res.entries == [] and res.summary() == "name\tstatus\ttime\tsize\n"
    assert D.validate(D.serialize(res.document)) == []


def test_jobs_do_not_change_document(write):
    problems = [(f"p{i}.p", f"fof(ax{i}, axiom, ![X]: (p{i}(X) => p{i + 1}(X))).\n"
                            f"fof(g{i}, conjecture, p{i}(a) => p{i + 1}(a)).") for i in range(6)]
    problems.append(("last.p", "fof(g0, axiom, p0(a) => p1(a)).\n"
                               "fof(g3, axiom, p3(a) => p4(a)).\n"
                               "fof(last, conjecture, p0(a) => p1(a))."))
    paths = manifest(write, problems)
    serial = run(paths, BatchConfig(FAST, jobs=1))
    parallel = run(paths, BatchConfig(FAST, jobs=3))
    assert D.serialize(serial.document) == D.serialize(parallel.document)
    assert [(e.name, e.status, e.size) for e in serial.entries] == \
           [(e.name, e.status, e.size) for e in parallel.entries]
    assert serial.entries[-1].deps == ("g0", "g3")
