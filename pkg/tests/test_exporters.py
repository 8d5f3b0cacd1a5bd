import re

import pytest
from hypothesis import given, settings, strategies as st

import gen
from clvernacular import document as D
from clvernacular import engine, tptp
from clvernacular.export import EXTENSIONS, TARGETS, UnsupportedDocument, export
from clvernacular.export.natural import _Sentences, lines
from clvernacular.layout import DEFAULT, bundled
from clvernacular.logic import NamedFormula
from clvernacular.proof import CaseSplit, ProofTree

from conftest import between, golden, normalize


@pytest.fixture(scope="module")
def doc():
    return D.parse(golden("th_4_19.xml"))


def render(doc, target, layout=None):
    return export(doc, target, layout if layout is not None else bundled(), "th_4_19")


# -- golden listings ----------------------------------------------------------------

def test_isar_golden(doc):
    out = render(doc, "isar").main
    assert between(out, "lemma th_4_19", "end") == normalize(golden("th_4_19.thy"))


def test_coq_golden(doc):
    out = render(doc, "coq").main
    assert between(out, "Theorem th_4_19", "Qed.") == normalize(golden("th_4_19.v"))


def test_latex_golden(doc):
    out = render(doc, "tex").main
    got = between(out, "\\begin{theorem}[th\\_4\\_19]", "QED")
    # the step counter reset is typesetting setup, not part of the listing
    got = [l for l in got if not l.startswith("\\setcounter")]
    assert got == normalize(golden("th_4_19.tex"))


def test_plain_contains_golden_sentences(doc):
    sentences = re.findall(r"\\proofstep\{\d+\}\s*\{(.*)\}\s*$", golden("th_4_19.tex"), re.M)
    assert len(sentences) == 21
    plain = render(doc, "txt", DEFAULT).main
    html = render(doc, "html").main
    latex = render(doc, "tex").main
    for s in sentences:
        assert s in latex
    # the plain text carries the same sentences with notation rendered as text
    for s in sentences:
        text = s.replace("$", "").replace("\\_", "_").replace("\\neq", "≠")
        if "\\cong" not in text:
            assert text in plain
    assert html.count("<li") == 21


def test_auxiliary_files(doc):
    assert [n for n, _ in render(doc, "coq").auxiliary] == ["VernacularTactics.v"]
    tex = render(doc, "tex")
    assert [n for n, _ in tex.auxiliary] == ["vernacular.sty"]
    assert "proofstep" in tex.auxiliary[0][1]
    assert render(doc, "isar").auxiliary == ()


def test_xml_target_is_serialization(doc):
    assert render(doc, "xml").main == golden("th_4_19.xml")


def test_extensions_cover_targets():
    assert set(EXTENSIONS) == set(TARGETS)
    with pytest.raises(ValueError):
        export(D.VernacularDocument(), "pdf")


def test_html_nests_case_lists(doc):
    html = render(doc, "html").main
    depth = deepest = 0
    for tag in re.findall(r"</?ul", html):
        depth += 1 if tag == "<ul" else -1
        deepest = max(deepest, depth)
    assert depth == 0 and deepest == 3
    # each case is a list item holding the nested list of its branch
    assert len(re.findall(r'<li data-indent="\d+" class="case">Assume that: [^\n]*\n<ul class="proof">',
                          html)) == 4


def test_dangling_reference_unsupported(doc):
    from dataclasses import replace
    theory = replace(doc.theory, axioms=tuple(a for a in doc.theory.axioms if a.name != "th_4_18"))
    broken = replace(doc, theory=theory)
    for t in ("isar", "coq", "tex", "html", "txt"):
        with pytest.raises(UnsupportedDocument):
            export(broken, t)


def test_layout_must_fit_signature(doc):
    from clvernacular.layout import LayoutConfig, LayoutError
    with pytest.raises(LayoutError):
        export(doc, "tex", LayoutConfig.parse("cong/3 functional"))


def test_trivial_proof():
    th, conjs = tptp.assemble_theory(tptp.parse_problem("fof(g, conjecture, p(a) => p(a))."))
    r = engine.prove(th, conjs[0])
    d = D.VernacularDocument(D.Frontpage(), th, (D.Chapter("c", (
        D.Item(NamedFormula("g", "theorem", conjs[0].formula), (r.proof,)),)),))
    txt = export(d, "txt").main.splitlines()
    assert txt == ["g: Assuming that p(a) it holds that p(a).",
                   "The conclusion follows from the fact(s) p(a)."]
    assert "from `p a` show ?thesis by assumption" in export(d, "isar").main
    assert "  conclude." in export(d, "coq").main


def test_conjecture_rendering():
    th, conjs = tptp.assemble_theory(tptp.parse_problem("fof(g, conjecture, p(a) => q(a))."))
    d = D.VernacularDocument(D.Frontpage(), th, (D.Chapter("c", (D.Item(conjs[0]),)),))
    assert "oops" in export(d, "isar").main
    assert "Admitted." in export(d, "coq").main
    assert "\\begin{conjecture}" in export(d, "tex").main
    assert "(conjecture)" in export(d, "txt").main


# -- invariants over random proofs --------------------------------------------------

def proved_document(seed):
    th, cj = gen.coherent_problem(seed)
    r = engine.prove(th, cj, engine.SearchLimits(max_steps=256, max_splits=3, wall_clock=1.0))
    if r.status != "PROVED":
        return None
    item = D.Item(NamedFormula("goal", "theorem", cj.formula), (r.proof,))
    return D.VernacularDocument(D.Frontpage(), th, (D.Chapter("c", (item,)),))


def isar_count(text):
    body = text.split("proof -", 1)[1]
    have = sum(1 for l in body.splitlines()
               if re.match(r"\s*(from .* )?(have|obtain) ", l) and 'have "False"' not in l)
    return have + body.count("show ?thesis")


def coq_count(text):
    n = 0
    for l in text.split("Proof.", 1)[1].splitlines():
        l = l.strip()
        if l.startswith("assert") and not l.startswith("assert (False)"):
            n += 1
        elif l in ("conclude.", "contradict.") or l.startswith("by cases on"):
            n += 1
    return n


def expected_indents(pt: ProofTree, depth=0):
    """(indentation, kind) in reading order, from the tree shape alone."""
    out = [(6 * depth, "step") for _ in pt.steps]
    r = pt.closing.rule
    if isinstance(r, CaseSplit):
        for b in r.branches:
            out.append((6 * depth + 3, "assume"))
            out += expected_indents(b, depth + 1)
    out.append((6 * depth, "closing"))
    return out


seeds = st.integers(0, 10**6)


@settings(max_examples=40)
@given(seeds)
def test_statement_count_preserved(seed):
    d = proved_document(seed)
    if d is None:
        return
    pt = d.chapters[0].items[0].proofs[0]
    size = pt.size()
    assert isar_count(export(d, "isar").main) == size
    assert coq_count(export(d, "coq").main) == size
    s = _Sentences(d, DEFAULT, "plain")
    assert sum(k != "assume" for _, k, _ in lines(pt, s)) == size
    tex = export(d, "tex").main
    n_assume = sum(k == "assume" for _, k, _ in lines(pt, s))
    assert tex.count("\\proofstep{") == size + n_assume
    html = export(d, "html").main
    assert html.count("<li") == size + n_assume


@settings(max_examples=40)
@given(seeds)
def test_indentation_follows_depth(seed):
    d = proved_document(seed)
    if d is None:
        return
    pt = d.chapters[0].items[0].proofs[0]
    got = [(i, k) for i, k, _ in lines(pt, _Sentences(d, DEFAULT, "plain"))]
    assert got == expected_indents(pt)
    txt = export(d, "txt").main.splitlines()[1:]
    assert [len(l) - len(l.lstrip(" ")) for l in txt] == [i for i, _ in got]


@settings(max_examples=25)
@given(seeds)
def test_exports_are_deterministic(seed):
    d = proved_document(seed)
    if d is None:
        return
    again = D.parse(D.serialize(d))
    for t in TARGETS:
        assert export(d, t).main == export(again, t).main
