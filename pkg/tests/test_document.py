import os
import xml.etree.ElementTree as ET

import pytest
from hypothesis import example, given, settings, strategies as st

import gen
from clvernacular import document as D
from clvernacular import dtd, engine
from clvernacular.logic import NamedFormula

from conftest import golden

SAFE_TEXT = st.text(st.characters(blacklist_categories=("Cs", "Cc")), max_size=12)


def random_document(seeds, author, date, chapter_names):
    """Theory of the first problem; items from proving its variants."""
    th, _ = gen.coherent_problem(seeds[0])
    chapters = []
    k = 0
    for name in chapter_names:
        items = []
        for s in seeds:
            _, cj = gen.coherent_problem(seeds[0] * 7919 + s)
            cj = NamedFormula(f"item_{k}", "conjecture", cj.formula)
            k += 1
            try:
                r = engine.prove(th, cj, engine.SearchLimits(max_steps=128, max_splits=2, wall_clock=0.5))
            except Exception:
                continue
            if r.status == "PROVED":
                items.append(D.Item(NamedFormula(cj.name, "theorem", cj.formula), (r.proof,)))
            else:
                items.append(D.Item(cj))
        chapters.append(D.Chapter(name, tuple(items)))
    return D.VernacularDocument(D.Frontpage(author, "clvernacular", date), th, tuple(chapters))


documents = st.builds(random_document,
                      st.lists(st.integers(0, 10**6), min_size=1, max_size=4),
                      SAFE_TEXT, SAFE_TEXT,
                      st.lists(SAFE_TEXT, min_size=0, max_size=2))


@settings(max_examples=50)
@given(documents)
@example(random_document([0], " ", " ", ["  "]))
def test_round_trip(doc):
    text = D.serialize(doc)
    back = D.parse(text)
    assert back == doc
    assert D.serialize(back) == text


@settings(max_examples=15)
@given(documents)
@example(random_document([0], "", " ", []))
def test_split_round_trip(tmp_path_factory, doc):
    d = tmp_path_factory.mktemp("split")
    D.write(doc, str(d / "main.xml"), split=True)
    assert D.parse_file(str(d / "main.xml")) == doc


def test_golden_document_is_stable():
    text = golden("th_4_19.xml")
    doc = D.parse(text)
    assert D.serialize(doc) == text
    assert [(n, bool(r)) for n, r in D.check_document(doc)] == [("th_4_19", True)]


EXAMPLE_MAIN = """<?xml version="1.0" encoding="UTF-8"?>
<!DOCTYPE main SYSTEM "Vernacular.dtd">
<?xml-stylesheet href="VernacularISAR.xsl" type="text/xsl"?>

<main>
<xi:include href="frontpage.xml" parse="xml"
    xmlns:xi="http://www.w3.org/2003/XInclude"/>
<xi:include href="theory_thm_4_19.xml" parse="xml"
    xmlns:xi="http://www.w3.org/2003/XInclude"/>

<chapter name="th_4_19">
<xi:include href="proof_thm_4_19.xml" parse="xml"
    xmlns:xi="http://www.w3.org/2003/XInclude"/>
</chapter>
</main>
"""


def test_include_shape_validates(tmp_path):
    doc = D.parse(golden("th_4_19.xml"))
    files = D.serialize_split(doc)
    (tmp_path / "frontpage.xml").write_text(files["frontpage.xml"])
    (tmp_path / "theory_thm_4_19.xml").write_text(files["theory_th_4_19.xml"])
    (tmp_path / "proof_thm_4_19.xml").write_text(files["proof_th_4_19.xml"])
    main = tmp_path / "main.xml"
    main.write_text(EXAMPLE_MAIN)
    assert D.validate(EXAMPLE_MAIN, D.file_resolver(str(tmp_path)), str(main)) == []
    assert D.parse_file(str(main)) == doc


def test_split_file_names(tmp_path):
    doc = D.parse(golden("th_4_19.xml"))
    names = sorted(os.path.basename(p) for p in D.write(doc, str(tmp_path / "m.xml"), split=True))
    assert names == ["frontpage.xml", "m.xml", "proof_th_4_19.xml", "theory_th_4_19.xml"]


def test_include_cycle(tmp_path):
    a = tmp_path / "a.xml"
    a.write_text('<main><xi:include href="b.xml" xmlns:xi="http://www.w3.org/2003/XInclude"/></main>')
    (tmp_path / "b.xml").write_text('<frontpage><xi:include href="a.xml" '
                                    'xmlns:xi="http://www.w3.org/2003/XInclude"/></frontpage>')
    with pytest.raises(D.IncludeCycle):
        D.parse_file(str(a))


def test_all_violations_reported():
    text = golden("th_4_19.xml")
    text = text.replace("<prover>clvernacular</prover>", "", 1)
    text = text.replace('<chapter name="th_4_19">', '<chapter name="th_4_19" colour="red">', 1)
    vs = D.validate(text)
    assert len(vs) >= 2
    assert any(v.path == "/main/frontpage[1]" for v in vs)
    assert any("colour" in v.message for v in vs)
    with pytest.raises(D.SchemaViolation) as e:
        D.parse(text)
    assert len(e.value.violations) == len(vs)


def test_not_well_formed():
    assert D.validate("<main><frontpage></main>")[0].path == "/"


def test_dangling_reference():
    text = golden("th_4_19.xml")
    root = ET.fromstring(text)
    theory = root.find("theory")
    for axm in theory.findall("axiom"):
        if axm.get("name") == "th_4_18":
            theory.remove(axm)
    broken = ET.tostring(root, encoding="unicode")
    with pytest.raises(D.DanglingReference):
        D.parse(broken)
    doc = D.parse(broken, check_references=False)
    assert doc.chapters[0].items[0].name == "th_4_19"


def test_theorems_before_only_counts_earlier_theorems():
    doc = D.parse(golden("th_4_19.xml"))
    it = doc.chapters[0].items[0]
    later = D.Item(NamedFormula("next", "theorem", it.formula.formula), it.proofs)
    conj = D.Item(NamedFormula("open", "conjecture", it.formula.formula))
    d2 = D.VernacularDocument(doc.frontpage, doc.theory, (D.Chapter("c", (it, conj, later)),))
    assert [f.name for f in d2.theorems_before(later)] == ["th_4_19"]


# -- the validator itself

def test_dtd_content_models():
    d = dtd.Dtd.parse("""
        <!ELEMENT r (a, (b|c)*, d?)>
        <!ELEMENT a EMPTY> <!ELEMENT b (#PCDATA)> <!ELEMENT c EMPTY> <!ELEMENT d (#PCDATA|b)*>
        <!ATTLIST a k CDATA #REQUIRED m (x|y) "x" f CDATA #FIXED "v">
    """)
    ok = ET.fromstring('<r><a k="1"/><b>t</b><c/><d>x<b/>y</d></r>')
    assert d.validate(ok, "r") == []
    bad = ET.fromstring('<r><b/><a m="z" f="w">txt</a></r>')
    msgs = [str(v) for v in d.validate(bad, "r")]
    assert any("/r:" in m for m in msgs)
    assert any("k" in m for m in msgs) and any("'z'" in m or "z" in m for m in msgs)
    assert any("f" in m for m in msgs)
