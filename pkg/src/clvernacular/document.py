"""Vernacular documents: frontpage, theory and chapters of theorems.

Documents are written by a hand-rolled serializer so that output is
byte-stable, and read back with :mod:`xml.etree` after resolving
``xi:include`` references and validating against the bundled DTD.
"""

from __future__ import annotations

import os
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence
from xml.sax.saxutils import escape, quoteattr

from . import logic
from .dtd import Violation, vernacular_dtd
from .logic import (DEFAULT_SORT, Atom, CoherentFormula, Const, Disjunct, NamedFormula,
                    PredicateSymbol, Signature, Theory, Var)
from .proof import (CaseSplit, EqualitySubstitution, Efq, From, ModusPonens, ProofClosing,
                    ProofStep, ProofTree)

XI = "http://www.w3.org/2003/XInclude"
HEADER = '<?xml version="1.0" encoding="UTF-8"?>\n'
DOCTYPE = '<!DOCTYPE main SYSTEM "Vernacular.dtd">\n'


class DocumentError(Exception):
    pass


class SchemaViolation(DocumentError):
    def __init__(self, violations: Sequence[Violation]):
        self.violations = list(violations)
        super().__init__("; ".join(map(str, self.violations)))

    @property
    def path(self) -> str:
        return self.violations[0].path if self.violations else ""


class IncludeCycle(DocumentError):
    pass


class DanglingReference(DocumentError):
    def __init__(self, name: str, where: str = ""):
        self.name = name
        self.where = where
        super().__init__(f"unknown axiom or theorem {name!r}" + (f" in {where}" if where else ""))


@dataclass(frozen=True)
class Frontpage:
    author: str = ""
    prover: str = "clvernacular"
    date: str = ""


@dataclass(frozen=True)
class Item:
    """A theorem (with proofs) or a conjecture (without)."""

    formula: NamedFormula
    proofs: tuple[ProofTree, ...] = ()

    @property
    def name(self) -> str:
        return self.formula.name

    @property
    def is_theorem(self) -> bool:
        return bool(self.proofs)


@dataclass(frozen=True)
class Chapter:
    name: str
    items: tuple[Item, ...] = ()


@dataclass(frozen=True)
class VernacularDocument:
    frontpage: Frontpage = field(default_factory=Frontpage)
    theory: Theory = field(default_factory=lambda: Theory("theory"))
    chapters: tuple[Chapter, ...] = ()

    def items(self) -> Iterable[Item]:
        for ch in self.chapters:
            yield from ch.items

    def theorems_before(self, item: Item) -> list[NamedFormula]:
        """Theorems that precede ``item`` in document order."""
        out = []
        for it in self.items():
            if it is item:
                break
            if it.is_theorem:
                out.append(it.formula)
        return out


# -- writing -----------------------------------------------------------------

class _Writer:
    def __init__(self):
        self.lines: list[str] = []
        self.depth = 0

    def line(self, s: str):
        self.lines.append("  " * self.depth + s)

    def open(self, tag: str, attrs: str = ""):
        self.line(f"<{tag}{attrs}>")
        self.depth += 1

    def close(self, tag: str):
        self.depth -= 1
        self.line(f"</{tag}>")

    def text(self, tag: str, value):
        self.line(f"<{tag}>{escape(str(value))}</{tag}>")

    def result(self) -> str:
        return "\n".join(self.lines) + "\n"


def _sort_attr(sort: str) -> str:
    return "" if sort == DEFAULT_SORT else f" type={quoteattr(sort)}"


def _term(t) -> str:
    tag = "var" if isinstance(t, Var) else "const"
    return f"<{tag}{_sort_attr(t.sort)}>{escape(t.name)}</{tag}>"


def _atom(a: Atom) -> str:
    args = "".join(_term(t) for t in a.args)
    return f"<atom relation={quoteattr(a.pred)}>{args}</atom>"


def _atoms(w: _Writer, tag: str, atoms: Sequence[Atom]):
    if not atoms:
        w.line(f"<{tag}/>")
        return
    w.open(tag)
    for a in atoms:
        w.line(_atom(a))
    w.close(tag)


def _variables(w: _Writer, vs: Sequence[Var]):
    for v in vs:
        w.line(f"<variable name={quoteattr(v.name)}{_sort_attr(v.sort)}/>")


def _conclusion(w: _Writer, disjuncts: Sequence[Disjunct]):
    if not disjuncts:
        w.line("<conclusion/>")
        return
    w.open("conclusion")
    for d in disjuncts:
        w.open("disjunct")
        _variables(w, d.vars)
        for a in d.conjuncts:
            w.line(_atom(a))
        w.close("disjunct")
    w.close("conclusion")


def _formula(w: _Writer, f: CoherentFormula):
    w.open("cl_formula")
    _variables(w, f.vars)
    _atoms(w, "premises", f.premises)
    _conclusion(w, f.conclusion)
    w.close("cl_formula")


def _ground(disjunction) -> tuple[Disjunct, ...]:
    return tuple(Disjunct((), tuple(d)) for d in disjunction)


def _bindings(w: _Writer, binding):
    if not binding:
        return
    w.open("instantiation")
    for name, c in binding:
        w.line(f"<binding var={quoteattr(name)} const={quoteattr(c.name)}{_sort_attr(c.sort)}/>")
    w.close("instantiation")


def _proof(w: _Writer, pt: ProofTree):
    w.open("proof")
    for s in pt.steps:
        w.open("proof_step")
        w.text("indentation", s.indentation)
        w.open("modus_ponens")
        r = s.rule
        if isinstance(r, ModusPonens):
            _atoms(w, "premises", r.premises)
            w.text("theorem_name", r.axiom)
            _bindings(w, r.binding)
            if r.witnesses:
                w.open("new_constants")
                for c in r.witnesses:
                    w.line(_term(c))
                w.close("new_constants")
            _conclusion(w, _ground(r.derived))
        else:
            _atoms(w, "premises", r.premises)
            w.line("<by_equality/>")
            _conclusion(w, _ground(((r.derived,),)))
        w.close("modus_ponens")
        w.close("proof_step")
    c = pt.closing
    w.open("proof_closing")
    w.text("indentation", c.indentation)
    r = c.rule
    if isinstance(r, CaseSplit):
        w.open("case_split")
        _conclusion(w, _ground(r.disjunction))
        for b in r.branches:
            _proof(w, b)
        w.close("case_split")
    elif isinstance(r, From):
        w.open("from", f" disjunct={quoteattr(str(r.index))}")
        _atoms(w, "premises", r.facts)
        _bindings(w, r.witnesses)
        w.close("from")
    else:
        attr = f" theorem_name={quoteattr(r.axiom)}" if r.axiom else ""
        w.open("efq", attr)
        _atoms(w, "premises", r.facts)
        w.close("efq")
    w.line(f"<{c.outcome}/>")
    w.close("proof_closing")
    if pt.name:
        w.line(f"<proof_name name={quoteattr(pt.name)}/>")
    w.close("proof")


def _frontpage(w: _Writer, fp: Frontpage):
    w.open("frontpage")
    w.text("author", fp.author)
    w.text("prover", fp.prover)
    w.text("date", fp.date)
    w.close("frontpage")


def _theory(w: _Writer, t: Theory):
    w.open("theory")
    w.text("theory_name", t.name)
    sig = t.signature
    w.open("signature")
    for s in sig.sorts:
        w.text("type", s)
    for p in sig.predicates:
        attr = f" negation_of={quoteattr(p.negated_partner)}" if p.negated_partner else ""
        if p.arg_sorts:
            w.open("relation_symbol", f" name={quoteattr(p.name)}{attr}")
            for s in p.arg_sorts:
                w.text("type", s)
            w.close("relation_symbol")
        else:
            w.line(f"<relation_symbol name={quoteattr(p.name)}{attr}/>")
    for c in sig.constants:
        w.open("constant", f" name={quoteattr(c.name)}")
        w.text("type", c.sort)
        w.close("constant")
    w.close("signature")
    for a in t.axioms:
        role = "" if a.role == "axiom" else f" role={quoteattr(a.role)}"
        w.open("axiom", f" name={quoteattr(a.name)}{role}")
        _formula(w, a.formula)
        w.close("axiom")
    w.close("theory")


def _item(w: _Writer, it: Item):
    if it.is_theorem:
        w.open("theorem")
        w.text("theorem_name", it.name)
        _formula(w, it.formula.formula)
        for p in it.proofs:
            _proof(w, p)
        w.close("theorem")
    else:
        w.open("conjecture")
        w.text("name", it.name)
        _formula(w, it.formula.formula)
        w.close("conjecture")


def _include(w: _Writer, href: str):
    w.line(f'<xi:include href={quoteattr(href)} parse="xml" xmlns:xi="{XI}"/>')


def serialize(d: VernacularDocument) -> str:
    """The whole document as one XML text."""
    w = _Writer()
    w.open("main")
    _frontpage(w, d.frontpage)
    _theory(w, d.theory)
    for ch in d.chapters:
        w.open("chapter", f" name={quoteattr(ch.name)}")
        for it in ch.items:
            _item(w, it)
        w.close("chapter")
    w.close("main")
    return HEADER + DOCTYPE + w.result()


def split_names(d: VernacularDocument) -> dict:
    return {"frontpage": "frontpage.xml", "theory": f"theory_{d.theory.name}.xml"}


def serialize_split(d: VernacularDocument, main_name: str = "main.xml") -> dict[str, str]:
    """Main file plus included frontpage, theory and per-item files."""
    names = split_names(d)
    files: dict[str, str] = {}
    w = _Writer()
    _frontpage(w, d.frontpage)
    files[names["frontpage"]] = HEADER + w.result()
    w = _Writer()
    _theory(w, d.theory)
    files[names["theory"]] = HEADER + w.result()
    m = _Writer()
    m.open("main")
    _include(m, names["frontpage"])
    _include(m, names["theory"])
    for ch in d.chapters:
        m.open("chapter", f" name={quoteattr(ch.name)}")
        for it in ch.items:
            fname = f"{'proof' if it.is_theorem else 'conjecture'}_{it.name}.xml"
            w = _Writer()
            _item(w, it)
            files[fname] = HEADER + w.result()
            _include(m, fname)
        m.close("chapter")
    m.close("main")
    files[main_name] = HEADER + DOCTYPE + m.result()
    return files


def write(d: VernacularDocument, path: str, split: bool = False) -> list[str]:
    if not split:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(serialize(d))
        return [path]
    out = []
    base = os.path.dirname(path)
    for name, text in serialize_split(d, os.path.basename(path)).items():
        p = os.path.join(base, name)
        with open(p, "w", encoding="utf-8") as fh:
            fh.write(text)
        out.append(p)
    return out


# -- reading -----------------------------------------------------------------

Resolver = Callable[[str, str], tuple[str, str]]


def file_resolver(base_dir: str) -> Resolver:
    def resolve(href: str, including: str) -> tuple[str, str]:
        here = os.path.dirname(including) if including else base_dir
        path = os.path.normpath(os.path.join(here, href))
        with open(path, encoding="utf-8") as fh:
            return path, fh.read()
    return resolve


def _resolve_includes(el: ET.Element, source: str, resolver: Optional[Resolver], stack: list):
    for i, child in enumerate(list(el)):
        if child.tag == f"{{{XI}}}include":
            href = child.get("href", "")
            if resolver is None:
                raise DocumentError(f"cannot resolve include {href!r} without a resolver")
            path, text = resolver(href, source)
            if path in stack:
                raise IncludeCycle(" -> ".join(stack + [path]))
            sub = ET.fromstring(text)
            _resolve_includes(sub, path, resolver, stack + [path])
            sub.tail = child.tail
            el.remove(child)
            el.insert(i, sub)
        else:
            _resolve_includes(child, source, resolver, stack)


def _load_tree(xml: str, resolver: Optional[Resolver], source: str) -> ET.Element:
    try:
        root = ET.fromstring(xml)
    except ET.ParseError as e:
        raise SchemaViolation([Violation("/", f"not well-formed: {e}")]) from None
    _resolve_includes(root, source, resolver, [source] if source else [])
    return root


def validate(xml: str, resolver: Optional[Resolver] = None, source: str = "") -> list[Violation]:
    """Schema violations of a document text; empty when valid."""
    try:
        root = _load_tree(xml, resolver, source)
    except SchemaViolation as e:
        return e.violations
    return vernacular_dtd().validate(root, "main")


def _sort(el: ET.Element) -> str:
    return el.get("type") or DEFAULT_SORT


def _read_term(el: ET.Element):
    cls = Var if el.tag == "var" else Const
    return cls((el.text or "").strip(), _sort(el))


def _read_atom(el: ET.Element) -> Atom:
    return Atom(el.get("relation"), tuple(_read_term(c) for c in el))


def _read_atoms(el: ET.Element) -> tuple[Atom, ...]:
    return tuple(_read_atom(a) for a in el.findall("atom"))


def _read_vars(el: ET.Element) -> tuple[Var, ...]:
    return tuple(Var(v.get("name"), _sort(v)) for v in el.findall("variable"))


def _read_conclusion(el: ET.Element) -> tuple[Disjunct, ...]:
    return tuple(Disjunct(_read_vars(d), _read_atoms(d)) for d in el.findall("disjunct"))


def _read_formula(el: ET.Element) -> CoherentFormula:
    return CoherentFormula(_read_vars(el), _read_atoms(el.find("premises")),
                           _read_conclusion(el.find("conclusion")))


def _read_bindings(el: Optional[ET.Element]) -> tuple:
    if el is None:
        return ()
    return tuple((b.get("var"), Const(b.get("const"), _sort(b))) for b in el.findall("binding"))


def _text(el: ET.Element, tag: str, strip: bool = True) -> str:
    sub = el.find(tag)
    if sub is None:
        return ""
    return (sub.text or "").strip() if strip else sub.text or ""


def _read_proof(el: ET.Element) -> ProofTree:
    steps = []
    for s in el.findall("proof_step"):
        ind = int(_text(s, "indentation"))
        mp = s.find("modus_ponens")
        prem = _read_atoms(mp.find("premises"))
        derived = tuple(d.conjuncts for d in _read_conclusion(mp.find("conclusion")))
        if mp.find("by_equality") is not None:
            rule = EqualitySubstitution(prem[0] if prem else None, prem[1:], derived[0][0])
        else:
            nc = mp.find("new_constants")
            wit = tuple(_read_term(c) for c in nc) if nc is not None else ()
            rule = ModusPonens(_text(mp, "theorem_name"), _read_bindings(mp.find("instantiation")),
                               prem, derived, wit)
        steps.append(ProofStep(rule, ind))
    c = el.find("proof_closing")
    ind = int(_text(c, "indentation"))
    outcome = c[-1].tag
    body = c[1]
    if body.tag == "case_split":
        disj = tuple(d.conjuncts for d in _read_conclusion(body.find("conclusion")))
        rule = CaseSplit(disj, tuple(_read_proof(p) for p in body.findall("proof")))
    elif body.tag == "from":
        rule = From(_read_atoms(body.find("premises")), int(body.get("disjunct")),
                    _read_bindings(body.find("instantiation")))
    else:
        rule = Efq(_read_atoms(body.find("premises")), body.get("theorem_name"))
    pn = el.find("proof_name")
    return ProofTree(tuple(steps), ProofClosing(rule, outcome, ind),
                     pn.get("name") if pn is not None else None)


def _read_theory(el: ET.Element) -> Theory:
    sig = el.find("signature")
    sorts = tuple((t.text or "").strip() for t in sig.findall("type"))
    preds = tuple(PredicateSymbol(r.get("name"),
                                  tuple((t.text or "").strip() for t in r.findall("type")),
                                  negated_partner=r.get("negation_of"))
                  for r in sig.findall("relation_symbol"))
    consts = tuple(Const(c.get("name"), _text(c, "type")) for c in sig.findall("constant"))
    axioms = tuple(NamedFormula(a.get("name"), a.get("role") or "axiom",
                                _read_formula(a.find("cl_formula")))
                   for a in el.findall("axiom"))
    return Theory(_text(el, "theory_name"), Signature(sorts, preds, consts), axioms)


def _read_item(el: ET.Element) -> Item:
    f = _read_formula(el.find("cl_formula"))
    if el.tag == "theorem":
        return Item(NamedFormula(_text(el, "theorem_name"), "theorem", f),
                    tuple(_read_proof(p) for p in el.findall("proof")))
    return Item(NamedFormula(_text(el, "name"), "conjecture", f))


def parse(xml: str, resolver: Optional[Resolver] = None, source: str = "",
          check_references: bool = True) -> VernacularDocument:
    """Resolve includes, validate, and build a document."""
    root = _load_tree(xml, resolver, source)
    bad = vernacular_dtd().validate(root, "main")
    if bad:
        raise SchemaViolation(bad)
    fp = root.find("frontpage")
    doc = VernacularDocument(
        # free text is kept as written; identifiers elsewhere are stripped
        Frontpage(*(_text(fp, t, strip=False) for t in ("author", "prover", "date"))),
        _read_theory(root.find("theory")),
        tuple(Chapter(ch.get("name"), tuple(_read_item(i) for i in ch))
              for ch in root.findall("chapter")))
    if check_references:
        check_references_of(doc)
    return doc


def parse_file(path: str, check_references: bool = True) -> VernacularDocument:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    path = os.path.abspath(path)
    return parse(text, file_resolver(os.path.dirname(path)), path, check_references)


def _cited(pt: ProofTree) -> Iterable[str]:
    for node in pt.walk():
        for s in node.steps:
            if isinstance(s.rule, ModusPonens):
                yield s.rule.axiom
        r = node.closing.rule
        if isinstance(r, Efq) and r.axiom:
            yield r.axiom


def check_references_of(doc: VernacularDocument) -> None:
    """Raise DanglingReference if a proof cites an unknown axiom or a later theorem."""
    known = {a.name for a in doc.theory.axioms}
    for ch in doc.chapters:
        for it in ch.items:
            for p in it.proofs:
                for name in _cited(p):
                    if name not in known:
                        raise DanglingReference(name, it.name)
            if it.is_theorem:
                known.add(it.name)


def check_document(doc: VernacularDocument) -> list[tuple[str, object]]:
    """Check every proof; returns (item name, result) per proof."""
    from .proof import check_proof
    out = []
    for it in doc.items():
        extra = doc.theorems_before(it)
        conj = NamedFormula(it.name, "conjecture", it.formula.formula)
        for p in it.proofs:
            out.append((it.name, check_proof(doc.theory, conj, p, extra)))
    return out
