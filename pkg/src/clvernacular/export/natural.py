"""English proofs in LaTeX, HTML or plain text."""

from __future__ import annotations

from typing import Optional, Sequence

from ..document import Item, VernacularDocument
from ..layout import DEFAULT, LayoutConfig, escape_name, symbol
from ..logic import Atom, CoherentFormula
from ..proof import (CONTRADICTION, INDENT, CaseSplit, EqualitySubstitution, Efq, From,
                     ModusPonens, ProofTree)
from .common import RenderedArtifact, asset, first_proof, is_excluded_middle, prepare

TARGETS = ("latex", "html", "plain")
PREAMBLE = "vernacular.sty"


class _Sentences:
    """Sentence builder for one backend."""

    def __init__(self, doc: VernacularDocument, cfg: LayoutConfig, target: str):
        self.doc = doc
        self.cfg = cfg
        self.target = target
        self.sig = doc.theory.signature

    def math(self, s: str) -> str:
        if self.target == "latex":
            return f"${s}$"
        if self.target == "html":
            return f'<span class="math">{s}</span>'
        return s

    def name(self, s: str) -> str:
        return self.math(escape_name(s, self.target))

    def atom(self, a: Atom) -> str:
        return self.math(self.cfg.render(a, self.target, self.sig))

    def facts(self, atoms: Sequence[Atom]) -> str:
        return " and ".join(self.atom(a) for a in atoms)

    def disjunction(self, disjuncts, bound: Sequence[Sequence] = ()) -> str:
        if not disjuncts:
            return self.math(symbol("\\bot", self.target))
        parts = []
        for i, d in enumerate(disjuncts):
            text = self.facts(d)
            vs = bound[i] if i < len(bound) else ()
            if vs:
                names = ", ".join(self.name(str(v)) for v in vs)
                verb = "exists" if len(vs) == 1 else "exist"
                text = f"there {verb} {names} such that {text}"
            if len(disjuncts) > 1 and (len(d) > 1 or vs):
                text = f"({text})"
            parts.append(text)
        return " or ".join(parts)

    def statement(self, f: CoherentFormula) -> str:
        goal = self.disjunction([d.conjuncts for d in f.conclusion],
                                [d.vars for d in f.conclusion])
        if f.premises:
            return f"Assuming that {self.facts(f.premises)} it holds that {goal}."
        return f"It holds that {goal}."

    def step(self, r) -> str:
        if isinstance(r, EqualitySubstitution):
            return f"From the fact(s) {self.facts(r.premises)} it holds that {self.atom(r.derived)}."
        stmt = self.disjunction(r.derived)
        using = "" if is_excluded_middle(self.doc, r.axiom) else f" (using {self.name(r.axiom)})"
        if r.witnesses:
            ws = ", ".join(self.name(str(w)) for w in r.witnesses)
            got = f"we get new constant(s) {ws} such that {stmt}"
            if r.premises:
                return f"From the fact(s) {self.facts(r.premises)} {got}{using}."
            return f"We get new constant(s) {ws} such that {stmt}{using}."
        if r.premises:
            return f"From the fact(s) {self.facts(r.premises)} it holds that {stmt}{using}."
        return f"It holds that {stmt}{using}."

    def assume(self, disjunct) -> str:
        return f"Assume that: {self.facts(disjunct)}."

    def closing(self, pt: ProofTree) -> str:
        r = pt.closing.rule
        if isinstance(r, From):
            return f"The conclusion follows from the fact(s) {self.facts(r.facts)}."
        if isinstance(r, Efq):
            return f"From the fact(s) {self.facts(r.facts)} we get contradiction."
        if pt.closing.outcome == CONTRADICTION:
            return "Contradiction follows in all cases."
        return "The conclusion follows in all cases."


def lines(pt: ProofTree, s: _Sentences) -> list[tuple[int, str, str]]:
    """(indentation, kind, sentence) in reading order; kind is step, assume or closing."""
    out = []
    for st in pt.steps:
        out.append((st.indentation, "step", s.step(st.rule)))
    r = pt.closing.rule
    if isinstance(r, CaseSplit):
        for d, b in zip(r.disjunction, r.branches):
            out.append((pt.closing.indentation + INDENT, "assume", s.assume(d)))
            out += lines(b, s)
    out.append((pt.closing.indentation, "closing", s.closing(pt)))
    return out


def _latex(doc: VernacularDocument, s: _Sentences) -> str:
    out = ["\\documentclass{article}", "\\usepackage{vernacular}", "",
           f"\\title{{{escape_name(doc.theory.name, 'latex')}}}",
           f"\\author{{{escape_name(doc.frontpage.author, 'latex')}}}",
           f"\\date{{{escape_name(doc.frontpage.date, 'latex')}}}", "",
           "\\begin{document}", "\\maketitle", ""]
    for ch in doc.chapters:
        out += [f"\\section{{{escape_name(ch.name, 'latex')}}}", ""]
        for it in ch.items:
            out += _latex_item(it, s)
    out += ["\\end{document}"]
    return "\n".join(out) + "\n"


def _latex_item(it: Item, s: _Sentences) -> list[str]:
    env = "theorem" if it.is_theorem else "conjecture"
    out = [f"\\begin{{{env}}}[{escape_name(it.name, 'latex')}]",
           s.statement(it.formula.formula), f"\\end{{{env}}}", ""]
    if not it.is_theorem:
        return out
    out += ["\\setcounter{proofstepnum}{0}", "{\\em Proof:}", ""]
    for ind, _, text in lines(first_proof(it), s):
        out.append(f"\\proofstep{{{ind}}} {{{text}}}")
    out += ["", "QED", ""]
    if len(it.proofs) > 1:
        out += [f"% {len(it.proofs) - 1} alternative proof(s) not shown", ""]
    return out


def _html(doc: VernacularDocument, s: _Sentences) -> str:
    esc = lambda x: escape_name(x, "html")
    out = ["<!DOCTYPE html>", "<html>", "<head>", '<meta charset="utf-8">',
           f"<title>{esc(doc.theory.name)}</title>",
           "<style>ul.proof { list-style: none; } .case { font-style: italic; }</style>",
           "</head>", "<body>",
           f'<p class="frontpage">{esc(doc.frontpage.author)}, {esc(doc.frontpage.prover)}, '
           f"{esc(doc.frontpage.date)}</p>"]
    for ch in doc.chapters:
        out.append(f"<h1>{esc(ch.name)}</h1>")
        for it in ch.items:
            kind = "Theorem" if it.is_theorem else "Conjecture"
            out.append(f'<div class="{kind.lower()}">')
            out.append(f"<p><b>{kind}</b> ({esc(it.name)}). {s.statement(it.formula.formula)}</p>")
            if it.is_theorem:
                out.append("<p><em>Proof:</em></p>")
                out += _html_proof(first_proof(it), s)
                out.append("<p>QED</p>")
                if len(it.proofs) > 1:
                    out.append(f"<!-- {len(it.proofs) - 1} alternative proof(s) not shown -->")
            out.append("</div>")
    out += ["</body>", "</html>"]
    return "\n".join(out) + "\n"


def _html_proof(pt: ProofTree, s: _Sentences) -> list[str]:
    out = ['<ul class="proof">']
    for st in pt.steps:
        out.append(f'<li data-indent="{st.indentation}">{s.step(st.rule)}</li>')
    r = pt.closing.rule
    ind = pt.closing.indentation
    if isinstance(r, CaseSplit):
        for d, b in zip(r.disjunction, r.branches):
            out.append(f'<li data-indent="{ind + INDENT}" class="case">{s.assume(d)}')
            out += _html_proof(b, s)
            out.append("</li>")
    out.append(f'<li data-indent="{ind}">{s.closing(pt)}</li>')
    out.append("</ul>")
    return out


def _plain(doc: VernacularDocument, s: _Sentences) -> str:
    blocks = []
    for it in doc.items():
        tag = "" if it.is_theorem else " (conjecture)"
        block = [f"{it.name}{tag}: {s.statement(it.formula.formula)}"]
        if it.is_theorem:
            block += [" " * ind + text for ind, _, text in lines(first_proof(it), s)]
            if len(it.proofs) > 1:
                block.append(f"# {len(it.proofs) - 1} alternative proof(s) not shown")
        blocks.append("\n".join(block))
    return "\n\n".join(blocks) + "\n" if blocks else ""


def export_natural(doc: VernacularDocument, cfg: Optional[LayoutConfig] = None,
                   target: str = "latex") -> RenderedArtifact:
    if target not in TARGETS:
        raise ValueError(f"unknown natural-language target {target!r}")
    prepare(doc)
    cfg = cfg or DEFAULT
    cfg.check(doc.theory.signature)
    s = _Sentences(doc, cfg, target)
    if target == "latex":
        return RenderedArtifact(_latex(doc, s), ((PREAMBLE, asset(PREAMBLE)),))
    if target == "html":
        return RenderedArtifact(_html(doc, s))
    return RenderedArtifact(_plain(doc, s))
