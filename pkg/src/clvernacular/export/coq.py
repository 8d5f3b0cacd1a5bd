"""Coq vernacular files built from assert steps.

The tactics used here (applying, substitution, by cases on, conclude,
contradict) are defined in the bundled prelude VernacularTactics.v.
"""

from __future__ import annotations

from typing import Sequence

from ..document import Item, VernacularDocument
from ..logic import EQ, NEQ, Atom, CoherentFormula
from ..proof import CaseSplit, EqualitySubstitution, Efq, From, ModusPonens, ProofTree
from .common import (RenderedArtifact, asset, declared_predicates, first_proof,
                     is_incompatibility, native_axioms, negation_base, prepare,
                     theory_sorts, witnesses_in)

PRELUDE = "VernacularTactics.v"
STEP = 2  # spaces per printed level


class _Coq:
    def __init__(self, doc: VernacularDocument):
        self.doc = doc
        self.sig = doc.theory.signature
        self.out: list[str] = []

    def atom(self, a: Atom) -> str:
        base = negation_base(a.pred, self.sig)
        if base is not None:
            return "~ " + self.atom(Atom(base, a.args))
        args = [str(t) for t in a.args]
        if a.pred == EQ:
            return f"{args[0]} = {args[1]}"
        if a.pred == NEQ:
            return f"{args[0]} <> {args[1]}"
        return " ".join([a.pred] + args)

    def disjunct(self, atoms: Sequence[Atom], bound=(), paren=False) -> str:
        body = " /\\ ".join(self.atom(a) for a in atoms)
        if bound:
            vs = " ".join(f"({v}:{v.sort})" for v in bound)
            return f"(exists {vs}, {body})"
        if paren and len(atoms) > 1:
            return f"({body})"
        return body

    def disjunction(self, ds, bounds=None) -> str:
        if not ds:
            return "False"
        bounds = bounds or [()] * len(ds)
        return " \\/ ".join(self.disjunct(d, b, len(ds) > 1) for d, b in zip(ds, bounds))

    def conclusion(self, f: CoherentFormula) -> str:
        return self.disjunction([d.conjuncts for d in f.conclusion], [d.vars for d in f.conclusion])

    def quantified(self, f: CoherentFormula, curried: bool) -> str:
        concl = self.conclusion(f)
        if not f.premises:
            body = concl
        elif curried:
            body = " -> ".join([self.atom(a) for a in f.premises] + [concl])
        else:
            hyp = " /\\ ".join(self.atom(a) for a in f.premises)
            body = f"({hyp}) -> {concl}"
        if f.vars:
            vs = " ".join(f"({v}:{v.sort})" for v in f.vars)
            return f"forall {vs}, {body}"
        return body

    def line(self, level: int, s: str):
        self.out.append(" " * (STEP * (1 + 2 * level)) + s)

    def preamble(self):
        self.out += [f'Load "{PRELUDE[:-2]}".', ""]
        for s in theory_sorts(self.doc):
            self.out.append(f"Parameter {s} : Type.")
        for p in declared_predicates(self.doc):
            ty = " -> ".join(list(p.arg_sorts) + ["Prop"])
            self.out.append(f"Parameter {p.name} : {ty}.")
        for c in self.sig.constants:
            self.out.append(f"Parameter {c.name} : {c.sort}.")
        self.out.append("")
        for a in native_axioms(self.doc):
            self.out.append(f"Axiom {a.name} : {self.quantified(a.formula, True)}.")
        self.out.append("")

    def item(self, it: Item):
        stmt = self.quantified(it.formula.formula, False)
        self.out.append(f"Theorem {it.name} : {stmt}.")
        if not it.is_theorem:
            self.out += ["(* conjecture: not proved *)", "Admitted.", ""]
            return
        if len(it.proofs) > 1:
            self.out.append(f"(* {len(it.proofs) - 1} alternative proof(s) not shown *)")
        self.out.append("Proof.")
        self.line(0, "intros.")
        self.proof(first_proof(it), 0)
        self.out += ["Qed.", ""]

    def step(self, level: int, r):
        if isinstance(r, EqualitySubstitution):
            self.line(level, f"assert ({self.atom(r.derived)})  by (substitution).")
            return
        bounds = [witnesses_in(d, r.witnesses) for d in r.derived]
        args = "".join(f"{c} " for _, c in r.binding)
        text = f"assert ({self.disjunction(r.derived, bounds)}) by applying ({r.axiom} {args}) ."
        if r.witnesses and len(r.derived) == 1:
            text += " destruct_all."
        self.line(level, text)

    def proof(self, pt: ProofTree, level: int):
        for s in pt.steps:
            self.step(level, s.rule)
        r = pt.closing.rule
        if isinstance(r, From):
            self.line(level, "conclude.")
        elif isinstance(r, Efq):
            if r.axiom and not is_incompatibility(self.doc, r.axiom):
                self.line(level, f"assert (False)  by (applying_auto {r.axiom}).")
            else:
                self.line(level, "assert (False)  by (substitution).")
            self.line(level, "contradict.")
        else:
            mp = pt.steps[-1].rule if pt.steps else None
            wits = mp.witnesses if isinstance(mp, ModusPonens) and mp.derived == r.disjunction else ()
            bounds = [witnesses_in(d, wits) for d in r.disjunction]
            self.line(level, f"by cases on ({self.disjunction(r.disjunction, bounds)}).")
            for b in r.branches:
                self.line(level, "- { ")
                self.proof(b, level + 1)
                self.line(level + 1, "}")


def export_coq(doc: VernacularDocument) -> RenderedArtifact:
    prepare(doc)
    x = _Coq(doc)
    x.preamble()
    for ch in doc.chapters:
        x.out += [f"(* {ch.name} *)", ""]
        for it in ch.items:
            x.item(it)
    return RenderedArtifact("\n".join(x.out) + "\n", ((PRELUDE, asset(PRELUDE)),))
