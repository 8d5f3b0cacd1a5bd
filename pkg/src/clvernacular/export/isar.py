"""Isabelle/Isar theory files.

Facts are cited by statement in backquotes.  Encoded negations are shown
with Isabelle's own negation, so the partner axioms are not declared.
"""

from __future__ import annotations

from typing import Sequence

from ..document import Item, VernacularDocument
from ..logic import EQ, NEQ, Atom, CoherentFormula, Const, Disjunct, Var
from ..proof import CaseSplit, EqualitySubstitution, Efq, From, ModusPonens, ProofTree
from .common import (RenderedArtifact, declared_predicates, first_proof, identifier,
                     is_excluded_middle, is_incompatibility, native_axioms,
                     native_negation_pair, negation_base, prepare, theory_sorts,
                     witnesses_in)

OR, AND, EX, IMP = "\\<or>", "\\<and>", "\\<exists>", "\\<Longrightarrow>"


class _Isar:
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
            return f"{args[0]} ~= {args[1]}"
        return " ".join([a.pred] + args)

    def conj(self, atoms: Sequence[Atom]) -> str:
        return f" {AND} ".join(self.atom(a) for a in atoms)

    def disjunct(self, atoms, bound=(), paren=False) -> str:
        body = self.conj(atoms)
        if bound:
            return f"({EX}{' '.join(str(v) for v in bound)}. {body})"
        if paren and len(atoms) > 1:
            return f"({body})"
        return body

    def disjunction(self, ds, bounds=None) -> str:
        if not ds:
            return "False"
        bounds = bounds or [()] * len(ds)
        return f" {OR} ".join(self.disjunct(d, b, len(ds) > 1) for d, b in zip(ds, bounds))

    def formula(self, f: CoherentFormula) -> str:
        concl = self.disjunction([d.conjuncts for d in f.conclusion], [d.vars for d in f.conclusion])
        return f" {IMP} ".join([self.atom(a) for a in f.premises] + [concl])

    def cite(self, atoms: Sequence[Atom]) -> str:
        return " and ".join(f"`{self.atom(a)}`" for a in atoms)

    def line(self, ind: int, s: str):
        self.out.append(" " * ind + s)

    # -- header
    def preamble(self, name: str):
        self.out += [f"theory {name}", "imports Main", "begin", ""]
        for s in theory_sorts(self.doc):
            self.out.append(f"typedecl {s}")
        self.out.append("")
        preds = declared_predicates(self.doc)
        consts = self.sig.constants
        if preds or consts:
            self.out.append("consts")
            for p in preds:
                ty = " \\<Rightarrow> ".join(list(p.arg_sorts) + ["bool"])
                self.out.append(f'  {p.name} :: "{ty}"')
            for c in consts:
                self.out.append(f'  {c.name} :: "{c.sort}"')
            self.out.append("")
        axioms = [a for a in native_axioms(self.doc) if not is_excluded_middle(self.doc, a.name)]
        if axioms:
            self.out.append("axiomatization where")
            for i, a in enumerate(axioms):
                sep = "  " if i == 0 else "  and "
                self.out.append(f'{sep}{a.name}: "{self.formula(a.formula)}"')
            self.out.append("")

    # -- items
    def item(self, it: Item):
        f = it.formula.formula
        goal = " \\<or> ".join(f"({self.disjunct(d.conjuncts, d.vars)})" for d in f.conclusion)
        goal = goal or "False"
        assumes = ""
        if f.premises:
            assumes = "  assumes  " + " and ".join(f'"{self.atom(a)}"' for a in f.premises)
        head = f"lemma {it.name} :{assumes}  shows \"{goal}\""
        self.out.append(head)
        if not it.is_theorem:
            self.out += ["  oops", ""]
            return
        if len(it.proofs) > 1:
            self.out.append(f"(* {len(it.proofs) - 1} alternative proof(s) not shown *)")
        self.out += ["proof -", ""]
        self.proof(first_proof(it))
        self.out += ["qed", ""]

    def step(self, ind: int, r):
        if isinstance(r, EqualitySubstitution):
            src = r.source
            if src is None:
                self.line(ind, f'have "{self.atom(r.derived)}" by simp')
                return
            by = "simp"
            if not r.equations and src.pred == r.derived.pred and src.args == r.derived.args[::-1]:
                by = "(rule not_sym)" if src.pred == NEQ else "(rule sym)"
            self.line(ind, f'from {self.cite(r.premises)} have "{self.atom(r.derived)}" by {by}')
            return
        prefix = f"from {self.cite(r.premises)} " if r.premises else ""
        if r.witnesses and len(r.derived) == 1:
            ws = " ".join(str(w) for w in r.witnesses)
            facts = " and ".join(f'"{self.atom(a)}"' for a in r.derived[0])
            self.line(ind, f"{prefix}obtain {ws} where {facts} using {r.axiom} by blast")
            return
        bounds = [witnesses_in(d, r.witnesses) for d in r.derived]
        stmt = self.disjunction(r.derived, bounds)
        if is_excluded_middle(self.doc, r.axiom):
            self.line(ind, f'have "{stmt}" by (subst disj_commute, rule excluded_middle)')
        elif len(r.derived) == 1 and len(r.derived[0]) > 1:
            facts = " and ".join(f'"{self.atom(a)}"' for a in r.derived[0])
            self.line(ind, f"{prefix}have {facts} using {r.axiom} by blast")
        else:
            self.line(ind, f'{prefix}have "{stmt}" by (rule {r.axiom})')

    def proof(self, pt: ProofTree):
        for s in pt.steps:
            self.step(s.indentation, s.rule)
        c = pt.closing
        ind = c.indentation
        r = c.rule
        if isinstance(r, From):
            f = self.goal.conclusion
            simple = len(f) == 1 and not f[0].vars and len(f[0].conjuncts) == 1
            self.line(ind, f"from {self.cite(r.facts)} show ?thesis by "
                           f"{'assumption' if simple else 'blast'}")
        elif isinstance(r, Efq):
            self.efq(ind, r)
        else:
            self.split(ind, pt, r)

    def efq(self, ind: int, r: Efq):
        facts = list(r.facts)
        if len(facts) == 2 and self._complementary(facts[0], facts[1]):
            neg, pos = self._complementary(facts[0], facts[1])
            self.line(ind, f'from {self.cite([neg, pos])} have "False" by (rule notE)')
        elif r.axiom and not is_incompatibility(self.doc, r.axiom):
            self.line(ind, f'from {self.cite(facts)} have "False" by (rule {r.axiom})')
        else:
            self.line(ind, f'from {self.cite(facts)} have "False" by simp')
        self.line(ind, "from this show ?thesis by (rule FalseE) ")

    def _complementary(self, a: Atom, b: Atom):
        for neg, pos in ((a, b), (b, a)):
            if neg.args != pos.args:
                continue
            if neg.pred == NEQ and pos.pred == EQ:
                return neg, pos
            if negation_base(neg.pred, self.sig) == pos.pred:
                return neg, pos
        return None

    def split(self, ind: int, pt: ProofTree, r: CaseSplit):
        pos = native_negation_pair(r.disjunction, self.sig)
        if pos is not None:
            self.line(ind + 3, "show ?thesis")
            self.line(ind + 3, f'proof(cases "{self.atom(pos)}")')
            for label, b in zip(("True", "False"), r.branches):
                if label == "False":
                    self.line(ind + 3, "next")
                self.line(ind + 5, f"case {label}")
                self.proof(b)
            self.line(ind + 3, "qed")
            return
        mp = pt.steps[-1].rule if pt.steps else None
        wits = mp.witnesses if isinstance(mp, ModusPonens) and mp.derived == r.disjunction else ()
        bounds = [witnesses_in(d, wits) for d in r.disjunction]
        stmt = self.disjunction(r.disjunction, bounds)
        self.line(ind + 3, f'from `{stmt}` show ?thesis')
        self.line(ind + 3, "proof (elim disjE)")
        for i, (d, b, bound) in enumerate(zip(r.disjunction, r.branches, bounds)):
            if i:
                self.line(ind + 3, "next")
            self.line(ind + 5, f'assume "{self.disjunct(d, bound)}"')
            if bound:
                facts = " and ".join(f'"{self.atom(a)}"' for a in d)
                self.line(ind + 5, f"then obtain {' '.join(map(str, bound))} where {facts} by blast")
            elif len(d) > 1:
                facts = " and ".join(f'"{self.atom(a)}"' for a in d)
                self.line(ind + 5, f"then have {facts} by blast+")
            self.proof(b)
        self.line(ind + 3, "qed")


def export_isar(doc: VernacularDocument, name: str = "") -> RenderedArtifact:
    prepare(doc)
    x = _Isar(doc)
    x.preamble(identifier(name or doc.theory.name))
    for ch in doc.chapters:
        x.out += [f"(* {ch.name} *)", ""]
        for it in ch.items:
            x.goal = it.formula.formula
            x.item(it)
    x.out.append("end")
    return RenderedArtifact("\n".join(x.out) + "\n")
