"""Pieces shared by the text backends."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterator, Optional

from .. import logic
from ..document import DanglingReference, Item, VernacularDocument, check_references_of
from ..logic import EQ, NEQ, Atom, NamedFormula, Signature
from ..proof import CaseSplit, ProofTree, reindent


class UnsupportedDocument(ValueError):
    pass


@dataclass(frozen=True)
class RenderedArtifact:
    main: str
    auxiliary: tuple[tuple[str, str], ...] = field(default=())


def asset(name: str) -> str:
    return resources.files("clvernacular").joinpath(f"data/{name}").read_text("utf-8")


def prepare(doc: VernacularDocument) -> None:
    try:
        check_references_of(doc)
    except DanglingReference as e:
        raise UnsupportedDocument(str(e)) from None


def first_proof(it: Item) -> ProofTree:
    """The rendered proof; indentation is recomputed from structure."""
    return reindent(it.proofs[0])


def formulas(doc: VernacularDocument) -> dict[str, NamedFormula]:
    out = {a.name: a.formula for a in doc.theory.axioms}
    for it in doc.items():
        if it.is_theorem:
            out[it.name] = it.formula.formula
    return out


def is_excluded_middle(doc: VernacularDocument, name: str) -> bool:
    f = formulas(doc).get(name)
    return f is not None and logic.is_excluded_middle(f, doc.theory.signature)


def is_incompatibility(doc: VernacularDocument, name: Optional[str]) -> bool:
    f = formulas(doc).get(name) if name else None
    return f is not None and logic.is_incompatibility(f, doc.theory.signature)


def negation_base(pred: str, sig: Signature) -> Optional[str]:
    partner = sig.partner(pred)
    if partner and partner not in (EQ, NEQ) and pred == partner + "_bar":
        return partner
    return None


def native_negation_pair(disjunction, sig: Signature) -> Optional[Atom]:
    """The positive atom P when a split is over ``P | not P``."""
    if len(disjunction) != 2 or any(len(d) != 1 for d in disjunction):
        return None
    (a,), (b,) = disjunction
    if a.args != b.args:
        return None
    if a.pred == EQ and b.pred == NEQ:
        return a
    if negation_base(b.pred, sig) == a.pred:
        return a
    return None


def witnesses_in(disjunct, witnesses) -> list:
    used = {c for a in disjunct for c in a.constants()}
    return [w for w in witnesses if w in used]


def identifier(s: str) -> str:
    s = re.sub(r"\W", "_", s)
    return s if s and not s[0].isdigit() else "t_" + s


def theory_sorts(doc: VernacularDocument) -> list[str]:
    return list(doc.theory.signature.sorts) or [logic.DEFAULT_SORT]


def declared_predicates(doc: VernacularDocument):
    """Predicates needing a declaration (encoded negations become native negation)."""
    sig = doc.theory.signature
    return [p for p in sig.predicates if negation_base(p.name, sig) is None]


def native_axioms(doc: VernacularDocument) -> Iterator[NamedFormula]:
    """Theory axioms without the encoded-negation ones, which hold natively."""
    sig = doc.theory.signature
    for a in doc.theory.axioms:
        f = a.formula
        preds = {x.pred for x in f.atoms()}
        if any(negation_base(p, sig) for p in preds) and (
                logic.is_excluded_middle(f, sig) or logic.is_incompatibility(f, sig)):
            continue
        yield a


def is_split(pt: ProofTree) -> bool:
    return isinstance(pt.closing.rule, CaseSplit)
