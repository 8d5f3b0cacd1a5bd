"""Abstract syntax for the coherent fragment of first-order logic.

A coherent formula has the shape

    forall xs. A1 & ... & An => exists ys. (B1 | ... | Bm)

where the A's are atoms and every B is a nonempty conjunction of atoms.
An empty premise list stands for true, an empty conclusion for false.

Only constants and variables occur as terms.  Equality is the built-in
predicate ``=`` and its negated partner is ``!=``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

EQ = "="
NEQ = "!="
BUILTIN = (EQ, NEQ)
DEFAULT_SORT = "point"
ROLES = ("axiom", "theorem", "conjecture", "definition")


class LogicError(Exception):
    pass


class UnboundVariable(LogicError):
    pass


class SortMismatch(LogicError):
    pass


class IllFormed(LogicError):
    pass


@dataclass(frozen=True)
class Sort:
    name: str


@dataclass(frozen=True)
class Var:
    name: str
    sort: str = DEFAULT_SORT

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    name: str
    sort: str = DEFAULT_SORT

    def __str__(self):
        return self.name


Term = Union[Var, Const]


@dataclass(frozen=True)
class PredicateSymbol:
    name: str
    arg_sorts: tuple[str, ...]
    is_equality: bool = False
    negated_partner: Optional[str] = None

    @property
    def arity(self) -> int:
        return len(self.arg_sorts)


@dataclass(frozen=True)
class Atom:
    """``pred(args)``; ``negated`` is a frontend marker removed by :func:`encode_negation`."""

    pred: str
    args: tuple[Term, ...] = ()
    negated: bool = False

    def __str__(self):
        neg = "~" if self.negated else ""
        if self.pred in BUILTIN and len(self.args) == 2:
            return f"{neg}{self.args[0]} {self.pred} {self.args[1]}"
        if not self.args:
            return neg + self.pred
        return f"{neg}{self.pred}({', '.join(map(str, self.args))})"

    @property
    def is_ground(self) -> bool:
        return all(isinstance(a, Const) for a in self.args)

    def constants(self) -> Iterator[Const]:
        return (a for a in self.args if isinstance(a, Const))


@dataclass(frozen=True)
class Disjunct:
    """``exists vars. c1 & ... & ck``"""

    vars: tuple[Var, ...]
    conjuncts: tuple[Atom, ...]

    def __str__(self):
        body = " & ".join(map(str, self.conjuncts))
        if self.vars:
            return f"?[{','.join(v.name for v in self.vars)}]: ({body})"
        return body


@dataclass(frozen=True)
class CoherentFormula:
    vars: tuple[Var, ...] = ()
    premises: tuple[Atom, ...] = ()
    conclusion: tuple[Disjunct, ...] = ()

    def __str__(self):
        lhs = " & ".join(map(str, self.premises)) or "$true"
        rhs = " | ".join(f"({d})" for d in self.conclusion) or "$false"
        q = f"![{','.join(v.name for v in self.vars)}]: " if self.vars else ""
        return f"{q}({lhs} => {rhs})"

    @property
    def existential_vars(self) -> tuple[Var, ...]:
        return tuple(v for d in self.conclusion for v in d.vars)

    def atoms(self) -> Iterator[Atom]:
        yield from self.premises
        for d in self.conclusion:
            yield from d.conjuncts


@dataclass(frozen=True)
class NamedFormula:
    name: str
    role: str
    formula: CoherentFormula


@dataclass(frozen=True)
class Signature:
    sorts: tuple[str, ...] = (DEFAULT_SORT,)
    predicates: tuple[PredicateSymbol, ...] = ()
    constants: tuple[Const, ...] = ()

    def predicate(self, name: str) -> Optional[PredicateSymbol]:
        for p in self.predicates:
            if p.name == name:
                return p
        if name in BUILTIN:
            return PredicateSymbol(name, (self.sorts[0], self.sorts[0]), name == EQ,
                                   NEQ if name == EQ else EQ)
        return None

    def partner(self, name: str) -> Optional[str]:
        p = self.predicate(name)
        return p.negated_partner if p else None


@dataclass(frozen=True)
class Theory:
    name: str
    signature: Signature = field(default_factory=Signature)
    axioms: tuple[NamedFormula, ...] = ()

    def axiom(self, name: str) -> Optional[NamedFormula]:
        for a in self.axioms:
            if a.name == name:
                return a
        return None

    def with_axioms(self, extra: Iterable[NamedFormula]) -> "Theory":
        return replace(self, axioms=self.axioms + tuple(extra))


# -- queries -----------------------------------------------------------------

def free_vars(x: Union[Atom, Disjunct, CoherentFormula]) -> set[Var]:
    if isinstance(x, Atom):
        return {a for a in x.args if isinstance(a, Var)}
    if isinstance(x, Disjunct):
        out: set[Var] = set()
        for c in x.conjuncts:
            out |= free_vars(c)
        return out - set(x.vars)
    out = set()
    for a in x.premises:
        out |= free_vars(a)
    for d in x.conclusion:
        out |= free_vars(d)
    return out - set(x.vars)


def ordered_constants(atoms: Iterable[Atom]) -> list[Const]:
    seen: dict[Const, None] = {}
    for a in atoms:
        for c in a.constants():
            seen.setdefault(c)
    return list(seen)


def formula_constants(f: CoherentFormula) -> list[Const]:
    return ordered_constants(f.atoms())


# -- substitution ------------------------------------------------------------

def substitute_atom(atom: Atom, binding: Mapping[Var, Const], partial: bool = False) -> Atom:
    args = []
    for a in atom.args:
        if isinstance(a, Var):
            if a in binding:
                c = binding[a]
                if c.sort != a.sort:
                    raise SortMismatch(f"{a.name}:{a.sort} bound to {c.name}:{c.sort}")
                args.append(c)
            elif partial:
                args.append(a)
            else:
                raise UnboundVariable(a.name)
        else:
            args.append(a)
    return replace(atom, args=tuple(args))


def substitute(target: Union[Atom, Disjunct, Sequence[Atom]],
               binding: Mapping[Var, Const]) -> list[Atom]:
    """Ground instance of an atom, or of the conjuncts of a disjunct.

    Existential variables of a disjunct must be covered by ``binding`` too.
    """
    if isinstance(target, Atom):
        return [substitute_atom(target, binding)]
    atoms = target.conjuncts if isinstance(target, Disjunct) else target
    return [substitute_atom(a, binding) for a in atoms]


def instantiate_conclusion(f: CoherentFormula, binding: Mapping[Var, Const]
                           ) -> tuple[tuple[Atom, ...], ...]:
    """Ground conclusion: one tuple of atoms per disjunct (binding covers all vars)."""
    return tuple(tuple(substitute(d, binding)) for d in f.conclusion)


# -- constants for conjectures -----------------------------------------------

def conjecture_constants(f: CoherentFormula, taken: Iterable[str]) -> dict[Var, Const]:
    """Fresh constants standing for the universal variables of a conjecture.

    Each variable keeps its own name unless that name is taken, in which
    case a numeric suffix is appended.
    """
    used = set(taken)
    out = {}
    for v in f.vars:
        name, k = v.name, 1
        while name in used:
            name = f"{v.name}_{k}"
            k += 1
        used.add(name)
        out[v] = Const(name, v.sort)
    return out


# -- well-formedness ---------------------------------------------------------

def check_formula(f: CoherentFormula, sig: Optional[Signature] = None) -> None:
    """Raise IllFormed if ``f`` breaks a structural invariant."""
    if len(set(f.vars)) != len(f.vars):
        raise IllFormed("duplicate universal variable")
    universal = set(f.vars)
    for a in f.premises:
        if not free_vars(a) <= universal:
            raise IllFormed(f"premise {a} has unbound variables")
    for d in f.conclusion:
        if not d.conjuncts:
            raise IllFormed("empty disjunct")
        if set(d.vars) & universal or len(set(d.vars)) != len(d.vars):
            raise IllFormed("existential variable shadows another binder")
        used = set().union(*(free_vars(c) for c in d.conjuncts))
        if not set(d.vars) <= used:
            raise IllFormed("existential variable does not occur in its disjunct")
        if not used <= universal | set(d.vars):
            raise IllFormed(f"disjunct {d} has unbound variables")
    names = {v.name for v in f.vars} | {v.name for v in f.existential_vars}
    for a in f.atoms():
        for c in a.constants():
            if c.name in names:
                raise IllFormed(f"constant {c.name} collides with a variable")
        if sig is not None:
            p = sig.predicate(a.pred)
            if p is None:
                raise IllFormed(f"undeclared predicate {a.pred}")
            if p.arity != len(a.args):
                raise IllFormed(f"{a.pred} expects {p.arity} arguments")
            for t, s in zip(a.args, p.arg_sorts):
                if t.sort != s:
                    raise SortMismatch(f"{t} in {a}")


def check_theory(t: Theory) -> None:
    names = [a.name for a in t.axioms]
    if len(set(names)) != len(names):
        raise IllFormed("duplicate axiom name")
    if not t.signature.sorts:
        raise IllFormed("signature has no sort")
    for a in t.axioms:
        check_formula(a.formula, t.signature)


# -- negation ----------------------------------------------------------------

def _bar(name: str) -> str:
    return f"{name}_bar"


def is_excluded_middle(f: CoherentFormula, sig: Signature) -> bool:
    """True for ``R(xs) | Rbar(xs)`` axioms, whatever their name."""
    if f.premises or len(f.conclusion) != 2:
        return False
    d1, d2 = f.conclusion
    if d1.vars or d2.vars or len(d1.conjuncts) != 1 or len(d2.conjuncts) != 1:
        return False
    a, b = d1.conjuncts[0], d2.conjuncts[0]
    return a.args == b.args and sig.partner(a.pred) == b.pred and a.args == tuple(f.vars)


def is_incompatibility(f: CoherentFormula, sig: Signature) -> bool:
    """True for ``R(xs) & Rbar(xs) => false`` axioms."""
    if f.conclusion or len(f.premises) != 2:
        return False
    a, b = f.premises
    return a.args == b.args and sig.partner(a.pred) == b.pred


def _rewrite_atom(a: Atom) -> Atom:
    if not a.negated:
        return a
    if a.pred == EQ:
        return Atom(NEQ, a.args)
    if a.pred == NEQ:
        return Atom(EQ, a.args)
    return Atom(_bar(a.pred), a.args)


def _rewrite_formula(f: CoherentFormula) -> CoherentFormula:
    return CoherentFormula(
        f.vars,
        tuple(_rewrite_atom(a) for a in f.premises),
        tuple(Disjunct(d.vars, tuple(_rewrite_atom(a) for a in d.conjuncts))
              for d in f.conclusion))


def _xs(sorts: Sequence[str]) -> tuple[Var, ...]:
    return tuple(Var(f"X{i + 1}", s) for i, s in enumerate(sorts))


def equality_decidability_axiom(sort: str, name: str = "ax_g1") -> NamedFormula:
    x, y = Var("X", sort), Var("Y", sort)
    return NamedFormula(name, "axiom", CoherentFormula(
        (x, y), (), (Disjunct((), (Atom(EQ, (x, y)),)), Disjunct((), (Atom(NEQ, (x, y)),)))))


def encode_negation(t: Theory, extra: Iterable[NamedFormula] = ()) -> Theory:
    """Replace negated atoms by atoms over partner predicates.

    Every predicate ``r`` that occurs negated gets a partner ``r_bar`` plus
    the axioms ``r_bar_incompatibility`` (r & r_bar => false) and
    ``r_bar_totality`` (r | r_bar).  Negated equality becomes ``!=``.
    ``extra`` formulas (conjectures) are scanned for negations too; rewrite
    them with :func:`encode_formula`.
    """
    negated: dict[str, None] = {}
    for nf in list(t.axioms) + list(extra):
        for a in nf.formula.atoms():
            if a.negated and a.pred not in BUILTIN:
                negated.setdefault(a.pred)
    if not negated and not any(a.negated for nf in t.axioms for a in nf.formula.atoms()):
        return t
    preds = list(t.signature.predicates)
    by_name = {p.name: i for i, p in enumerate(preds)}
    new_axioms = [NamedFormula(a.name, a.role, _rewrite_formula(a.formula)) for a in t.axioms]
    names = {a.name for a in new_axioms}
    for r in negated:
        p = preds[by_name[r]]
        bar = _bar(r)
        preds[by_name[r]] = replace(p, negated_partner=bar)
        if bar not in by_name:
            by_name[bar] = len(preds)
            preds.append(PredicateSymbol(bar, p.arg_sorts, negated_partner=r))
        xs = _xs(p.arg_sorts)
        pos, neg = Atom(r, xs), Atom(bar, xs)
        inc = NamedFormula(f"{bar}_incompatibility", "axiom", CoherentFormula(xs, (pos, neg), ()))
        tot = NamedFormula(f"{bar}_totality", "axiom", CoherentFormula(
            xs, (), (Disjunct((), (pos,)), Disjunct((), (neg,)))))
        for ax in (inc, tot):
            if ax.name not in names:
                new_axioms.append(ax)
                names.add(ax.name)
    sig = replace(t.signature, predicates=tuple(preds))
    return replace(t, signature=sig, axioms=tuple(new_axioms))


def encode_formula(nf: NamedFormula) -> NamedFormula:
    return replace(nf, formula=_rewrite_formula(nf.formula))
