"""Proof objects of the four-rule calculus and an independent checker.

A proof is ``mp* (cs(proof, proof, ...) | as | efq)``: a list of forward
steps closed by a case split, by reaching a goal disjunct ("from"), or by
a contradiction.  Equality reasoning appears as explicit substitution
steps, which carry no axiom name.

The checker replays a proof against the theory using only
:mod:`clvernacular.logic`; it shares no code with the prover.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence, Union

from . import logic
from .logic import EQ, NEQ, Atom, CoherentFormula, Const, NamedFormula, Theory, Var

FALSE = Atom("$false")
INDENT = 3

Disjunction = tuple[tuple[Atom, ...], ...]


@dataclass(frozen=True)
class ModusPonens:
    axiom: str
    binding: tuple[tuple[str, Const], ...]
    premises: tuple[Atom, ...]
    derived: Disjunction
    witnesses: tuple[Const, ...] = ()


@dataclass(frozen=True)
class EqualitySubstitution:
    """``derived`` is ``source`` with terms replaced along ``equations``.

    ``source`` is None only for reflexive equations ``a = a``.
    """

    source: Optional[Atom]
    equations: tuple[Atom, ...]
    derived: Atom

    @property
    def premises(self) -> tuple[Atom, ...]:
        return ((self.source,) if self.source is not None else ()) + self.equations


@dataclass(frozen=True)
class ProofStep:
    rule: Union[ModusPonens, EqualitySubstitution]
    indentation: int = 0


@dataclass(frozen=True)
class From:
    facts: tuple[Atom, ...]
    index: int
    witnesses: tuple[tuple[str, Const], ...] = ()


@dataclass(frozen=True)
class Efq:
    facts: tuple[Atom, ...]
    axiom: Optional[str] = None


@dataclass(frozen=True)
class CaseSplit:
    disjunction: Disjunction
    branches: tuple["ProofTree", ...]


THESIS = "goal_reached_thesis"
CONTRADICTION = "goal_reached_contradiction"


@dataclass(frozen=True)
class ProofClosing:
    rule: Union[CaseSplit, From, Efq]
    outcome: str = THESIS
    indentation: int = 0


@dataclass(frozen=True)
class ProofTree:
    steps: tuple[ProofStep, ...]
    closing: ProofClosing
    name: Optional[str] = None

    def walk(self):
        """Yield every (sub)tree, parents before children."""
        yield self
        if isinstance(self.closing.rule, CaseSplit):
            for b in self.closing.rule.branches:
                yield from b.walk()

    def size(self) -> int:
        return sum(len(t.steps) + 1 for t in self.walk())

    def axioms_used(self) -> list[str]:
        out: dict[str, None] = {}
        for t in self.walk():
            for s in t.steps:
                if isinstance(s.rule, ModusPonens):
                    out.setdefault(s.rule.axiom)
            if isinstance(t.closing.rule, Efq) and t.closing.rule.axiom:
                out.setdefault(t.closing.rule.axiom)
        return list(out)


def expected_outcome(rule) -> str:
    if isinstance(rule, From):
        return THESIS
    if isinstance(rule, Efq):
        return CONTRADICTION
    outs = {expected_outcome(b.closing.rule) for b in rule.branches}
    return CONTRADICTION if outs == {CONTRADICTION} else THESIS


def reindent(pt: ProofTree, depth: int = 0) -> ProofTree:
    """Copy of ``pt`` whose indentation fields are recomputed from structure."""
    ind = 2 * INDENT * depth
    rule = pt.closing.rule
    if isinstance(rule, CaseSplit):
        rule = CaseSplit(rule.disjunction, tuple(reindent(b, depth + 1) for b in rule.branches))
    return ProofTree(tuple(ProofStep(s.rule, ind) for s in pt.steps),
                     ProofClosing(rule, pt.closing.outcome, ind), pt.name)


# -- checking ----------------------------------------------------------------

@dataclass(frozen=True)
class Ok:
    def __bool__(self):
        return True


@dataclass(frozen=True)
class Violation:
    path: str
    rule: str
    detail: str

    def __bool__(self):
        return False

    def __str__(self):
        return f"{self.path}: [{self.rule}] {self.detail}"


CheckResult = Union[Ok, Violation]


class _Fail(Exception):
    def __init__(self, rule, detail):
        self.rule, self.detail = rule, detail


class _Classes:
    """Naive equivalence closure over a handful of equations."""

    def __init__(self, eqs: Iterable[Atom]):
        self.parent: dict[Const, Const] = {}
        for e in eqs:
            a, b = self.find(e.args[0]), self.find(e.args[1])
            if a != b:
                self.parent[a] = b

    def find(self, c):
        while c in self.parent:
            c = self.parent[c]
        return c

    def same(self, a, b) -> bool:
        return self.find(a) == self.find(b)


def equality_consequence(premises: Sequence[Atom], derived: Atom) -> bool:
    """Does ``derived`` follow from ``premises`` by equality reasoning alone?"""
    cls = _Classes(p for p in premises if p.pred == EQ)
    if derived.pred == EQ:
        return cls.same(*derived.args)
    for p in premises:
        if p.pred != derived.pred or len(p.args) != len(derived.args):
            continue
        if all(cls.same(x, y) for x, y in zip(p.args, derived.args)):
            return True
        if p.pred == NEQ and cls.same(p.args[0], derived.args[1]) \
                and cls.same(p.args[1], derived.args[0]):
            return True
    return False


def _match(pattern: Atom, ground: Atom, binding: dict) -> bool:
    if pattern.pred != ground.pred or len(pattern.args) != len(ground.args):
        return False
    for p, g in zip(pattern.args, ground.args):
        if isinstance(p, Var):
            if binding.setdefault(p, g) != g:
                return False
        elif p != g:
            return False
    return True


class Checker:
    def __init__(self, theory: Theory, extra: Sequence[NamedFormula] = ()):
        self.theory = theory
        self.sig = theory.signature
        self.axioms: dict[str, CoherentFormula] = {a.name: a.formula for a in theory.axioms}
        for a in extra:
            self.axioms.setdefault(a.name, a.formula)
        self.base_constants = {c for c in theory.signature.constants}
        for f in self.axioms.values():
            self.base_constants.update(logic.formula_constants(f))

    def check(self, conjecture: NamedFormula, pt: ProofTree) -> CheckResult:
        f = conjecture.formula
        taken = {c.name for c in self.base_constants}
        consts = logic.conjecture_constants(f, taken)
        gamma = set(logic.substitute(f.premises, consts))
        goal = tuple(logic.Disjunct(d.vars, tuple(logic.substitute_atom(a, consts, partial=True)
                                                  for a in d.conjuncts))
                     for d in f.conclusion)
        known = set(self.base_constants) | set(consts.values()) | _consts(gamma)
        for d in goal:
            for a in d.conjuncts:
                known.update(a.constants())
        return self._walk(pt, gamma, set(), known, goal, "root", 0)

    def _walk(self, pt, gamma, disj, known, goal, path, depth) -> CheckResult:
        gamma, disj, known = set(gamma), set(disj), set(known)
        ind = 2 * INDENT * depth
        for i, step in enumerate(pt.steps):
            where = f"{path}/step[{i}]"
            if not isinstance(step, ProofStep):
                return Violation(where, "grammar", "only mp steps may precede a closing")
            if step.indentation != ind:
                return Violation(where, "indentation",
                                 f"stored {step.indentation}, structure gives {ind}")
            try:
                self._step(step.rule, gamma, disj, known)
            except _Fail as e:
                return Violation(where, e.rule, e.detail)
        c = pt.closing
        where = f"{path}/closing"
        if not isinstance(c, ProofClosing):
            return Violation(where, "grammar", "proof must end with exactly one closing")
        if c.indentation != ind:
            return Violation(where, "indentation", f"stored {c.indentation}, structure gives {ind}")
        r = c.rule
        try:
            if isinstance(r, CaseSplit):
                if len(r.branches) < 2:
                    raise _Fail("grammar", "cs requires >= 2 branches")
                if r.disjunction not in disj:
                    raise _Fail("cs", "split disjunction is not an established fact")
                if len(r.branches) != len(r.disjunction):
                    raise _Fail("cs", "branch count differs from disjunct count")
                for k, (d, b) in enumerate(zip(r.disjunction, r.branches)):
                    res = self._walk(b, gamma | set(d), disj, known | _consts(d), goal,
                                     f"{path}/case[{k}]", depth + 1)
                    if not res:
                        return res
            elif isinstance(r, From):
                self._from(r, gamma, goal)
            elif isinstance(r, Efq):
                self._efq(r, gamma)
            else:
                raise _Fail("grammar", f"unknown closing {type(r).__name__}")
            if c.outcome != expected_outcome(r):
                raise _Fail("outcome", f"closing marked {c.outcome}")
        except _Fail as e:
            return Violation(where, e.rule, e.detail)
        return Ok()

    def _present(self, a: Atom, gamma) -> bool:
        return a in gamma or (a.pred == EQ and a.args[0] == a.args[1])

    def _step(self, r, gamma, disj, known):
        if isinstance(r, EqualitySubstitution):
            for p in r.premises:
                if not self._present(p, gamma):
                    raise _Fail("eq", f"premise {p} is not an established fact")
            if any(e.pred != EQ for e in r.equations):
                raise _Fail("eq", "substitution equations must be equalities")
            if not equality_consequence(r.premises, r.derived):
                raise _Fail("eq", f"{r.derived} does not follow by substitution")
            gamma.add(r.derived)
            return
        if not isinstance(r, ModusPonens):
            raise _Fail("grammar", "only mp steps may precede a closing")
        ax = self.axioms.get(r.axiom)
        if ax is None:
            raise _Fail("mp", f"unknown axiom {r.axiom}")
        names = tuple(n for n, _ in r.binding)
        if names != tuple(v.name for v in ax.vars):
            raise _Fail("mp", "binding does not cover the universal variables")
        env = {}
        for v, (_, c) in zip(ax.vars, r.binding):
            if c.sort != v.sort:
                raise _Fail("mp", f"sort mismatch for {v.name}")
            env[v] = c
        try:
            inst = tuple(logic.substitute(ax.premises, env))
        except logic.LogicError as e:
            raise _Fail("mp", str(e))
        if inst != tuple(r.premises):
            raise _Fail("mp", "premise facts do not instantiate the axiom")
        for p in inst:
            if not self._present(p, gamma):
                raise _Fail("mp", f"premise {p} is not an established fact")
        evars = ax.existential_vars
        if len(r.witnesses) != len(evars):
            raise _Fail("freshness", "wrong number of witnesses")
        if len(set(r.witnesses)) != len(r.witnesses):
            raise _Fail("freshness", "witnesses are not distinct")
        for w in r.witnesses:
            if w in known:
                raise _Fail("freshness", f"witness {w} is not fresh")
        for v, w in zip(evars, r.witnesses):
            if v.sort != w.sort:
                raise _Fail("freshness", f"witness {w} has the wrong sort")
            env[v] = w
        if logic.instantiate_conclusion(ax, env) != tuple(r.derived):
            raise _Fail("mp", "derived formula is not the conclusion instance")
        known.update(r.witnesses)
        if len(r.derived) == 0:
            gamma.add(FALSE)
        elif len(r.derived) == 1:
            gamma.update(r.derived[0])
        else:
            disj.add(tuple(r.derived))

    def _from(self, r: From, gamma, goal):
        if not 0 <= r.index < len(goal):
            raise _Fail("as", f"goal has no disjunct {r.index}")
        d = goal[r.index]
        if tuple(n for n, _ in r.witnesses) != tuple(v.name for v in d.vars):
            raise _Fail("as", "witness binding does not cover the goal's existentials")
        env = {v: c for v, (_, c) in zip(d.vars, r.witnesses)}
        try:
            inst = tuple(logic.substitute(d.conjuncts, env))
        except logic.LogicError as e:
            raise _Fail("as", str(e))
        if inst != tuple(r.facts):
            raise _Fail("as", "facts do not instantiate the goal disjunct")
        for a in inst:
            if not self._present(a, gamma):
                raise _Fail("as", f"{a} is not an established fact")

    def _efq(self, r: Efq, gamma):
        for a in r.facts:
            if not self._present(a, gamma):
                raise _Fail("efq", f"{a} is not an established fact")
        if FALSE in r.facts:
            return
        if r.axiom is not None:
            ax = self.axioms.get(r.axiom)
            if ax is None:
                raise _Fail("efq", f"unknown axiom {r.axiom}")
            if ax.conclusion:
                raise _Fail("efq", f"{r.axiom} does not conclude false")
            env: dict = {}
            if len(ax.premises) != len(r.facts) or not all(
                    _match(p, g, env) for p, g in zip(ax.premises, r.facts)):
                raise _Fail("efq", f"facts do not instantiate {r.axiom}")
            return
        cls = _Classes(a for a in r.facts if a.pred == EQ)
        for a in r.facts:
            if a.pred == NEQ and cls.same(*a.args):
                return
            bar = self.sig.partner(a.pred) if a.pred not in logic.BUILTIN else None
            if bar is None:
                continue
            for b in r.facts:
                if b.pred == bar and all(cls.same(x, y) for x, y in zip(a.args, b.args)):
                    return
        raise _Fail("efq", "facts are not contradictory")


def _consts(atoms) -> set[Const]:
    return {c for a in atoms for c in a.constants()}


def check_proof(theory: Theory, conjecture: NamedFormula, pt: ProofTree,
                extra: Sequence[NamedFormula] = ()) -> CheckResult:
    return Checker(theory, extra).check(conjecture, pt)
