"""Forward-chaining prover for coherent logic.

The search saturates the fact base with modus ponens, closes a branch when
a goal disjunct holds or a contradiction appears, and otherwise splits on a
derived disjunction (or, lazily, on an excluded-middle instance that some
axiom or the goal could use).  Rounds of bounded search are repeated with
growing limits.

Equality is handled by a union-find over constants.  Facts are stored as
derived; matching works on their canonical forms, and every place where a
canonical match differs from the literal fact records which equations
explain the difference, so that proof extraction can emit explicit
substitution steps.
"""

from __future__ import annotations

import itertools
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence, Union

from . import logic
from .logic import (EQ, NEQ, Atom, CoherentFormula, Const, NamedFormula, Theory, Var)
from .proof import (CONTRADICTION, THESIS, CaseSplit, EqualitySubstitution, Efq, From,
                    ModusPonens, ProofClosing, ProofStep, ProofTree, INDENT)

SYMMETRIC = (EQ, NEQ)


# -- justifications ----------------------------------------------------------

@dataclass(frozen=True)
class Link:
    """A premise instance together with the fact that supports it.

    ``fact`` is None when the instance is an equation entailed by the
    union-find alone.  ``equations`` are ids of equality facts that turn the
    supporting fact into ``instance``.
    """

    fact: Optional[int]
    instance: Atom
    equations: tuple[int, ...] = ()

    def deps(self) -> tuple[int, ...]:
        return ((self.fact,) if self.fact is not None else ()) + self.equations


@dataclass(frozen=True)
class InitialPremise:
    pass


@dataclass(frozen=True)
class CaseAssumption:
    disjunction: int
    branch: int


@dataclass
class MpInstance:
    id: int
    axiom: str
    binding: tuple[tuple[Var, Const], ...]
    links: tuple[Link, ...]
    witnesses: tuple[Const, ...]
    derived: tuple[tuple[Atom, ...], ...]
    produced: list[int] = field(default_factory=list)

    def deps(self) -> list[int]:
        return [d for l in self.links for d in l.deps()]


@dataclass(frozen=True)
class EqualityRewrite:
    source: int
    equations: tuple[int, ...]


Justification = Union[InitialPremise, CaseAssumption, MpInstance, EqualityRewrite]


@dataclass(frozen=True)
class Fact:
    id: int
    atom: Atom
    just: Justification


@dataclass(frozen=True)
class PendingDisjunction:
    id: int
    disjuncts: tuple[tuple[Atom, ...], ...]
    just: MpInstance


# -- outcomes ----------------------------------------------------------------

@dataclass(frozen=True)
class NewFacts:
    facts: tuple[Fact, ...]


@dataclass(frozen=True)
class NewDisjunction:
    id: int


@dataclass(frozen=True)
class Bottom:
    links: tuple[Link, ...]
    axiom: Optional[str] = None


class _Redundant:
    def __repr__(self):
        return "Redundant"


Redundant = _Redundant()
MpOutcome = Union[NewFacts, NewDisjunction, Bottom, _Redundant]


@dataclass(frozen=True)
class SearchLimits:
    max_steps: int = 8192
    max_splits: int = 10
    wall_clock: float = 60.0
    base_steps: int = 8

    def schedule(self) -> list[tuple[int, int]]:
        """Rounds of (steps per branch, split depth): 8*2^k steps and k splits."""
        out: list[tuple[int, int]] = []
        for k in itertools.count():
            r = (min(self.base_steps * 2 ** k, self.max_steps), min(k, self.max_splits))
            if out and r == out[-1]:
                break
            out.append(r)
        return out


@dataclass(frozen=True)
class Proved:
    proof: ProofTree
    round: tuple[int, int]
    elapsed: float

    @property
    def status(self):
        return "PROVED"


@dataclass(frozen=True)
class Exhausted:
    limits_tried: tuple[tuple[int, int], ...]
    elapsed: float = 0.0

    @property
    def status(self):
        return "EXHAUSTED"


@dataclass(frozen=True)
class Timeout:
    limits_tried: tuple[tuple[int, int], ...]
    elapsed: float = 0.0

    @property
    def status(self):
        return "TIMEOUT"


ProveResult = Union[Proved, Exhausted, Timeout]


class _Deadline(Exception):
    pass


# -- fact base ---------------------------------------------------------------

class Counter:
    """Problem-global id and witness-name source, plus constant ages."""

    def __init__(self, constants: Sequence[Const]):
        self.age: dict[Const, int] = {}
        for c in constants:
            self.age.setdefault(c, len(self.age))
        self.next_id = 0
        self.next_witness = 0
        self.names = {c.name for c in self.age}

    def fresh_id(self) -> int:
        self.next_id += 1
        return self.next_id

    def witness(self, sort: str) -> Const:
        while True:
            self.next_witness += 1
            name = f"w{self.next_witness}"
            if name not in self.names:
                break
        c = Const(name, sort)
        self.names.add(name)
        self.age[c] = len(self.age)
        return c


class FactBase:
    """Ground facts of one branch, with union-find equality."""

    def __init__(self, counter: Counter, store: dict):
        self.counter = counter
        self.store = store  # id -> Fact | PendingDisjunction, shared by all branches
        self.facts: list[Fact] = []
        self.by_pred: dict[str, list[Fact]] = {}
        self.parent: dict[Const, Const] = {}
        self.edges: dict[Const, list[tuple[Const, int]]] = {}
        self.keys: set = set()
        self.pending: list[PendingDisjunction] = []
        self.constants: list[Const] = []
        self._known: set[Const] = set()
        self.applied: set = set()
        self.pending_keys: set = set()

    def copy(self) -> "FactBase":
        fb = FactBase.__new__(FactBase)
        fb.counter, fb.store = self.counter, self.store
        fb.facts = list(self.facts)
        fb.by_pred = {k: list(v) for k, v in self.by_pred.items()}
        fb.parent = dict(self.parent)
        fb.edges = {k: list(v) for k, v in self.edges.items()}
        fb.keys = set(self.keys)
        fb.pending = list(self.pending)
        fb.constants = list(self.constants)
        fb._known = set(self._known)
        fb.applied = set(self.applied)
        fb.pending_keys = set(self.pending_keys)
        return fb

    # union-find
    def find(self, c: Const) -> Const:
        root = c
        while root in self.parent:
            root = self.parent[root]
        while c != root:
            nxt = self.parent[c]
            self.parent[c] = root
            c = nxt
        return root

    def canonical(self, atom: Atom) -> Atom:
        args = tuple(self.find(a) for a in atom.args)
        if atom.pred in SYMMETRIC and self.counter.age[args[1]] < self.counter.age[args[0]]:
            args = (args[1], args[0])
        return Atom(atom.pred, args)

    def reps(self, sort: Optional[str] = None) -> list[Const]:
        return [c for c in self.constants if c not in self.parent and
                (sort is None or c.sort == sort)]

    def add_constant(self, c: Const):
        if c not in self._known:
            self._known.add(c)
            self.constants.append(c)
            self.counter.age.setdefault(c, len(self.counter.age))

    def holds(self, atom: Atom) -> bool:
        c = self.canonical(atom)
        if c.pred == EQ:
            return c.args[0] == c.args[1]
        return c in self.keys

    def add(self, atom: Atom, just: Justification) -> Optional[Fact]:
        """Insert a ground fact; None if it already holds."""
        for c in atom.constants():
            self.add_constant(c)
        if self.holds(atom):
            return None
        f = Fact(self.counter.fresh_id(), atom, just)
        self.store[f.id] = f
        self.facts.append(f)
        self.by_pred.setdefault(atom.pred, []).append(f)
        self.keys.add(self.canonical(atom))
        if atom.pred == EQ:
            self.merge_equal(atom.args[0], atom.args[1], f.id)
        return f

    def merge_equal(self, lhs: Const, rhs: Const, fact_id: Optional[int] = None
                    ) -> list[tuple[Fact, Atom]]:
        """Merge the classes of ``lhs`` and ``rhs``; the older constant represents.

        Returns the facts whose canonical form changed, each paired with its
        new canonical atom.
        """
        a, b = self.find(lhs), self.find(rhs)
        if fact_id is not None:
            self.edges.setdefault(lhs, []).append((rhs, fact_id))
            self.edges.setdefault(rhs, []).append((lhs, fact_id))
        if a == b:
            return []
        old, new = (a, b) if self.counter.age[a] < self.counter.age[b] else (b, a)
        touched = [f for f in self.facts if new in (self.find(x) for x in f.atom.args)]
        self.parent[new] = old
        self.keys = {self.canonical(f.atom) for f in self.facts}
        return [(f, self.canonical(f.atom)) for f in touched]

    def explain(self, a: Const, b: Const) -> tuple[int, ...]:
        """Ids of equality facts forming a path from ``a`` to ``b``."""
        if a == b:
            return ()
        prev: dict[Const, tuple[Const, int]] = {a: (a, -1)}
        queue = deque([a])
        while queue:
            x = queue.popleft()
            if x == b:
                break
            for y, fid in self.edges.get(x, ()):
                if y not in prev:
                    prev[y] = (x, fid)
                    queue.append(y)
        if b not in prev:
            raise ValueError(f"{a} and {b} are not known to be equal")
        path = []
        x = b
        while x != a:
            x, fid = prev[x]
            path.append(fid)
        return tuple(reversed(path))

    def link(self, fact: Optional[Fact], instance: Atom) -> Link:
        if fact is None:
            return Link(None, instance, self.explain(*instance.args))
        src = fact.atom.args
        dst = instance.args
        if instance.pred in SYMMETRIC and not all(
                self.find(x) == self.find(y) for x, y in zip(src, dst)):
            dst = (dst[1], dst[0])
        eqs: dict[int, None] = {}
        for x, y in zip(src, dst):
            for e in self.explain(x, y):
                eqs.setdefault(e)
        return Link(fact.id, instance, tuple(eqs))

    def contradiction(self) -> Optional[Fact]:
        for f in self.by_pred.get(NEQ, ()):
            if self.find(f.atom.args[0]) == self.find(f.atom.args[1]):
                return f
        return None

    def cooccurring(self) -> list[frozenset]:
        return [frozenset(self.find(c) for c in f.atom.args) for f in self.facts]


# -- matching ----------------------------------------------------------------

def _order(patterns: Sequence[Atom]) -> list[int]:
    """Premise order: left to right, equations last."""
    return sorted(range(len(patterns)), key=lambda i: patterns[i].pred == EQ)


def _bind(fb: FactBase, pattern: Atom, args: Sequence[Const], binding: dict) -> Optional[dict]:
    out = None
    for p, c in zip(pattern.args, args):
        if isinstance(p, Var):
            cur = (out or binding).get(p)
            if cur is None:
                if p.sort != c.sort:
                    return None
                if out is None:
                    out = dict(binding)
                out[p] = c
            elif fb.find(cur) != c:
                return None
        elif fb.find(p) != c:
            return None
    return out if out is not None else dict(binding)


def match_atoms(fb: FactBase, patterns: Sequence[Atom], binding: Optional[dict] = None
                ) -> Iterator[tuple[dict, list[Optional[Fact]]]]:
    """All extensions of ``binding`` making every pattern hold in ``fb``.

    Yields the binding (values are class representatives) and, per pattern
    in input order, the fact it was matched against (None for equations
    that hold by union-find).
    """
    order = _order(patterns)
    chosen: list[Optional[Fact]] = [None] * len(patterns)

    def go(k: int, b: dict):
        if k == len(order):
            yield b, list(chosen)
            return
        i = order[k]
        p = patterns[i]
        if p.pred == EQ:
            x, y = p.args
            bx = b.get(x) if isinstance(x, Var) else fb.find(x)
            by = b.get(y) if isinstance(y, Var) else fb.find(y)
            chosen[i] = None
            if bx is not None and by is not None:
                if fb.find(bx) == fb.find(by):
                    yield from go(k + 1, b)
            elif bx is not None or by is not None:
                c = fb.find(bx if bx is not None else by)
                v = y if bx is not None else x
                if v.sort == c.sort:
                    yield from go(k + 1, {**b, v: c})
            else:
                for c in fb.reps(x.sort):
                    yield from go(k + 1, {**b, x: c, y: c} if x != y else {**b, x: c})
            return
        for f in fb.by_pred.get(p.pred, ()):
            canon = [fb.find(a) for a in f.atom.args]
            seen = []
            orients = [canon] + ([canon[::-1]] if p.pred in SYMMETRIC else [])
            for args in orients:
                nb = _bind(fb, p, args, b)
                if nb is None or nb in seen:
                    continue
                seen.append(nb)
                chosen[i] = f
                yield from go(k + 1, nb)

    yield from go(0, dict(binding or {}))


def match_premises(axiom: CoherentFormula, fb: FactBase) -> Iterator[dict]:
    """Bindings of the premise variables under which all premises hold."""
    for b, _ in match_atoms(fb, axiom.premises):
        yield b


# -- the prover --------------------------------------------------------------

def initialize_state(theory: Theory, conjecture: NamedFormula,
                     counter: Optional[Counter] = None
                     ) -> tuple[FactBase, tuple[logic.Disjunct, ...]]:
    """Fact base holding the conjecture's premises over fresh constants, and the goal."""
    base = list(theory.signature.constants)
    for a in theory.axioms:
        base += logic.formula_constants(a.formula)
    f = conjecture.formula
    consts = logic.conjecture_constants(f, {c.name for c in base})
    if counter is None:
        counter = Counter(base + list(consts.values()) + logic.formula_constants(f))
    fb = FactBase(counter, {})
    for c in base + list(consts.values()) + logic.formula_constants(f):
        fb.add_constant(c)
    for a in logic.substitute(f.premises, consts):
        fb.add(a, InitialPremise())
    goal = tuple(logic.Disjunct(d.vars, tuple(logic.substitute_atom(a, consts, partial=True)
                                              for a in d.conjuncts))
                 for d in f.conclusion)
    return fb, goal


def _binding_tuple(f: CoherentFormula, b: dict) -> tuple[tuple[Var, Const], ...]:
    return tuple((v, b[v]) for v in f.vars)


def apply_mp(fb: FactBase, axiom: NamedFormula, binding: dict,
             matched: Optional[Sequence[Optional[Fact]]] = None) -> MpOutcome:
    """Apply one axiom instance to ``fb`` (mutating it)."""
    f = axiom.formula
    if matched is None:
        found = next(iter(match_atoms(fb, f.premises, binding)), None)
        if found is None:
            raise ValueError(f"premises of {axiom.name} do not hold under the binding")
        matched = found[1]
    links = tuple(fb.link(m, logic.substitute_atom(p, binding))
                  for p, m in zip(f.premises, matched))
    if not f.conclusion:
        return Bottom(links, axiom.name)
    for d in f.conclusion:
        if next(iter(match_atoms(fb, d.conjuncts, binding)), None) is not None:
            return Redundant
    env = dict(binding)
    evars = f.existential_vars if len(f.conclusion) > 1 else f.conclusion[0].vars
    witnesses = tuple(fb.counter.witness(v.sort) for v in evars)
    env.update(zip(evars, witnesses))
    for w in witnesses:
        fb.add_constant(w)
    derived = logic.instantiate_conclusion(f, env)
    rec = MpInstance(fb.counter.fresh_id(), axiom.name, _binding_tuple(f, binding), links,
                     witnesses, derived)
    if len(derived) == 1:
        out = []
        for a in derived[0]:
            fact = fb.add(a, rec)
            if fact is not None:
                rec.produced.append(fact.id)
                out.append(fact)
        return NewFacts(tuple(out))
    key = tuple(tuple(fb.canonical(a) for a in d) for d in derived)
    if not witnesses and key in fb.pending_keys:
        return Redundant
    fb.pending_keys.add(key)
    pd = PendingDisjunction(rec.id, derived, rec)
    fb.store[pd.id] = pd
    rec.produced.append(pd.id)
    fb.pending.append(pd)
    return NewDisjunction(pd.id)


@dataclass
class _Node:
    depth: int
    fb: FactBase
    events: list = field(default_factory=list)
    local: set = field(default_factory=set)
    closing: Optional[tuple] = None
    keep: set = field(default_factory=set)


_FIXPOINT, _BUDGET = "fixpoint", "budget"


class Prover:
    def __init__(self, theory: Theory, conjecture: NamedFormula,
                 limits: Optional[SearchLimits] = None, hints: Optional[Sequence[str]] = None):
        self.theory = theory
        self.conjecture = conjecture
        self.limits = limits or SearchLimits()
        if hints is not None:
            axs = []
            for h in hints:
                a = theory.axiom(h)
                if a is None:
                    raise ValueError(f"hint {h!r} names no axiom or theorem")
                axs.append(a)
        else:
            axs = list(theory.axioms)
        sig = theory.signature
        # Horn rules first, then disjunctive ones, then rules introducing witnesses
        self.axioms = sorted((a for a in axs if not logic.is_excluded_middle(a.formula, sig)),
                             key=lambda a: (bool(a.formula.existential_vars),
                                            len(a.formula.conclusion) > 1))
        self._branching = {a.name for a in self.axioms
                           if a.formula.existential_vars or len(a.formula.conclusion) > 1}
        self.excluded_middle = [a for a in axs if logic.is_excluded_middle(a.formula, sig)]
        self._steps = 0

    # - entry point
    def prove(self) -> ProveResult:
        start = time.monotonic()
        self.deadline = start + self.limits.wall_clock
        tried = []
        try:
            for steps, splits in self.limits.schedule():
                tried.append((steps, splits))
                self.limit_hit = False
                root = self._round(steps, splits)
                if root is not None:
                    return Proved(self._extract(root), (steps, splits),
                                  time.monotonic() - start)
                if not self.limit_hit:
                    break
        except _Deadline:
            return Timeout(tuple(tried), time.monotonic() - start)
        return Exhausted(tuple(tried), time.monotonic() - start)

    def _tick(self):
        self._steps += 1
        if self._steps % 64 == 0 and time.monotonic() > self.deadline:
            raise _Deadline()

    def _round(self, steps: int, splits: int) -> Optional[_Node]:
        fb, goal = initialize_state(self.theory, self.conjecture)
        self.counter = fb.counter
        self.goal = goal
        self.store = fb.store
        self.initial = [f.id for f in fb.facts]
        return self._search(fb, 0, steps, splits)

    # - closing tests
    def _closed(self, fb: FactBase) -> Optional[tuple]:
        bad = fb.contradiction()
        if bad is not None:
            return ("efq_neq", bad, fb.link(None, Atom(EQ, bad.atom.args)))
        for i, d in enumerate(self.goal):
            found = next(iter(match_atoms(fb, d.conjuncts)), None)
            if found is not None:
                b, facts = found
                wit = tuple((v, b[v]) for v in d.vars)
                links = tuple(fb.link(m, logic.substitute_atom(a, b))
                              for a, m in zip(d.conjuncts, facts))
                return ("from", i, wit, links)
        return None

    def _bindings(self, ax: NamedFormula, fb: FactBase) -> Iterator[tuple[dict, list]]:
        f = ax.formula
        prem_vars = set().union(*(logic.free_vars(p) for p in f.premises)) if f.premises else set()
        free = [v for v in f.vars if v not in prem_vars]
        for b, facts in match_atoms(fb, f.premises):
            if not free:
                yield b, facts
                continue
            pools = [fb.reps(v.sort) for v in free]
            for combo in itertools.product(*pools):
                nb = dict(b)
                nb.update(zip(free, combo))
                yield nb, facts

    def _saturate(self, node: _Node, budget: int):
        """Apply mp until a branch closes, the budget runs out or nothing is new.

        After every productive application the scan restarts from the first
        axiom, so cheap Horn rules reach their closure before the next
        disjunctive or existential instance is taken.
        """
        fb = node.fb
        steps = 0
        while True:
            out = None
            for ax in self.axioms:
                bindings = self._bindings(ax, fb)
                if ax.name in self._branching:
                    # oldest constants first, so witnesses do not starve older instances
                    age = self.counter.age
                    bindings = sorted(bindings, key=lambda bf: max(
                        (age[c] for c in bf[0].values()), default=-1))
                for b, facts in bindings:
                    self._tick()
                    key = (ax.name, tuple(fb.find(b[v]) for v in ax.formula.vars))
                    if key in fb.applied:
                        continue
                    fb.applied.add(key)
                    out = apply_mp(fb, ax, b, facts)
                    if out is not Redundant:
                        break
                    out = None
                if out is not None:
                    break
            if out is None:
                return _FIXPOINT
            steps += 1
            if isinstance(out, Bottom):
                return ("efq", out.links, out.axiom)
            if isinstance(out, NewDisjunction):
                rec = fb.store[out.id].just
            else:
                rec = out.facts[0].just if out.facts else None
            if rec is not None:
                node.events.append(rec)
                node.local.update(rec.produced)
            closing = self._closed(fb)
            if closing is not None:
                return closing
            if steps >= budget:
                return _BUDGET

    def _relevant_splits(self, fb: FactBase) -> list[tuple[NamedFormula, dict]]:
        """Excluded-middle instances that some axiom premise or the goal could use."""
        by_pred: dict[str, NamedFormula] = {}
        sig = self.theory.signature
        for em in self.excluded_middle:
            d1, d2 = em.formula.conclusion
            by_pred.setdefault(d1.conjuncts[0].pred, em)
            by_pred.setdefault(d2.conjuncts[0].pred, em)
        if not by_pred:
            return []
        wanted: dict[tuple, None] = {}

        def want(pred: str, args):
            em = by_pred.get(pred)
            if em is None:
                return
            args = tuple(fb.find(a) for a in args)
            if pred in SYMMETRIC:
                if args[0] == args[1]:
                    return
                args = tuple(sorted(args, key=lambda c: self.counter.age[c]))
            wanted.setdefault((em.name, args))

        for d in self.goal:
            for a in d.conjuncts:
                if a.is_ground:
                    want(a.pred, a.args)
        for ax in self.axioms:
            prem = ax.formula.premises
            for i, p in enumerate(prem):
                if p.pred in by_pred:
                    rest = prem[:i] + prem[i + 1:]
                    for b, _ in match_atoms(fb, rest):
                        self._tick()
                        if logic.free_vars(p) <= set(b):
                            want(p.pred, logic.substitute_atom(p, b).args)
                # repeated variables inside one premise ask for an equation
                seen: dict[Var, int] = {}
                for j, t in enumerate(p.args):
                    if isinstance(t, Var) and t in seen and EQ in by_pred:
                        k = seen[t]
                        for f in fb.by_pred.get(p.pred, ()):
                            x, y = fb.find(f.atom.args[k]), fb.find(f.atom.args[j])
                            if x != y:
                                want(EQ, (x, y))
                    elif isinstance(t, Var):
                        seen[t] = j
        out = []
        for (name, args) in wanted:
            em = self.theory.axiom(name)
            f = em.formula
            if any(c.sort != v.sort for c, v in zip(args, f.vars)):
                continue
            b = dict(zip(f.vars, args))
            if any(fb.holds(logic.substitute_atom(d.conjuncts[0], b)) for d in f.conclusion):
                continue
            out.append((em, b))
        ages = self.counter.age
        out.sort(key=lambda eb: (tuple(ages[c] for c in eb[1].values()),
                                 self.excluded_middle.index(eb[0])))
        return out

    def _search(self, fb: FactBase, depth: int, budget: int, max_splits: int) -> Optional[_Node]:
        node = _Node(depth, fb)
        closing = self._closed(fb)
        status = None
        if closing is None:
            status = self._saturate(node, budget)
            if isinstance(status, tuple):
                closing = status
        if closing is not None:
            node.closing = closing
            return node
        if status == _BUDGET:
            self.limit_hit = True
        regular = [p for p in fb.pending
                   if not any(next(iter(match_atoms(fb, d)), None) is not None
                              for d in p.disjuncts)]
        cand = None
        if regular:
            cand = regular[0]
        elif status == _FIXPOINT:
            # no backtracking over candidates: deepening makes up for a poor first choice
            cand = next(iter(self._relevant_splits(fb)), None)
        if cand is None:
            return None
        if depth >= max_splits:
            self.limit_hit = True
            return None
        if isinstance(cand, PendingDisjunction):
            pd = cand
        else:
            em, b = cand
            out = apply_mp(fb, em, b, [])
            pd = fb.store[out.id]
            node.events.append(pd.just)
            node.local.add(pd.id)
        children = []
        for i, disjunct in enumerate(pd.disjuncts):
            child = fb.copy()
            child.pending = [p for p in child.pending if p.id != pd.id]
            assumed = []
            for a in disjunct:
                f = child.add(a, CaseAssumption(pd.id, i))
                if f is not None:
                    assumed.append(f)
            sub = self._search(child, depth + 1, budget, max_splits)
            if sub is None:
                return None
            sub.events[:0] = assumed
            sub.local.update(f.id for f in assumed)
            children.append(sub)
        node.closing = ("split", pd, children)
        return node

    # - proof extraction
    def _deps(self, i: int) -> list[int]:
        x = self.store[i]
        just = x.just
        if isinstance(just, MpInstance):
            return just.deps()
        return []

    def _mark(self, node: _Node) -> set[int]:
        required: list[int] = []
        c = node.closing
        if c[0] == "from":
            required += [d for l in c[3] for d in l.deps()]
        elif c[0] == "efq":
            required += [d for l in c[1] for d in l.deps()]
        elif c[0] == "efq_neq":
            required += [c[1].id] + list(c[2].equations)
        else:
            _, pd, children = c
            required.append(pd.id)
            for ch in children:
                required += sorted(self._mark(ch))
        outside: set[int] = set()
        stack = list(required)
        while stack:
            i = stack.pop()
            if i in node.local:
                if i not in node.keep:
                    node.keep.add(i)
                    stack.extend(self._deps(i))
            else:
                outside.add(i)
        return outside

    def _extract(self, root: _Node) -> ProofTree:
        self._mark(root)
        gamma = {self.store[i].atom for i in self.initial}
        return self._emit(root, gamma)

    def _eq_steps(self, links, gamma: set, ind: int) -> list[ProofStep]:
        out = []
        for l in links:
            inst = l.instance
            if inst in gamma or (inst.pred == EQ and inst.args[0] == inst.args[1]):
                continue
            eqs = tuple(self.store[e].atom for e in l.equations)
            if l.fact is not None:
                src = self.store[l.fact].atom
            else:
                src, eqs = eqs[0], eqs[1:]
            if src == inst:
                continue
            out.append(ProofStep(EqualitySubstitution(src, eqs, inst), ind))
            gamma.add(inst)
        return out

    def _emit(self, node: _Node, gamma: set) -> ProofTree:
        gamma = set(gamma)
        ind = 2 * INDENT * node.depth
        steps: list[ProofStep] = []
        for ev in node.events:
            if isinstance(ev, Fact):
                gamma.add(ev.atom)
                continue
            if not node.keep.intersection(ev.produced):
                continue
            steps += self._eq_steps(ev.links, gamma, ind)
            steps.append(ProofStep(ModusPonens(
                ev.axiom, tuple((v.name, c) for v, c in ev.binding),
                tuple(l.instance for l in ev.links), ev.derived, ev.witnesses), ind))
            if len(ev.derived) == 1:
                gamma.update(ev.derived[0])
        c = node.closing
        if c[0] == "from":
            _, i, wit, links = c
            steps += self._eq_steps(links, gamma, ind)
            rule = From(tuple(l.instance for l in links), i, tuple((v.name, k) for v, k in wit))
            outcome = THESIS
        elif c[0] == "efq":
            _, links, axiom = c
            steps += self._eq_steps(links, gamma, ind)
            rule = Efq(tuple(l.instance for l in links), axiom)
            outcome = CONTRADICTION
        elif c[0] == "efq_neq":
            _, bad, link = c
            rule = Efq((bad.atom,) + tuple(self.store[e].atom for e in link.equations))
            outcome = CONTRADICTION
        else:
            _, pd, children = c
            branches = tuple(self._emit(ch, gamma) for ch in children)
            rule = CaseSplit(pd.disjuncts, branches)
            outcome = (CONTRADICTION if all(b.closing.outcome == CONTRADICTION for b in branches)
                       else THESIS)
        return ProofTree(tuple(steps), ProofClosing(rule, outcome, ind))


def prove(theory: Theory, conjecture: NamedFormula, limits: Optional[SearchLimits] = None,
          hints: Optional[Sequence[str]] = None) -> ProveResult:
    return Prover(theory, conjecture, limits, hints).prove()


def read_hints(path: str) -> list[str]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                out.append(line)
    return out
