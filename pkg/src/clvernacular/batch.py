"""Proving a manifest of problems into one combined document.

Items are proved in manifest order as far as dependencies go: an item may
cite earlier manifest items, and those citations are only kept when the
earlier item was proved.  Items without pending dependencies can run in
parallel; the result never depends on the number of workers.
"""

from __future__ import annotations

import os
from concurrent.futures import FIRST_COMPLETED, Future, ProcessPoolExecutor, wait
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

from . import engine, tptp
from .document import Chapter, Frontpage, Item, VernacularDocument
from .logic import NamedFormula, PredicateSymbol, Signature, Theory
from .proof import ProofTree

ERROR = "ERROR"


@dataclass
class BatchConfig:
    limits: engine.SearchLimits = field(default_factory=engine.SearchLimits)
    hints: Optional[list[str]] = None
    jobs: int = 1
    frontpage: Frontpage = field(default_factory=Frontpage)
    chapter: str = "chapter"
    theory_name: str = "theory"


@dataclass
class Entry:
    """One summary row.  ``name`` is the conjecture name, or the path on load errors."""

    name: str
    source: str
    status: str = ERROR
    time: float = 0.0
    size: int = 0
    message: str = ""
    conjecture: Optional[NamedFormula] = None
    theory: Optional[Theory] = None
    proof: Optional[ProofTree] = None
    deps: tuple[str, ...] = ()


@dataclass
class BatchResult:
    document: VernacularDocument
    entries: list[Entry]

    def summary(self) -> str:
        rows = ["name\tstatus\ttime\tsize"]
        for e in self.entries:
            rows.append(f"{e.name}\t{e.status}\t{e.time:.3f}\t{e.size}")
        return "\n".join(rows) + "\n"


def read_manifest(path: str) -> list[str]:
    """Problem paths, relative to the manifest; ``#`` starts a comment."""
    base = os.path.dirname(os.path.abspath(path))
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                out.append(line if os.path.isabs(line) else os.path.join(base, line))
    return out


class MergeConflict(ValueError):
    pass


def _merge_named(acc: dict, items, what: str):
    for x in items:
        old = acc.get(x.name)
        if old is not None and old != x:
            raise MergeConflict(f"{what} {x.name!r} is declared differently in two problems")
        acc.setdefault(x.name, x)


class _SharedTheory:
    def __init__(self):
        self.sorts: dict[str, None] = {}
        self.predicates: dict[str, PredicateSymbol] = {}
        self.constants: dict = {}
        self.axioms: dict[str, NamedFormula] = {}

    def add(self, t: Theory):
        """Merge ``t``; all or nothing."""
        preds, consts, axioms = dict(self.predicates), dict(self.constants), dict(self.axioms)
        _merge_named(preds, t.signature.predicates, "predicate")
        _merge_named(consts, t.signature.constants, "constant")
        _merge_named(axioms, t.axioms, "axiom")
        self.predicates, self.constants, self.axioms = preds, consts, axioms
        for s in t.signature.sorts:
            self.sorts.setdefault(s)

    def theory(self, name: str) -> Theory:
        sig = Signature(tuple(self.sorts) or Signature().sorts, tuple(self.predicates.values()),
                        tuple(self.constants.values()))
        return Theory(name, sig, tuple(self.axioms.values()))


def _load(paths: Sequence[str]) -> list[Entry]:
    entries: list[Entry] = []
    for p in paths:
        try:
            theory, conjs = tptp.load(p)
        except (OSError, tptp.TPTPError, ValueError) as e:
            entries.append(Entry(os.path.basename(p), p, message=str(e)))
            continue
        if not conjs:
            entries.append(Entry(os.path.basename(p), p, message="no conjecture"))
        for c in conjs:
            entries.append(Entry(c.name, p, conjecture=c, theory=theory))
    return entries


def _resolve(entries: list[Entry]) -> None:
    """Attach dependencies on earlier items and drop citations of later ones."""
    seen: set[str] = set()
    all_names = {e.name for e in entries if e.conjecture is not None}
    for e in entries:
        if e.conjecture is None:
            continue
        if e.name in seen:
            e.conjecture, e.message = None, f"duplicate item name {e.name!r}"
            continue
        cited = [a.name for a in e.theory.axioms if a.name in all_names]
        e.deps = tuple(n for n in cited if n in seen)
        later = set(cited) - seen
        if later:
            e.theory = replace(e.theory, axioms=tuple(
                a for a in e.theory.axioms if a.name not in later))
        seen.add(e.name)


def _item_theory(e: Entry, proved: dict[str, NamedFormula]) -> Theory:
    """Keep citations of proved items (as proved), drop the others."""
    axioms = []
    for a in e.theory.axioms:
        if a.name in e.deps:
            if a.name in proved:
                axioms.append(proved[a.name])
            continue
        axioms.append(a)
    return replace(e.theory, axioms=tuple(axioms))


def _prove(theory: Theory, conjecture: NamedFormula, limits, hints):
    try:
        r = engine.prove(theory, conjecture, limits, hints)
    except ValueError as e:
        return ERROR, 0.0, None, str(e)
    return r.status, r.elapsed, getattr(r, "proof", None), ""


def run(paths: Sequence[str], cfg: Optional[BatchConfig] = None) -> BatchResult:
    cfg = cfg or BatchConfig()
    entries = _load(paths)
    _resolve(entries)
    shared = _SharedTheory()
    by_name = {e.name: e for e in entries if e.conjecture is not None}
    proved: dict[str, NamedFormula] = {}
    done: set[str] = set()
    todo = [e for e in entries if e.conjecture is not None]

    def finish(e: Entry, outcome):
        e.status, e.time, e.proof, e.message = outcome
        if e.proof is not None:
            e.size = e.proof.size()
            proved[e.name] = NamedFormula(e.name, "theorem", e.conjecture.formula)
        done.add(e.name)

    def ready(e: Entry) -> bool:
        return all(d in done for d in e.deps)

    def start(e: Entry):
        """Merge the item theory; returns prove() arguments or None on conflict."""
        t = _item_theory(e, proved)
        try:
            shared.add(replace(t, axioms=tuple(a for a in t.axioms if a.name not in by_name)))
        except MergeConflict as err:
            finish(e, (ERROR, 0.0, None, str(err)))
            return None
        return t, e.conjecture, cfg.limits, cfg.hints

    if cfg.jobs <= 1:
        for e in todo:
            args = start(e)
            if args is not None:
                finish(e, _prove(*args))
    else:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            running: dict[Future, Entry] = {}
            pending = list(todo)
            while pending or running:
                # merge in manifest order so the shared theory is deterministic
                while pending and ready(pending[0]):
                    e = pending.pop(0)
                    args = start(e)
                    if args is not None:
                        running[pool.submit(_prove, *args)] = e
                if not running:
                    continue
                finished, _ = wait(running, return_when=FIRST_COMPLETED)
                for f in finished:
                    finish(running.pop(f), f.result())

    items = tuple(Item(proved.get(e.name) or NamedFormula(e.name, "conjecture",
                                                          e.conjecture.formula),
                       (e.proof,) if e.proof is not None else ())
                  for e in entries if e.conjecture is not None and e.status != ERROR)
    doc = VernacularDocument(cfg.frontpage, shared.theory(cfg.theory_name),
                             (Chapter(cfg.chapter, items),))
    return BatchResult(doc, entries)
