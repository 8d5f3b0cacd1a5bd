"""Reader for the FOF subset of TPTP restricted to coherent formulas.

Accepted input::

    % comment
    include('relative/file.ax').
    fof(name, role, formula).

with ``!``/``?`` quantifiers, ``~ & | => <=`` connectives, ``=``/``!=``,
``$true``/``$false``, variables (upper case) and constants (lower case or
quoted).  Function terms with arguments are rejected.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Union

from . import logic
from .logic import (Atom, CoherentFormula, Const, Disjunct, NamedFormula,
                    PredicateSymbol, Signature, Theory, Var)


class TPTPError(Exception):
    pass


class TPTPSyntaxError(TPTPError):
    def __init__(self, line: int, column: int, expected: str, source: str = ""):
        self.line, self.column, self.expected, self.source = line, column, expected, source
        where = f"{source}:" if source else ""
        super().__init__(f"{where}{line}:{column}: expected {expected}")


class UnsupportedTerm(TPTPSyntaxError):
    def __init__(self, line, column, functor, source=""):
        super().__init__(line, column, "constant or variable", source)
        self.functor = functor
        self.args = (f"{source + ':' if source else ''}{line}:{column}: unsupported term: "
                     f"function symbol '{functor}' with arguments",)

    def __str__(self):
        return self.args[0]


class IncludeCycle(TPTPError):
    pass


class DuplicateName(TPTPError):
    pass


class NotCoherent(TPTPError):
    def __init__(self, reason: str, where: str = ""):
        self.reason, self.where = reason, where
        super().__init__(f"{where}: {reason}" if where else reason)


class ArityConflict(TPTPError):
    pass


# -- raw first-order syntax --------------------------------------------------

@dataclass(frozen=True)
class FAtom:
    pred: str
    args: tuple[str, ...] = ()


@dataclass(frozen=True)
class FConst:
    value: bool


@dataclass(frozen=True)
class FNot:
    arg: "Formula"


@dataclass(frozen=True)
class FBin:
    op: str  # '&', '|', '=>'
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class FQuant:
    q: str  # '!' or '?'
    vars: tuple[str, ...]
    body: "Formula"


Formula = Union[FAtom, FConst, FNot, FBin, FQuant]


def is_var(name: str) -> bool:
    return name[:1].isupper() or name[:1] == "_"


@dataclass
class Annotated:
    name: str
    role: str
    formula: Formula
    source: str = ""


@dataclass
class SourceProblem:
    formulas: list[Annotated] = field(default_factory=list)
    includes: list[str] = field(default_factory=list)


# -- lexer -------------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<comment>%[^\n]*|/\*.*?\*/)
  | (?P<op><=>|<~>|=>|<=|!=|~\||~&|[!?~&|=(),.:\[\]])
  | (?P<dollar>\$[a-z_]+)
  | (?P<quoted>'(?:[^'\\]|\\.)*')
  | (?P<word>[A-Za-z0-9_]+)
""", re.VERBOSE | re.DOTALL)


@dataclass
class Tok:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str, source: str = "") -> list[Tok]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise TPTPSyntaxError(line, pos - line_start + 1, "a token", source)
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            val = m.group()
            if kind == "quoted":
                val = val[1:-1].replace("\\'", "'").replace("\\\\", "\\")
            toks.append(Tok(kind, val, line, pos - line_start + 1))
        chunk = m.group()
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rfind("\n") + 1
        pos = m.end()
    toks.append(Tok("eof", "", line, pos - line_start + 1))
    return toks


# -- parser ------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str, source: str = ""):
        self.toks = tokenize(text, source)
        self.i = 0
        self.source = source

    @property
    def tok(self) -> Tok:
        return self.toks[self.i]

    def fail(self, expected: str):
        raise TPTPSyntaxError(self.tok.line, self.tok.col, expected, self.source)

    def accept(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str):
        if not self.accept(text):
            self.fail(f"'{text}'")

    def name(self) -> str:
        if self.tok.kind in ("word", "quoted"):
            t = self.tok.text
            self.i += 1
            return t
        self.fail("a name")

    def statements(self):
        while self.tok.kind != "eof":
            if self.tok.kind != "word":
                self.fail("fof(...) or include(...)")
            kw = self.tok.text
            start = self.tok
            self.i += 1
            if kw == "include":
                self.expect("(")
                if self.tok.kind != "quoted":
                    self.fail("a quoted file name")
                path = self.name()
                self.expect(")")
                self.expect(".")
                yield ("include", path, start)
            elif kw == "fof":
                self.expect("(")
                name = self.name()
                self.expect(",")
                role_tok = self.tok
                role = self.name()
                if role not in logic.ROLES:
                    raise TPTPSyntaxError(role_tok.line, role_tok.col,
                                          "role axiom, definition, theorem or conjecture",
                                          self.source)
                self.expect(",")
                f = self.formula()
                self.expect(")")
                self.expect(".")
                yield ("fof", Annotated(name, role, f, self.source), start)
            elif kw in ("cnf", "tff", "thf", "tcf"):
                raise TPTPSyntaxError(start.line, start.col,
                                      f"fof (the {kw} language is not supported)", self.source)
            else:
                raise TPTPSyntaxError(start.line, start.col, "fof(...) or include(...)",
                                      self.source)

    # formula ::= unitary ( binop unitary )*   with  & > | > => (right assoc)
    def formula(self) -> Formula:
        left = self.disjunction()
        if self.accept("=>"):
            return FBin("=>", left, self.formula())
        if self.accept("<="):
            return FBin("=>", self.formula(), left)
        if self.tok.kind == "op" and self.tok.text in ("<=>", "<~>", "~|", "~&"):
            self.fail("a connective of the coherent fragment (not " + self.tok.text + ")")
        return left

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.accept("|"):
            f = FBin("|", f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.unitary()
        while self.accept("&"):
            f = FBin("&", f, self.unitary())
        return f

    def unitary(self) -> Formula:
        t = self.tok
        if self.accept("("):
            f = self.formula()
            self.expect(")")
            return f
        if self.accept("~"):
            return FNot(self.unitary())
        if t.kind == "op" and t.text in ("!", "?"):
            self.i += 1
            self.expect("[")
            vs = [self.variable()]
            while self.accept(","):
                vs.append(self.variable())
            self.expect("]")
            self.expect(":")
            return FQuant(t.text, tuple(vs), self.unitary())
        if t.kind == "dollar":
            self.i += 1
            if t.text == "$true":
                return FConst(True)
            if t.text == "$false":
                return FConst(False)
            self.fail("$true or $false")
        return self.atom()

    def variable(self) -> str:
        t = self.tok
        if t.kind == "word" and is_var(t.text):
            self.i += 1
            return t.text
        self.fail("a variable")

    def term(self) -> str:
        t = self.tok
        if t.kind not in ("word", "quoted"):
            self.fail("a term")
        self.i += 1
        if self.tok.kind == "op" and self.tok.text == "(":
            raise UnsupportedTerm(t.line, t.col, t.text, self.source)
        return t.text

    def atom(self) -> Formula:
        t = self.tok
        if t.kind not in ("word", "quoted"):
            self.fail("an atom")
        if t.kind == "word" and is_var(t.text):
            lhs = self.term()
            return self.equation(lhs)
        self.i += 1
        args: list[str] = []
        if self.accept("("):
            args.append(self.term())
            while self.accept(","):
                args.append(self.term())
            self.expect(")")
        if self.tok.kind == "op" and self.tok.text in ("=", "!="):
            if args:
                raise UnsupportedTerm(t.line, t.col, t.text, self.source)
            return self.equation(t.text)
        return FAtom(t.text, tuple(args))

    def equation(self, lhs: str) -> Formula:
        if self.accept("="):
            return FAtom("=", (lhs, self.term()))
        if self.accept("!="):
            return FNot(FAtom("=", (lhs, self.term())))
        self.fail("'=' or '!='")


FileResolver = Callable[[str, str], tuple[str, str]]


def file_resolver(base_dir: str = ".") -> FileResolver:
    """Resolver reading include files relative to the including file's directory."""

    def resolve(ref: str, including: str) -> tuple[str, str]:
        here = os.path.dirname(including) if including else base_dir
        path = os.path.normpath(os.path.join(here, ref))
        with open(path, encoding="utf-8") as fh:
            return path, fh.read()

    return resolve


def parse_problem(text: str, resolver: Optional[FileResolver] = None,
                  source: str = "") -> SourceProblem:
    """Parse ``text`` and, transitively, its includes.

    ``resolver(ref, including_source)`` returns ``(resolved_source, text)``.
    """
    problem = SourceProblem()
    seen: dict[str, Annotated] = {}
    _parse_into(problem, text, source, resolver, (source,) if source else (), seen)
    return problem


def _parse_into(problem, text, source, resolver, stack, seen):
    for kind, item, tok in _Parser(text, source).statements():
        if kind == "include":
            if resolver is None:
                raise TPTPError(f"{source}:{tok.line}: include('{item}') with no resolver")
            path, sub = resolver(item, source)
            if path in stack:
                raise IncludeCycle(" -> ".join(stack + (path,)))
            problem.includes.append(path)
            _parse_into(problem, sub, path, resolver, stack + (path,), seen)
        else:
            if item.name in seen:
                raise DuplicateName(f"{source}:{tok.line}: duplicate formula name {item.name}")
            seen[item.name] = item
            problem.formulas.append(item)


def parse_file(path: str) -> SourceProblem:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_problem(text, file_resolver(), source=path)


# -- printing ----------------------------------------------------------------

_PREC = {"=>": 1, "|": 2, "&": 3}


def _term_str(t: str) -> str:
    if re.fullmatch(r"[A-Za-z0-9_]+", t):
        return t
    return "'" + t.replace("\\", "\\\\").replace("'", "\\'") + "'"


def format_formula(f: Formula, prec: int = 0) -> str:
    if isinstance(f, FConst):
        return "$true" if f.value else "$false"
    if isinstance(f, FAtom):
        if f.pred == "=":
            return f"{_term_str(f.args[0])} = {_term_str(f.args[1])}"
        name = _term_str(f.pred)
        return f"{name}({','.join(map(_term_str, f.args))})" if f.args else name
    if isinstance(f, FNot):
        if isinstance(f.arg, FAtom) and f.arg.pred == "=":
            return f"{_term_str(f.arg.args[0])} != {_term_str(f.arg.args[1])}"
        return "~ " + format_formula(f.arg, 4)
    if isinstance(f, FQuant):
        return f"{f.q} [{','.join(f.vars)}] : " + format_formula(f.body, 4)
    # binary: parenthesize whenever nested inside another binary operator
    s = f"{format_formula(f.left, 4)} {f.op} {format_formula(f.right, 4)}"
    return f"({s})" if prec >= 1 else s


def format_problem(p: SourceProblem) -> str:
    return "".join(f"fof({_term_str(a.name)}, {a.role}, {format_formula(a.formula)}).\n"
                   for a in p.formulas)


# -- normalization to coherent form ------------------------------------------

def _fvars(f: Formula, bound=frozenset()) -> list[str]:
    out: dict[str, None] = {}

    def go(g, b):
        if isinstance(g, FAtom):
            for a in g.args:
                if is_var(a) and a not in b:
                    out.setdefault(a)
        elif isinstance(g, FNot):
            go(g.arg, b)
        elif isinstance(g, FBin):
            go(g.left, b)
            go(g.right, b)
        elif isinstance(g, FQuant):
            go(g.body, b | set(g.vars))

    go(f, set(bound))
    return list(out)


def _flatten(f: Formula, op: str) -> list[Formula]:
    if isinstance(f, FBin) and f.op == op:
        return _flatten(f.left, op) + _flatten(f.right, op)
    return [f]


def to_coherent(f: Formula, name: str = "", sort: str = logic.DEFAULT_SORT) -> CoherentFormula:
    """Normalize a closed (or implicitly universal) formula into coherent shape."""
    where = name
    universal: list[str] = list(_fvars(f))
    binders: set[str] = set(universal)

    def bind(vs):
        for v in vs:
            if v in binders:
                raise NotCoherent(f"variable {v} is bound twice", where)
            binders.add(v)
        return list(vs)

    premises: list[FAtom | FNot] = []
    body = f
    while True:
        if isinstance(body, FQuant) and body.q == "!":
            universal += bind(body.vars)
            body = body.body
        elif isinstance(body, FBin) and body.op == "=>":
            for p in _flatten(body.left, "&"):
                premises.extend(_premise_literals(p, where))
            body = body.right
        else:
            break

    univ_vars = {v: Var(v, sort) for v in universal}
    prem_atoms = tuple(_literal(p, univ_vars, where) for p in premises)
    disjuncts = _conclusion(body, univ_vars, bind, where, sort)
    out = CoherentFormula(tuple(univ_vars[v] for v in universal), prem_atoms, disjuncts)
    try:
        logic.check_formula(out)
    except logic.LogicError as e:
        raise NotCoherent(str(e), where) from e
    return out


def _premise_literals(p: Formula, where) -> list:
    if isinstance(p, FAtom) or (isinstance(p, FNot) and isinstance(p.arg, FAtom)):
        return [p]
    if isinstance(p, FConst):
        if not p.value:
            raise NotCoherent("$false in premises (formula is trivially true)", where)
        return []
    if isinstance(p, FNot):
        raise NotCoherent("negation of a non-atomic formula in premises", where)
    if isinstance(p, FBin) and p.op == "|":
        raise NotCoherent("disjunctive premise", where)
    if isinstance(p, FQuant):
        raise NotCoherent("quantifier in premises", where)
    raise NotCoherent(f"unsupported premise {format_formula(p)}", where)


def _literal(p, env: dict[str, Var], where) -> Atom:
    neg = False
    if isinstance(p, FNot):
        neg, p = True, p.arg
    args = []
    for a in p.args:
        if is_var(a):
            if a not in env:
                raise NotCoherent(f"variable {a} not bound here", where)
            args.append(env[a])
        else:
            args.append(Const(a))
    if p.pred == "=" and neg:
        return Atom(logic.NEQ, tuple(args))
    return Atom(p.pred, tuple(args), negated=neg)


def _conclusion(body: Formula, univ: dict[str, Var], bind, where, sort) -> tuple[Disjunct, ...]:
    evars: list[str] = []
    while isinstance(body, FQuant) and body.q == "?":
        evars += bind(body.vars)
        body = body.body
    out: list[Disjunct] = []
    for d in _flatten(body, "|"):
        local = list(evars)
        while isinstance(d, FQuant) and d.q == "?":
            # sibling disjuncts are separate scopes
            for v in d.vars:
                if v in univ or v in local:
                    raise NotCoherent(f"variable {v} is bound twice", where)
                local.append(v)
            d = d.body
        env = dict(univ)
        env.update({v: Var(v, sort) for v in local})
        conj: list[Atom] = []
        dead = False
        for c in _flatten(d, "&"):
            if isinstance(c, FConst):
                if c.value:
                    continue
                dead = True
                continue
            if isinstance(c, FAtom) or (isinstance(c, FNot) and isinstance(c.arg, FAtom)):
                conj.append(_literal(c, env, where))
            elif isinstance(c, FBin) and c.op == "=>":
                raise NotCoherent("implication nested in the conclusion", where)
            elif isinstance(c, FBin) and c.op == "|":
                raise NotCoherent("disjunction nested under a conjunction", where)
            elif isinstance(c, FQuant):
                raise NotCoherent("quantifier nested under a conjunction", where)
            else:
                raise NotCoherent("negation of a non-atomic formula", where)
        if dead:
            continue
        if not conj:
            raise NotCoherent("conclusion is trivially true", where)
        used = set()
        for a in conj:
            used |= {t.name for t in a.args if isinstance(t, Var)}
        dvars = tuple(Var(v, sort) for v in local if v in used)
        out.append(Disjunct(dvars, tuple(conj)))
    return tuple(out)


# -- theory assembly ---------------------------------------------------------

@dataclass
class Options:
    add_equality_decidability: bool = True
    theory_name: str = "theory"


def assemble_theory(p: SourceProblem, options: Optional[Options] = None
                    ) -> tuple[Theory, list[NamedFormula]]:
    """Build the theory (axioms, definitions, theorems) and the conjectures."""
    options = options or Options()
    axioms: list[NamedFormula] = []
    conjectures: list[NamedFormula] = []
    for a in p.formulas:
        cf = to_coherent(a.formula, a.name)
        nf = NamedFormula(a.name, a.role, cf)
        (conjectures if a.role == "conjecture" else axioms).append(nf)
    arities: dict[str, int] = {}
    consts: dict[str, Const] = {}
    uses_eq = False
    for nf in axioms + conjectures:
        for atom in nf.formula.atoms():
            if atom.pred in logic.BUILTIN:
                uses_eq = True
            elif arities.setdefault(atom.pred, len(atom.args)) != len(atom.args):
                raise ArityConflict(f"predicate {atom.pred} used with arities "
                                    f"{arities[atom.pred]} and {len(atom.args)}")
            for c in atom.constants():
                consts.setdefault(c.name, c)
    sort = logic.DEFAULT_SORT
    preds = tuple(PredicateSymbol(n, (sort,) * k) for n, k in arities.items())
    sig = Signature((sort,), preds, tuple(consts.values()))
    theory = Theory(options.theory_name, sig, tuple(axioms))
    theory = logic.encode_negation(theory, conjectures)
    conjectures = [logic.encode_formula(c) for c in conjectures]
    if options.add_equality_decidability and (uses_eq or any(
            a.pred in logic.BUILTIN for nf in theory.axioms for a in nf.formula.atoms())):
        extra = []
        for i, s in enumerate(theory.signature.sorts):
            nm = "ax_g1" if i == 0 else f"ax_g1_{s}"
            if theory.axiom(nm) is None:
                extra.append(logic.equality_decidability_axiom(s, nm))
        theory = theory.with_axioms(extra)
    return theory, conjectures


def load(path: str, options: Optional[Options] = None) -> tuple[Theory, list[NamedFormula]]:
    if options is None:
        stem = os.path.splitext(os.path.basename(path))[0]
        options = Options(theory_name=stem)
    return assemble_theory(parse_file(path), options)
