"""Predicate notation for the natural-language backends.

A layout file has one directive per line::

    cong/4 pair_infix(2,2) \\cong     # AB \\cong CD
    cong/4 tuple_infix(2,2) \\cong    # (A,B) \\cong (C,D)
    lt/2   infix <
    bet/3  functional

Symbols are written in LaTeX; the HTML and plain backends translate them
through a small symbol table.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from typing import Optional, Sequence

from .logic import EQ, NEQ, Atom, Signature

BACKENDS = ("latex", "html", "plain")

# latex -> (html, plain)
SYMBOLS = {
    "\\cong": ("&#8773;", "≅"),
    "\\neq": ("&ne;", "≠"),
    "\\neg": ("&not;", "¬"),
    "\\leq": ("&le;", "≤"),
    "\\geq": ("&ge;", "≥"),
    "\\equiv": ("&equiv;", "≡"),
    "\\parallel": ("&#8741;", "∥"),
    "\\perp": ("&perp;", "⊥"),
    "\\bot": ("&perp;", "⊥"),
    "\\in": ("&isin;", "∈"),
    "\\sim": ("&sim;", "∼"),
    "<": ("&lt;", "<"),
    ">": ("&gt;", ">"),
    "=": ("=", "="),
}

KINDS = ("functional", "infix", "pair_infix", "tuple_infix")
_LINE = re.compile(r"^(\S+)/(\d+)\s+(functional|infix|pair_infix|tuple_infix)"
                   r"(?:\(([\d,\s]*)\))?(?:\s+(\S+))?\s*$")


class LayoutError(ValueError):
    pass


@dataclass(frozen=True)
class Directive:
    pred: str
    arity: int
    kind: str = "functional"
    symbol: str = ""
    groups: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise LayoutError(f"{self.pred}/{self.arity}: unknown directive {self.kind!r}")
        if self.kind == "infix" and self.arity != 2:
            raise LayoutError(f"{self.pred}/{self.arity}: infix needs arity 2")
        if self.kind in ("pair_infix", "tuple_infix"):
            if len(self.groups) != 2 or sum(self.groups) != self.arity:
                raise LayoutError(f"{self.pred}/{self.arity}: groups {self.groups} "
                                  f"must be two sizes summing to the arity")
        if self.kind != "functional" and not self.symbol:
            raise LayoutError(f"{self.pred}/{self.arity}: {self.kind} needs a symbol")


NEG = "\\neg"
NEQ_SYMBOL = "\\neq"


def negation_base(pred: str, sig: Optional[Signature]) -> Optional[str]:
    """``r`` when ``pred`` is the encoded negation ``r_bar`` of ``r``."""
    if sig is None:
        return None
    partner = sig.partner(pred)
    if partner and partner not in (EQ, NEQ) and pred == partner + "_bar":
        return partner
    return None


def symbol(sym: str, backend: str) -> str:
    if backend == "latex":
        return sym
    html, plain = SYMBOLS.get(sym, (None, None))
    if html is None:
        html = plain = sym.lstrip("\\")
    return html if backend == "html" else plain


def latex_escape(s: str) -> str:
    return re.sub(r"([_&%#$])", r"\\\1", s)


def html_escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def escape_name(s: str, backend: str) -> str:
    if backend == "latex":
        return latex_escape(s)
    if backend == "html":
        return html_escape(s)
    return s


@dataclass(frozen=True)
class LayoutConfig:
    directives: tuple[Directive, ...] = ()

    def __post_init__(self):
        seen = set()
        for d in self.directives:
            if d.pred in seen:
                raise LayoutError(f"duplicate directive for {d.pred}")
            seen.add(d.pred)

    @classmethod
    def parse(cls, text: str) -> "LayoutConfig":
        out = []
        for n, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            m = _LINE.match(line)
            if m is None:
                raise LayoutError(f"line {n}: cannot parse {raw.strip()!r}")
            pred, arity, kind, groups, sym = m.groups()
            gs = tuple(int(g) for g in groups.split(",") if g.strip()) if groups else ()
            out.append(Directive(pred, int(arity), kind, sym or "", gs))
        return cls(tuple(out))

    @classmethod
    def load(cls, path: str) -> "LayoutConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.parse(fh.read())

    def directive(self, pred: str) -> Optional[Directive]:
        for d in self.directives:
            if d.pred == pred:
                return d
        return None

    def check(self, sig: Signature) -> None:
        """Directives must name declared predicates of the stated arity."""
        for d in self.directives:
            p = sig.predicate(d.pred)
            if p is None:
                raise LayoutError(f"{d.pred}/{d.arity}: no such predicate")
            if p.arity != d.arity:
                raise LayoutError(f"{d.pred}/{d.arity}: predicate has arity {p.arity}")

    def render(self, atom: Atom, backend: str, sig: Optional[Signature] = None) -> str:
        """Atom text in ``backend`` notation, without math delimiters.

        With a signature, atoms over an encoded negation ``r_bar`` are shown
        as the negation of ``r``.
        """
        base = negation_base(atom.pred, sig)
        if base is not None:
            inner = self.render(Atom(base, atom.args), backend)
            return f"{symbol(NEG, backend)} {inner}"
        args = [escape_name(str(a), backend) for a in atom.args]
        if atom.pred == EQ:
            return f"{args[0]} = {args[1]}"
        if atom.pred == NEQ:
            return f"{args[0]} {symbol(NEQ_SYMBOL, backend)} {args[1]}"
        d = self.directive(atom.pred)
        if d is None or d.kind == "functional":
            if d is not None and d.arity != len(args):
                raise LayoutError(f"{atom.pred}/{d.arity} applied to {len(args)} arguments")
            name = escape_name(atom.pred, backend)
            return f"{name}({', '.join(args)})" if args else name
        if d.arity != len(args):
            raise LayoutError(f"{atom.pred}/{d.arity} applied to {len(args)} arguments")
        sym = symbol(d.symbol, backend)
        if d.kind == "infix":
            return f"{args[0]} {sym} {args[1]}"
        k = d.groups[0]
        left, right = args[:k], args[k:]
        if d.kind == "pair_infix":
            return f"{''.join(left)} {sym} {''.join(right)}"
        return f"({','.join(left)}) {sym} ({','.join(right)})"


DEFAULT = LayoutConfig()


def bundled(name: str = "tarski") -> LayoutConfig:
    text = resources.files("clvernacular").joinpath(f"data/{name}.layout").read_text("utf-8")
    return LayoutConfig.parse(text)


def strip(cfg: LayoutConfig, preds: Sequence[str] = ()) -> LayoutConfig:
    """Configuration with the given predicates (all when empty) back to functional form."""
    keep = tuple(d for d in cfg.directives if preds and d.pred not in preds)
    return LayoutConfig(keep)
