"""A small DTD validator for element trees.

Supports ELEMENT declarations (EMPTY, ANY, #PCDATA, mixed content and
element content models) and ATTLIST declarations with #REQUIRED,
#IMPLIED, #FIXED and defaulted attributes.  Entities and notations are
not supported.
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

_COMMENT = re.compile(r"<!--.*?-->", re.S)
_ELEMENT = re.compile(r"<!ELEMENT\s+([\w.:-]+)\s+(.*?)\s*>", re.S)
_ATTLIST = re.compile(r"<!ATTLIST\s+([\w.:-]+)\s+(.*?)\s*>", re.S)
_ATTDEF = re.compile(
    r"([\w.:-]+)\s+(CDATA|ID|IDREFS?|NMTOKENS?|ENTITY|ENTITIES|\([^)]*\))\s+"
    r"(#REQUIRED|#IMPLIED|(?:#FIXED\s+)?(?:\"[^\"]*\"|'[^']*'))")
_NAME = re.compile(r"[A-Za-z_][\w.:-]*")


@dataclass(frozen=True)
class Violation:
    path: str
    message: str

    def __str__(self):
        return f"{self.path}: {self.message}"


@dataclass
class ElementDecl:
    name: str
    model: str
    kind: str  # empty | any | text | mixed | children
    pattern: Optional[re.Pattern] = None
    allowed: frozenset = frozenset()


@dataclass
class Attribute:
    name: str
    required: bool
    choices: Optional[tuple[str, ...]] = None
    fixed: Optional[str] = None


@dataclass
class Dtd:
    elements: dict[str, ElementDecl] = field(default_factory=dict)
    attributes: dict[str, dict[str, Attribute]] = field(default_factory=dict)

    @classmethod
    def parse(cls, text: str) -> "Dtd":
        text = _COMMENT.sub("", text)
        d = cls()
        for name, model in _ELEMENT.findall(text):
            d.elements[name] = _element(name, " ".join(model.split()))
        for name, body in _ATTLIST.findall(text):
            atts = d.attributes.setdefault(name, {})
            for aname, atype, default in _ATTDEF.findall(body):
                choices = None
                if atype.startswith("("):
                    choices = tuple(c.strip() for c in atype[1:-1].split("|"))
                fixed = None
                if default.startswith("#FIXED"):
                    fixed = default.split(None, 1)[1][1:-1]
                atts.setdefault(aname, Attribute(aname, default == "#REQUIRED", choices, fixed))
        return d

    def validate(self, root: ET.Element, root_name: Optional[str] = None) -> list[Violation]:
        out: list[Violation] = []
        if root_name is not None and root.tag != root_name:
            out.append(Violation("/" + root.tag, f"root element must be <{root_name}>"))
        self._check(root, "/" + root.tag, out)
        return out

    def _check(self, el: ET.Element, path: str, out: list[Violation]):
        decl = self.elements.get(el.tag)
        if decl is None:
            out.append(Violation(path, f"undeclared element <{el.tag}>"))
            return
        atts = self.attributes.get(el.tag, {})
        for a in atts.values():
            v = el.get(a.name)
            if v is None:
                if a.required:
                    out.append(Violation(path, f"missing required attribute {a.name!r}"))
            elif a.choices is not None and v not in a.choices:
                out.append(Violation(path, f"attribute {a.name!r} has value {v!r}"))
            elif a.fixed is not None and v != a.fixed:
                out.append(Violation(path, f"attribute {a.name!r} must be {a.fixed!r}"))
        for k in el.attrib:
            if k not in atts and not k.startswith("{"):
                out.append(Violation(path, f"undeclared attribute {k!r}"))
        children = list(el)
        has_text = bool((el.text or "").strip()) or any((c.tail or "").strip() for c in children)
        if decl.kind == "empty":
            if children or has_text:
                out.append(Violation(path, "element must be empty"))
        elif decl.kind == "text":
            if children:
                out.append(Violation(path, f"unexpected child <{children[0].tag}>"))
        elif decl.kind == "mixed":
            for c in children:
                if c.tag not in decl.allowed:
                    out.append(Violation(path, f"unexpected child <{c.tag}>"))
        elif decl.kind == "children":
            if has_text:
                out.append(Violation(path, "character data not allowed here"))
            seq = "".join(f"<{c.tag}>" for c in children)
            if not decl.pattern.fullmatch(seq):
                got = ", ".join(c.tag for c in children) or "nothing"
                out.append(Violation(path, f"content ({got}) does not match {decl.model}"))
        counts: dict[str, int] = {}
        for c in children:
            counts[c.tag] = counts.get(c.tag, 0) + 1
            self._check(c, f"{path}/{c.tag}[{counts[c.tag]}]", out)


def _element(name: str, model: str) -> ElementDecl:
    if model == "EMPTY":
        return ElementDecl(name, model, "empty")
    if model == "ANY":
        return ElementDecl(name, model, "any")
    if "#PCDATA" in model:
        names = frozenset(n for n in _NAME.findall(model.replace("#PCDATA", "")))
        return ElementDecl(name, model, "mixed" if names else "text", allowed=names)
    body = _NAME.sub(lambda m: f"(?:<{re.escape(m.group(0))}>)", model)
    body = body.replace(",", "").replace(" ", "")
    return ElementDecl(name, model, "children", pattern=re.compile(body))


def vernacular_dtd() -> Dtd:
    text = resources.files("clvernacular").joinpath("data/Vernacular.dtd").read_text("utf-8")
    return Dtd.parse(text)
