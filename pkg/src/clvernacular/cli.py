"""Command-line entry point: prove, check, export, validate, batch."""

from __future__ import annotations

import argparse
import datetime
import os
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import batch as batch_mod
from . import document as D
from . import engine, tptp
from .export import EXTENSIONS, TARGETS, UnsupportedDocument, export
from .layout import LayoutConfig, LayoutError
from .logic import NamedFormula

OK, NOT_PROVED, USAGE = 0, 1, 2


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    output: Optional[str] = None
    timeout: float = 60.0
    max_steps: int = engine.SearchLimits.max_steps
    max_splits: int = engine.SearchLimits.max_splits
    hints: Optional[str] = None
    layout: Optional[str] = None
    targets: tuple[str, ...] = TARGETS
    jobs: int = 1
    author: str = ""
    prover: str = "clvernacular"
    date: Optional[str] = None

    def __post_init__(self):
        if self.timeout <= 0:
            raise InputError("--timeout must be positive")
        if self.max_steps < 1 or self.max_splits < 0:
            raise InputError("--max-steps must be >= 1 and --max-splits >= 0")
        if self.jobs < 1:
            raise InputError("--jobs must be >= 1")
        bad = [t for t in self.targets if t not in TARGETS]
        if bad:
            raise InputError(f"unknown target(s) {', '.join(bad)}; choose from {', '.join(TARGETS)}")
        if self.date is not None:
            try:
                datetime.date.fromisoformat(self.date[:10])
            except ValueError:
                raise InputError(f"--date {self.date!r} is not ISO 8601") from None

    @property
    def limits(self) -> engine.SearchLimits:
        return engine.SearchLimits(self.max_steps, self.max_splits, self.timeout)

    @property
    def frontpage(self) -> D.Frontpage:
        return D.Frontpage(self.author, self.prover,
                           self.date or datetime.date.today().isoformat())

    def hint_list(self) -> Optional[list[str]]:
        if self.hints is None:
            return None
        try:
            return engine.read_hints(self.hints)
        except OSError as e:
            raise InputError(f"cannot read hints: {e}") from None

    def layout_config(self) -> Optional[LayoutConfig]:
        if self.layout is None:
            return None
        try:
            return LayoutConfig.load(self.layout)
        except (OSError, LayoutError) as e:
            raise InputError(f"bad layout file: {e}") from None


def _stem(path: str) -> str:
    return os.path.splitext(os.path.basename(path))[0]


def _err(msg: str):
    print(f"error: {msg}", file=sys.stderr)


def _one_input(cfg: RunConfig) -> str:
    if len(cfg.inputs) != 1:
        raise InputError(f"{cfg.command} takes exactly one input file")
    return cfg.inputs[0]


# -- commands ------------------------------------------------------------------

def cmd_prove(cfg: RunConfig) -> int:
    path = _one_input(cfg)
    try:
        theory, conjs = tptp.load(path)
    except OSError as e:
        raise InputError(str(e)) from None
    except (tptp.TPTPError, ValueError) as e:
        raise InputError(f"{path}: {type(e).__name__}: {e}") from None
    if not conjs:
        raise InputError(f"{path}: no conjecture")
    hints = cfg.hint_list()
    items, status = [], OK
    for c in conjs:
        try:
            r = engine.prove(theory, c, cfg.limits, hints)
        except ValueError as e:
            raise InputError(str(e)) from None
        if isinstance(r, engine.Proved):
            print(f"PROVED {c.name} {r.elapsed:.3f} {r.proof.size()}")
            items.append(D.Item(NamedFormula(c.name, "theorem", c.formula), (r.proof,)))
        else:
            print(f"{r.status} {c.name} {r.elapsed:.3f}")
            items.append(D.Item(NamedFormula(c.name, "conjecture", c.formula)))
            status = NOT_PROVED
    stem = _stem(path)
    doc = D.VernacularDocument(cfg.frontpage, theory, (D.Chapter(stem, tuple(items)),))
    out = cfg.output or stem + ".xml"
    D.write(doc, out)
    return status


def _read_document(path: str, check_references: bool = True) -> D.VernacularDocument:
    try:
        return D.parse_file(path, check_references=check_references)
    except OSError as e:
        raise InputError(str(e)) from None
    except D.SchemaViolation as e:
        for v in e.violations:
            print(f"{v.path}: {v.message}", file=sys.stderr)
        raise InputError(f"{path}: {len(e.violations)} schema violation(s)") from None
    except D.DocumentError as e:
        raise InputError(f"{path}: {e}") from None


def cmd_check(cfg: RunConfig) -> int:
    status = OK
    for path in cfg.inputs:
        doc = _read_document(path)
        for name, res in D.check_document(doc):
            if res:
                print(f"OK {name}")
            else:
                print(f"FAIL {name}: {res}")
                status = NOT_PROVED
    return status


def cmd_validate(cfg: RunConfig) -> int:
    status = OK
    for path in cfg.inputs:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
            vs = D.validate(text, D.file_resolver(os.path.dirname(os.path.abspath(path))), path)
        except OSError as e:
            raise InputError(str(e)) from None
        except D.DocumentError as e:
            raise InputError(f"{path}: {e}") from None
        for v in vs:
            print(f"{path}{v.path}: {v.message}")
        if vs:
            status = USAGE
        else:
            print(f"valid {path}")
    return status


def cmd_export(cfg: RunConfig) -> int:
    layout = cfg.layout_config()
    outdir = cfg.output or "."
    os.makedirs(outdir, exist_ok=True)
    for path in cfg.inputs:
        doc = _read_document(path)
        stem = _stem(path)
        for t in cfg.targets:
            try:
                art = export(doc, t, layout, stem)
            except (UnsupportedDocument, LayoutError) as e:
                raise InputError(f"{path}: cannot export to {t}: {e}") from None
            files = [(stem + EXTENSIONS[t], art.main)] + list(art.auxiliary)
            for name, text in files:
                with open(os.path.join(outdir, name), "w", encoding="utf-8") as fh:
                    fh.write(text)
            print(os.path.join(outdir, stem + EXTENSIONS[t]))
    return OK


def cmd_batch(cfg: RunConfig) -> int:
    manifest = _one_input(cfg)
    try:
        paths = batch_mod.read_manifest(manifest)
    except OSError as e:
        raise InputError(str(e)) from None
    stem = _stem(manifest)
    bc = batch_mod.BatchConfig(cfg.limits, cfg.hint_list(), cfg.jobs, cfg.frontpage,
                               chapter=stem, theory_name=stem)
    res = batch_mod.run(paths, bc)
    out = cfg.output or stem + ".xml"
    if os.path.dirname(out):
        os.makedirs(os.path.dirname(out), exist_ok=True)
    D.write(res.document, out, split=True)
    summary = os.path.splitext(out)[0] + "_summary.tsv"
    with open(summary, "w", encoding="utf-8") as fh:
        fh.write(res.summary())
    sys.stdout.write(res.summary())
    for e in res.entries:
        if e.message:
            print(f"{e.name}: {e.message}", file=sys.stderr)
    return OK


COMMANDS = {"prove": cmd_prove, "check": cmd_check, "export": cmd_export,
            "validate": cmd_validate, "batch": cmd_batch}


# -- argument parsing -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="clvernacular",
                                description="Coherent-logic prover with proof export.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--output", "-o", metavar="PATH")

    def search(sp):
        sp.add_argument("--timeout", type=float, default=60.0, help="seconds per problem")
        sp.add_argument("--max-steps", type=int, default=engine.SearchLimits.max_steps)
        sp.add_argument("--max-splits", type=int, default=engine.SearchLimits.max_splits)
        sp.add_argument("--hints", metavar="FILE", help="axiom names to use, one per line")
        sp.add_argument("--date", metavar="ISO8601", help="frontpage date (default: today)")
        sp.add_argument("--author", default="")
        sp.add_argument("--prover", default="clvernacular", help="prover name on the frontpage")

    sp = sub.add_parser("prove", help="prove a TPTP problem and write an XML proof")
    sp.add_argument("inputs", nargs=1, metavar="PROBLEM")
    common(sp)
    search(sp)

    sp = sub.add_parser("check", help="check every proof in XML documents")
    sp.add_argument("inputs", nargs="+", metavar="XML")

    sp = sub.add_parser("validate", help="validate XML documents against the DTD")
    sp.add_argument("inputs", nargs="+", metavar="XML")

    sp = sub.add_parser("export", help="render XML documents")
    sp.add_argument("inputs", nargs="+", metavar="XML")
    sp.add_argument("--to", default=",".join(TARGETS), metavar="LIST",
                    help=f"comma-separated subset of {','.join(TARGETS)}")
    sp.add_argument("--layout", metavar="FILE")
    sp.add_argument("--output", "-o", metavar="DIR", help="output directory (default: .)")

    sp = sub.add_parser("batch", help="prove a manifest into one combined document")
    sp.add_argument("inputs", nargs=1, metavar="MANIFEST")
    sp.add_argument("--jobs", "-j", type=int, default=1)
    common(sp)
    search(sp)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    kw = {k: v for k, v in vars(ns).items() if v is not None}
    to = kw.pop("to", None)
    if to is not None:
        kw["targets"] = tuple(t.strip() for t in to.split(",") if t.strip())
    return RunConfig(**kw)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code else OK
    try:
        cfg = config_from_args(ns)
        return COMMANDS[cfg.command](cfg)
    except InputError as e:
        _err(str(e))
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
