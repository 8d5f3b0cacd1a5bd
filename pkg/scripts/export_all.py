"""Export an XML document to every target and report the time taken.

    python3 scripts/export_all.py DOC.xml [--out DIR] [--layout tarski]
"""

import argparse
import os
import sys
import time

from clvernacular import document, layout
from clvernacular.export import EXTENSIONS, export


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("doc")
    ap.add_argument("--out", default="export_out")
    ap.add_argument("--layout", default="tarski", help="bundled layout name, or 'none'")
    ap.add_argument("--targets", default="isar,coq,tex,html,txt")
    args = ap.parse_args(argv)

    cfg = None if args.layout == "none" else layout.bundled(args.layout)
    doc = document.parse_file(args.doc)
    stem = os.path.splitext(os.path.basename(args.doc))[0]
    os.makedirs(args.out, exist_ok=True)
    t = time.monotonic()
    for target in args.targets.split(","):
        art = export(doc, target, cfg, stem)
        for name, text in [(stem + EXTENSIONS[target], art.main), *art.auxiliary]:
            with open(os.path.join(args.out, name), "w", encoding="utf-8") as fh:
                fh.write(text)
    print(f"exported {args.targets} in {time.monotonic() - t:.3f}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
