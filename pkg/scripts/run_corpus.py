"""Run the bundled Tarski mini-corpus and compare statuses with the reference.

    python3 scripts/run_corpus.py [--out DIR] [--jobs N] [--write-reference]
"""

import argparse
import os
import sys
import time
from importlib import resources

from clvernacular import batch, document
from clvernacular.document import Frontpage

CORPUS = resources.files("clvernacular").joinpath("data/tarski")
REFERENCE = "reference_summary.tsv"


def statuses(summary: str) -> list[tuple[str, str]]:
    rows = [l.split("\t") for l in summary.splitlines()[1:] if l.strip()]
    return [(r[0], r[1]) for r in rows]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="corpus_out")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--timeout", type=float, default=20.0)
    ap.add_argument("--write-reference", action="store_true",
                    help="overwrite the checked-in reference with this run")
    args = ap.parse_args(argv)

    paths = batch.read_manifest(str(CORPUS.joinpath("manifest.txt")))
    cfg = batch.BatchConfig(batch.engine.SearchLimits(wall_clock=args.timeout), jobs=args.jobs,
                            frontpage=Frontpage("", "clvernacular", "2026-01-01"),
                            chapter="tarski", theory_name="tarski")
    t = time.monotonic()
    res = batch.run(paths, cfg)
    elapsed = time.monotonic() - t
    os.makedirs(args.out, exist_ok=True)
    document.write(res.document, os.path.join(args.out, "tarski.xml"), split=True)
    summary = res.summary()
    sys.stdout.write(summary)
    print(f"total {elapsed:.2f}s")

    ref_path = str(CORPUS.joinpath(REFERENCE))
    if args.write_reference:
        with open(ref_path, "w", encoding="utf-8") as fh:
            fh.write(summary)
        print(f"wrote {ref_path}")
        return 0
    with open(ref_path, encoding="utf-8") as fh:
        ref = statuses(fh.read())
    got = statuses(summary)
    if got != ref:
        print("status mismatch against reference:")
        for a, b in zip(ref, got):
            if a != b:
                print(f"  expected {a}, got {b}")
        return 1
    print("statuses match reference")
    return 0


if __name__ == "__main__":
    sys.exit(main())
