"""Regenerate src/dhatu/data/gold.tsv.

Chalit and sadhu lines come from the hand-written paradigms in
gold_paradigms.tsv (one line per distinct surface form per register, first
cell wins); dialect lines are copied from gold_dialect.tsv. A surface form
that the paradigms assign to two different roots in one register (খেলি is
both খেল 0000 and খা 0011) is left out: its root depends on context.

    python3 tools/make_gold.py          # rewrite gold.tsv
    python3 tools/make_gold.py --check  # exit 1 if gold.tsv is stale
"""

import argparse
import sys
import unicodedata
from pathlib import Path

DATA = Path(__file__).resolve().parent.parent / "src" / "dhatu" / "data"
CELL_CODES = ("01", "10", "10", "10", "11", "11")
HEADER = "# surface\troot\ttense_code\tperson_code\tregister\n"


def rows(path):
    for line in path.read_text("utf-8").splitlines():
        if line.strip() and not line.startswith("#"):
            yield unicodedata.normalize("NFC", line).split("\t")


def build() -> str:
    out = [HEADER]
    paradigms = list(rows(DATA / "gold_paradigms.tsv"))
    roots: dict = {}
    for root, register, _, forms in paradigms:
        for form in forms.split():
            roots.setdefault((form, register), set()).add(root)
    seen = set()
    for root, register, tense, forms in paradigms:
        for form, pcode in zip(forms.split(), CELL_CODES):
            key = (form, register)
            if key in seen or len(roots[key]) > 1:
                continue
            seen.add(key)
            out.append("\t".join((form, root, tense, pcode, register)) + "\n")
    for fields in rows(DATA / "gold_dialect.tsv"):
        out.append("\t".join(fields) + "\n")
    return "".join(out)


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--check", action="store_true")
    args = ap.parse_args()
    text = build()
    target = DATA / "gold.tsv"
    if args.check:
        if target.read_text("utf-8") != text:
            print("gold.tsv is stale; rerun tools/make_gold.py", file=sys.stderr)
            return 1
        return 0
    target.write_text(text, "utf-8")
    return 0


if __name__ == "__main__":
    sys.exit(main())
