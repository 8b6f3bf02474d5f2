"""Command-line entry point: ``dhatu <command> ...``."""

from __future__ import annotations

import argparse
import sys
from contextlib import ExitStack

from .classifier import Person, SuffixTableError, TenseClass, load_suffix_table, shipped_suffix_table
from .conjugator import (REGISTERS, CellNotDefined, ParadigmError, conjugate, load_lexicon,
                         paradigm, shipped_lexicon, shipped_paradigm)
from .extractor import RuleError, load_rules, shipped_rules
from .pipeline import (EvaluationError, FormatError, Record, Summary, analyze_stream, evaluate,
                       format_record, predict_gold, read_gold)
from .script import ScriptError, normalize_text

EXIT_OK, EXIT_DATA, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _open_in(stack: ExitStack, path: str, binary: bool = False):
    if path == "-":
        return sys.stdin.buffer if binary else sys.stdin
    if binary:
        return stack.enter_context(open(path, "rb"))
    return stack.enter_context(open(path, encoding="utf-8"))


def _read_lines(path: str) -> list[str]:
    with ExitStack() as stack:
        return list(_open_in(stack, path))


def _table(args):
    if not args.suffixes:
        return shipped_suffix_table()
    streams = []
    for path in args.suffixes:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
        streams.append(_Named(lines, path))
    return load_suffix_table(*streams)


class _Named(list):
    def __init__(self, lines, name):
        super().__init__(lines)
        self.name = name


def _rules(args):
    if args.rules is None:
        return shipped_rules()
    with open(args.rules, encoding="utf-8") as fh:
        return load_rules(_Named(fh.read().splitlines(), args.rules))


def _lexicon(args):
    if args.lexicon is None:
        return shipped_lexicon()
    with open(args.lexicon, encoding="utf-8") as fh:
        return load_lexicon(fh.read().splitlines(), shipped_paradigm())


def _tense(code: str) -> TenseClass:
    try:
        return TenseClass.from_code(code)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _person(text: str, formality: str | None) -> Person:
    try:
        p = Person.parse(text)
        if formality and ":" not in text:
            p = Person(p.code, formality)
        return p
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _entry(args):
    lexicon = _lexicon(args)
    root = normalize_text(args.root)
    if root not in lexicon:
        raise LookupError(f"root {root!r} is not in the lexicon")
    return lexicon[root]


def _emit(out, text: str) -> None:
    out.write(text + "\n")


def cmd_analyze(args, out) -> int:
    table, rules = _table(args), _rules(args)
    summary = Summary()
    with ExitStack() as stack:
        sources = [_open_in(stack, p, binary=True) for p in args.inputs]
        lines = (line for src in sources for line in src)
        for a in analyze_stream(lines, table, rules, tokenize=args.tokenize,
                                all_readings=args.all_readings, workers=args.workers,
                                summary=summary):
            _emit(out, format_record(Record.of(a), args.format))
    for lineno, msg in summary.errors:
        print(f"line {lineno}: {msg}", file=sys.stderr)
    if args.summary:
        print(summary, file=sys.stderr)
    return EXIT_OK


def cmd_conjugate(args, out) -> int:
    entry = _entry(args)
    form = conjugate(entry, _tense(args.tense), _person(args.person, args.formality), args.register)
    _emit(out, form)
    return EXIT_OK


def cmd_paradigm(args, out) -> int:
    entry = _entry(args)
    for (tense, person), form in paradigm(entry, args.register).items():
        _emit(out, f"{tense.code}\t{person}\t{form}")
    return EXIT_OK


def cmd_classify(args, out) -> int:
    table = _table(args)
    seen = set()
    for word in args.words:
        matches = table.match(normalize_text(word))
        if not args.all_readings and matches:
            best = matches[0].match_len
            matches = [m for m in matches if m.match_len == best]
        for m in matches:
            e = m.entry
            codes = ",".join(sorted({p.code for p in e.readings}))
            line = f"{e.tense.code}\t{codes}\t{e.suffix}"
            if args.all_readings:
                line += f"\t{e.register}\t{m.stem_text}"
            if (word, line) not in seen:
                seen.add((word, line))
                _emit(out, line)
    return EXIT_OK


def cmd_normalize(args, out) -> int:
    with ExitStack() as stack:
        for path in args.inputs:
            data = _open_in(stack, path, binary=True).read()
            text = normalize_text(data)
            if text:
                _emit(out, text)
    return EXIT_OK


def cmd_evaluate(args, out) -> int:
    gold = read_gold(_read_lines(args.gold))
    if args.predictions:
        preds = [Record.from_tsv(line) for line in _read_lines(args.predictions)
                 if line.strip() and not line.startswith("#")]
    else:
        preds = predict_gold(gold, _table(args), _rules(args), workers=args.workers)
    report = evaluate(preds, gold)
    _emit(out, report.to_tsv() if args.report == "tsv" else report.to_table())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    data = argparse.ArgumentParser(add_help=False)
    data.add_argument("--suffixes", action="append", metavar="FILE",
                      help="suffix table; repeat for more registers (earlier wins ties)")
    data.add_argument("--rules", metavar="FILE", help="repair rule file")
    data.add_argument("--lexicon", metavar="FILE", help="conjugation lexicon")
    data.add_argument("--workers", type=int, default=1, help="analysis threads")

    ap = argparse.ArgumentParser(prog="dhatu", description="Bengali verb root extraction")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[data], help="analyze tokens, one per line")
    p.add_argument("inputs", nargs="*", default=["-"], metavar="FILE")
    p.add_argument("--all-readings", action="store_true")
    p.add_argument("--tokenize", action="store_true", help="split raw sentences into tokens")
    p.add_argument("--format", choices=("tsv", "jsonl"), default="tsv")
    p.add_argument("--summary", action="store_true", help="print counts to stderr")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("conjugate", parents=[data], help="generate one form")
    p.add_argument("root")
    p.add_argument("tense", help="tense code, e.g. 0111")
    p.add_argument("person", help="person code, optionally with formality: 10:intimate")
    p.add_argument("--formality", choices=("intimate", "ordinary", "honorific"))
    p.add_argument("--register", choices=REGISTERS, default="chalit")
    p.set_defaults(func=cmd_conjugate)

    p = sub.add_parser("paradigm", parents=[data], help="print every cell of a root")
    p.add_argument("root")
    p.add_argument("--register", choices=REGISTERS, default="chalit")
    p.set_defaults(func=cmd_paradigm)

    p = sub.add_parser("classify", parents=[data], help="show suffix classifications")
    p.add_argument("words", nargs="+")
    p.add_argument("--all-readings", action="store_true", help="every match, not only the longest")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("normalize", help="canonicalize raw text")
    p.add_argument("inputs", nargs="*", default=["-"], metavar="FILE")
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("evaluate", parents=[data], help="score against a gold file")
    p.add_argument("gold")
    p.add_argument("--predictions", metavar="TSV", help="analyze output to score instead of re-running")
    p.add_argument("--report", choices=("table", "tsv"), default="table")
    p.set_defaults(func=cmd_evaluate)
    return ap


def main(argv: list[str] | None = None) -> int:
    for stream in (sys.stdout, sys.stderr):
        if hasattr(stream, "reconfigure"):
            stream.reconfigure(encoding="utf-8")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, sys.stdout)
    except UsageError as exc:
        print(f"dhatu: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SuffixTableError, RuleError, ParadigmError, FormatError, EvaluationError,
            ScriptError, CellNotDefined, LookupError, OSError) as exc:
        print(f"dhatu: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
