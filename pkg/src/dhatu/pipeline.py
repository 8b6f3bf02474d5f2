"""Batch analysis over token streams, record serialization, and evaluation."""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .classifier import SuffixTable, person_codes
from .extractor import (Analysis, RuleSet, analyze_compound, extract_root, shipped_light_verbs,
                        shipped_nonverbs, unanalyzed)
from .script import DecodeError, ScriptError, _is_bengali, decode, normalize_text, tokens

NONE = "-"
COLUMNS = ("surface", "root", "tense_code", "person_code", "register", "rank")
REGISTER_ORDER = ("chalit", "sadhu", "dialect:bangal", "dialect:radh")


class FormatError(ValueError):
    pass


class EvaluationError(ValueError):
    pass


@dataclass(frozen=True)
class Record:
    """One output row; every field is already a string."""
    surface: str
    root: str
    tense_code: str = NONE
    person_code: str = NONE
    register: str = NONE
    rank: str = "0"

    @classmethod
    def of(cls, a: Analysis) -> "Record":
        return cls(
            a.surface,
            a.root,
            a.tense.code if a.tense else NONE,
            person_codes(a.persons) or NONE,
            a.register or NONE,
            str(a.rank),
        )

    def to_tsv(self) -> str:
        return "\t".join(getattr(self, c) for c in COLUMNS)

    def to_json(self) -> str:
        return json.dumps({c: getattr(self, c) for c in COLUMNS}, ensure_ascii=False)

    @classmethod
    def from_tsv(cls, line: str) -> "Record":
        parts = line.rstrip("\r\n").split("\t")
        if len(parts) != len(COLUMNS):
            raise FormatError(f"expected {len(COLUMNS)} columns, got {len(parts)}: {line!r}")
        return cls(*parts)


def format_record(record: Record, fmt: str = "tsv") -> str:
    if fmt == "tsv":
        return record.to_tsv()
    if fmt == "jsonl":
        return record.to_json()
    raise ValueError(f"unknown format {fmt!r}")


@dataclass
class Summary:
    lines: int = 0
    tokens: int = 0
    analyzed: int = 0
    errors: list = field(default_factory=list)  # (line number, message)

    def __str__(self) -> str:
        return (f"lines={self.lines} tokens={self.tokens} analyzed={self.analyzed} "
                f"errors={len(self.errors)}")


def _analyze_token(word: str, table: SuffixTable, rules: RuleSet,
                   nonverbs: frozenset) -> list[Analysis]:
    if word in nonverbs or not any(_is_bengali(ch) for ch in word):
        return [unanalyzed(word)]
    try:
        return extract_root(word, table, rules)
    except ScriptError:
        return [unanalyzed(word)]


def _line_tokens(raw, lineno: int, tokenize: bool, summary: Summary) -> list[str]:
    try:
        text = decode(raw) if isinstance(raw, bytes) else raw
        if tokenize:
            return tokens(normalize_text(text))
        text = normalize_text(text) if text.strip() else ""
        return tokens(text)[:1] if text else []
    except DecodeError as exc:
        summary.errors.append((lineno, str(exc)))
        return []


def analyze_stream(lines: Iterable[bytes | str], table: SuffixTable, rules: RuleSet, *,
                   tokenize: bool = False, all_readings: bool = False,
                   nonverbs: Iterable[str] | None = None, light_verbs: Iterable[str] | None = None,
                   workers: int = 1, summary: Summary | None = None) -> Iterator[Analysis]:
    """Analyze one token per line, or whitespace tokens of each line with ``tokenize``.

    Undecodable lines are recorded in ``summary.errors`` and skipped. Output
    follows input order regardless of ``workers``.
    """
    summary = summary if summary is not None else Summary()
    stop = frozenset(nonverbs) if nonverbs is not None else (
        shipped_nonverbs() if tokenize else frozenset())
    light = shipped_light_verbs() if light_verbs is None else frozenset(light_verbs)

    def per_line():
        for lineno, raw in enumerate(lines, 1):
            summary.lines += 1
            yield _line_tokens(raw, lineno, tokenize, summary)

    def run(words: list[str]) -> list[list[Analysis]]:
        results = [_analyze_token(w, table, rules, stop) for w in words]
        if tokenize:
            for i in range(len(words) - 1):
                second = results[i + 1][0]
                if second.analyzed and second.root in light and words[i] not in stop:
                    results[i], _ = analyze_compound(words[i], words[i + 1], table, rules, light)
        return results

    pool = ThreadPoolExecutor(workers) if workers > 1 else None
    try:
        batches = pool.map(run, per_line()) if pool else map(run, per_line())
        for batch in batches:
            for analyses in batch:
                summary.tokens += 1
                if analyses[0].analyzed:
                    summary.analyzed += 1
                yield from (analyses if all_readings else analyses[:1])
    finally:
        if pool:
            pool.shutdown()


# ---------------------------------------------------------------------------
# gold data and evaluation


@dataclass(frozen=True)
class GoldEntry:
    surface: str
    root: str
    tense_code: str
    person_code: str
    register: str


def read_gold(lines: Iterable[str]) -> list[GoldEntry]:
    out = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 5:
            raise FormatError(f"gold line {lineno}: expected 5 tab-separated fields")
        out.append(GoldEntry(*(normalize_text(p) if i < 2 else p for i, p in enumerate(parts))))
    return out


@dataclass
class RegisterScore:
    total: int = 0
    correct_root: int = 0
    correct_tense: int = 0
    correct_person: int = 0

    @property
    def accuracy_root(self) -> float:
        return self.correct_root / self.total if self.total else 0.0

    def add(self, other: "RegisterScore") -> "RegisterScore":
        return RegisterScore(self.total + other.total, self.correct_root + other.correct_root,
                             self.correct_tense + other.correct_tense,
                             self.correct_person + other.correct_person)


@dataclass
class EvalReport:
    per_register: dict = field(default_factory=dict)
    confusion: dict = field(default_factory=dict)  # (gold tense, predicted tense) -> count
    type_total: int = 0
    type_correct: int = 0

    def registers(self) -> list[str]:
        known = [r for r in REGISTER_ORDER if r in self.per_register]
        return known + sorted(r for r in self.per_register if r not in REGISTER_ORDER)

    def aggregate(self, prefix: str = "") -> RegisterScore:
        out = RegisterScore()
        for name, score in self.per_register.items():
            if name.startswith(prefix):
                out = out.add(score)
        return out

    @property
    def token_accuracy(self) -> float:
        return self.aggregate().accuracy_root

    @property
    def type_accuracy(self) -> float:
        return self.type_correct / self.type_total if self.type_total else 0.0

    def to_table(self) -> str:
        header = ("register", "total", "root", "tense", "person", "accuracy")
        rows = [header]
        named = [(r, self.per_register[r]) for r in self.registers()]
        if sum(r.startswith("dialect:") for r in self.per_register) > 1:
            named.append(("dialect (all)", self.aggregate("dialect:")))
        named.append(("all", self.aggregate()))
        for name, s in named:
            rows.append((name, str(s.total), str(s.correct_root), str(s.correct_tense),
                         str(s.correct_person), f"{s.accuracy_root:.2%}"))
        widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
        lines = ["  ".join(c.ljust(w) if i == 0 else c.rjust(w)
                           for i, (c, w) in enumerate(zip(r, widths))).rstrip() for r in rows]
        lines.insert(1, "-" * len(lines[0]))
        lines.append("")
        lines.append(f"token accuracy {self.token_accuracy:.2%}  type accuracy {self.type_accuracy:.2%}")
        return "\n".join(lines)

    def to_tsv(self) -> str:
        out = ["#register\ttotal\tcorrect_root\tcorrect_tense\tcorrect_person\taccuracy_root"]
        for r in self.registers():
            s = self.per_register[r]
            out.append(f"{r}\t{s.total}\t{s.correct_root}\t{s.correct_tense}\t"
                       f"{s.correct_person}\t{s.accuracy_root!r}")
        out.append(f"#token_accuracy\t{self.token_accuracy!r}")
        out.append(f"#type_accuracy\t{self.type_accuracy!r}")
        out.append("#confusion\tgold_tense\tpredicted_tense\tcount")
        for (g, p), n in sorted(self.confusion.items()):
            out.append(f"confusion\t{g}\t{p}\t{n}")
        return "\n".join(out)


def _as_record(p) -> Record:
    return p if isinstance(p, Record) else Record.of(p)


def evaluate(predictions: Iterable[Analysis | Record], gold: Iterable[GoldEntry]) -> EvalReport:
    preds = [_as_record(p) for p in predictions]
    gold = list(gold)
    if len(preds) != len(gold):
        raise EvaluationError(f"length mismatch: {len(preds)} predictions vs {len(gold)} gold entries")
    report = EvalReport()
    types: dict = {}
    for p, g in zip(preds, gold):
        if p.surface != g.surface:
            raise EvaluationError(f"misaligned token: predicted {p.surface!r}, gold {g.surface!r}")
        s = report.per_register.setdefault(g.register, RegisterScore())
        s.total += 1
        root_ok = p.root == g.root
        s.correct_root += root_ok
        s.correct_tense += p.tense_code == g.tense_code
        s.correct_person += g.person_code in p.person_code.split(",")
        key = (g.tense_code, p.tense_code)
        report.confusion[key] = report.confusion.get(key, 0) + 1
        types.setdefault((g.surface, g.register), root_ok)
    report.type_total = len(types)
    report.type_correct = sum(types.values())
    return report


def predict_gold(gold: Sequence[GoldEntry], table: SuffixTable, rules: RuleSet,
                 workers: int = 1) -> list[Analysis]:
    return list(analyze_stream((g.surface for g in gold), table, rules, workers=workers))
