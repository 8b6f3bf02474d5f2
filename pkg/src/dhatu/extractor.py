"""Root extraction: suffix stripping followed by rule-driven stem repair."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable, Iterable, Sequence

from .classifier import Person, SuffixEntry, SuffixMatch, SuffixTable, TenseClass
from .patterns import PatternError, TailRewrite, compile_tail
from .script import FEATURE_NAMES, FeatureVector, features, segment

MAX_RULE_DEPTH = 3


class RuleError(ValueError):
    pass


class EmptyStemError(ValueError):
    pass


class RepairCycleError(RuntimeError):
    def __init__(self, stem: str, rule_ids: Sequence[str]):
        super().__init__(f"repair cycle on {stem!r} via rules {' → '.join(rule_ids)}")
        self.rule_ids = tuple(rule_ids)


# ---------------------------------------------------------------------------
# conditions

Context = tuple  # (FeatureVector, TenseClass | None, frozenset[Person], str | None)
Predicate = Callable[[FeatureVector, "TenseClass | None", frozenset, "str | None"], bool]

_OPS = {
    "≥": lambda a, b: a >= b, ">=": lambda a, b: a >= b,
    "≤": lambda a, b: a <= b, "<=": lambda a, b: a <= b,
    "≠": lambda a, b: a != b, "!=": lambda a, b: a != b,
    "=": lambda a, b: a == b, "==": lambda a, b: a == b,
    ">": lambda a, b: a > b, "<": lambda a, b: a < b,
}
_CMP = re.compile(r"^(\S+?)\s*(≥|≤|≠|>=|<=|!=|==|=|>|<)\s*(-?\d+)$")
_SET = re.compile(r"^(tense|person)\s*(∈|∉)\s*\{([^}]*)\}$")
_REG = re.compile(r"^register\s*(=|≠|!=)\s*(\S+)$")


def _atom(text: str) -> Predicate:
    text = text.strip()
    if text == "true":
        return lambda fv, t, p, r: True
    m = _SET.match(text)
    if m:
        kind, op, body = m.groups()
        codes = frozenset(c.strip() for c in body.split(",") if c.strip())
        if kind == "tense":
            for c in codes:
                TenseClass.from_code(c)
            if op == "∈":
                return lambda fv, t, p, r: t is not None and t.code in codes
            return lambda fv, t, p, r: t is None or t.code not in codes
        bad = codes - {"01", "10", "11"}
        if bad:
            raise ValueError(f"bad person codes {sorted(bad)}")
        if op == "∈":
            return lambda fv, t, p, r: any(x.code in codes for x in p)
        return lambda fv, t, p, r: not any(x.code in codes for x in p)
    m = _REG.match(text)
    if m:
        op, name = m.groups()
        if op == "=":
            return lambda fv, t, p, r: r == name
        return lambda fv, t, p, r: r != name
    m = _CMP.match(text)
    if m:
        name, op, value = m.groups()
        if name not in FEATURE_NAMES:
            raise ValueError(f"unknown feature {name!r}")
        fn, v = _OPS[op], int(value)
        return lambda fv, t, p, r: fn(fv.get(name), v)
    raise ValueError(f"cannot parse condition atom {text!r}")


def parse_condition(text: str) -> Predicate:
    atoms = [_atom(a) for a in re.split(r"∧|&&", text) if a.strip()]
    if not atoms:
        raise ValueError("empty condition")
    return lambda fv, t, p, r: all(a(fv, t, p, r) for a in atoms)


# ---------------------------------------------------------------------------
# rules


@dataclass(frozen=True)
class RepairRule:
    id: str
    rewrite: TailRewrite
    condition: Predicate = field(compare=False)
    condition_text: str
    priority: int
    line: int = 0

    @property
    def tail_pattern(self) -> str:
        return self.rewrite.pattern

    def fires(self, stem: str, fv: FeatureVector, tense, persons, register) -> str | None:
        new = self.rewrite.apply(stem)
        if new is None or not new or new == stem:
            return None
        if not self.condition(fv, tense, persons, register):
            return None
        return new


class RuleSet:
    """Rules in firing order: ascending priority, ties by file order."""

    def __init__(self, rules: Iterable[RepairRule] = ()):
        self.rules = tuple(sorted(rules, key=lambda r: (r.priority, r.line)))
        self._by_id = {r.id: r for r in self.rules}

    def __iter__(self):
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)

    def __getitem__(self, rule_id: str) -> RepairRule:
        return self._by_id[rule_id]

    def replay(self, stem: str, trace: Sequence[str]) -> str:
        for rule_id in trace:
            new = self[rule_id].rewrite.apply(stem)
            if new is None:
                raise RuleError(f"rule {rule_id} does not apply to {stem!r} during replay")
            stem = new
        return stem


def load_rules(source: Iterable[str]) -> RuleSet:
    rules = []
    seen = set()
    name = getattr(source, "name", "<stream>")
    for lineno, raw in enumerate(source, 1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = [p.strip() for p in line.split("\t")]
        if len(parts) != 6 or parts[2] not in ("→", "->"):
            raise RuleError(f"{name}:{lineno}: expected id, pattern, →, rewrite, condition, priority")
        rid, pattern, _, rewrite, cond, prio = parts
        if rid in seen:
            raise RuleError(f"{name}:{lineno}: duplicate rule id {rid!r}")
        seen.add(rid)
        try:
            tail = compile_tail(pattern, rewrite)
            predicate = parse_condition(cond)
            priority = int(prio)
        except (PatternError, ValueError) as exc:
            raise RuleError(f"{name}:{lineno}: {exc}") from None
        rules.append(RepairRule(rid, tail, predicate, cond, priority, lineno))
    return RuleSet(rules)


def shipped_rules() -> RuleSet:
    text = resources.files("dhatu.data").joinpath("core.rules").read_text("utf-8")
    return load_rules(text.splitlines())


def _data_lines(name: str) -> list[str]:
    text = resources.files("dhatu.data").joinpath(name).read_text("utf-8")
    return [l.strip() for l in text.splitlines() if l.strip() and not l.startswith("#")]


def shipped_light_verbs() -> frozenset:
    return frozenset(_data_lines("light_verbs.txt"))


def shipped_nonverbs() -> frozenset:
    return frozenset(_data_lines("nonverbs.txt"))


# ---------------------------------------------------------------------------
# strip / repair


@dataclass(frozen=True)
class Candidate:
    root: str
    trace: tuple
    cost: int


def strip(word, match: SuffixMatch) -> tuple:
    text = word if isinstance(word, str) else "".join(str(c) for c in word)
    suffix = match.entry.suffix
    if not text.endswith(suffix):
        raise ValueError(f"{suffix!r} is not a suffix of {text!r}")
    stem = text[: len(text) - len(suffix)]
    if not stem:
        raise EmptyStemError(f"suffix {suffix!r} consumes whole word {text!r}")
    return tuple(c.text for c in segment(stem))


def repair(stem, tense: TenseClass | None, persons: Iterable[Person], register: str | None,
           rules: RuleSet, max_depth: int = MAX_RULE_DEPTH) -> list[Candidate]:
    """Return root candidates for ``stem``, cheapest derivation first.

    Every rule whose tail pattern and condition hold may fire; derivations
    stop after ``max_depth`` rewrites. The unrepaired stem is always last.
    """
    start = stem if isinstance(stem, str) else "".join(str(c) for c in stem)
    if not start:
        raise EmptyStemError("empty stem")
    persons = frozenset(persons)
    found: list[tuple[int, int, int, Candidate]] = []
    order = 0
    frontier = [(start, (), 0, (start,))]
    for depth in range(1, max_depth + 1):
        nxt = []
        for s, trace, cost, path in frontier:
            fv = features(s)
            for rule in rules:
                new = rule.fires(s, fv, tense, persons, register)
                if new is None:
                    continue
                if new in path:
                    raise RepairCycleError(new, trace + (rule.id,))
                cand = Candidate(new, trace + (rule.id,), cost + rule.priority)
                found.append((cand.cost, depth, order, cand))
                order += 1
                nxt.append((new, cand.trace, cand.cost, path + (new,)))
        frontier = nxt
        if not frontier:
            break
    found.sort(key=lambda x: x[:3])
    out, seen = [], {start}
    for *_, cand in found:
        if cand.root not in seen:
            seen.add(cand.root)
            out.append(cand)
    out.append(Candidate(start, (), 0))
    return out


# ---------------------------------------------------------------------------
# analyses


@dataclass(frozen=True)
class Analysis:
    surface: str
    root: str
    suffix: SuffixEntry | None = None
    tense: TenseClass | None = None
    persons: frozenset = frozenset()
    register: str | None = None
    rank: int = 0
    rule_trace: tuple = ()
    form: str = "finite"
    prefix: str = ""
    stem: str = ""

    @property
    def analyzed(self) -> bool:
        return self.form != "unanalyzed"


def unanalyzed(surface: str) -> Analysis:
    return Analysis(surface=surface, root=surface, form="unanalyzed", stem=surface)


def extract_root(word: str, table: SuffixTable, rules: RuleSet,
                 prefixes: Sequence[str] = ()) -> list[Analysis]:
    prefix = ""
    body = word
    for p in sorted(prefixes, key=len, reverse=True):
        if p and word.startswith(p) and len(word) > len(p):
            prefix, body = p, word[len(p):]
            break
    clusters = segment(body)
    if not clusters:
        return [unanalyzed(word)]
    out = []
    for m in table.match(clusters):
        try:
            stem = "".join(strip(body, m))
        except EmptyStemError:
            continue
        e = m.entry
        for cand in repair(stem, e.tense, e.readings, e.register, rules):
            out.append(Analysis(
                surface=word, root=cand.root, suffix=e, tense=e.tense, persons=e.readings,
                register=e.register, rank=len(out), rule_trace=cand.trace, prefix=prefix,
                stem=stem,
            ))
    return out or [unanalyzed(word)]


# non-finite endings, longest first: (ending, register, tense whose stem it takes).
# Conjunctive participles share the perfect stem (খেয়ে, রেখে); infinitives
# share the continuous stem (লিখতে, খাইতে).
NONFINITE_ENDINGS = (
    ("ইয়া", "sadhu", TenseClass.PRESENT_PERFECT),
    ("িয়া", "sadhu", TenseClass.PRESENT_PERFECT),
    ("ইতে", "sadhu", TenseClass.PRESENT_CONTINUOUS),
    ("িতে", "sadhu", TenseClass.PRESENT_CONTINUOUS),
    ("য়ে", "chalit", TenseClass.PRESENT_PERFECT),
    ("তে", "chalit", TenseClass.PRESENT_CONTINUOUS),
    ("ে", "chalit", TenseClass.PRESENT_PERFECT),
)


def nonfinite_analyses(word: str, rules: RuleSet) -> list[Analysis]:
    out = []
    for ending, register, tense in NONFINITE_ENDINGS:
        if not word.endswith(ending) or len(word) == len(ending):
            continue
        stem = word[: -len(ending)]
        try:
            segment(stem)
        except ValueError:
            continue
        for cand in repair(stem, tense, frozenset(), register, rules):
            out.append(Analysis(surface=word, root=cand.root, register=register, rank=len(out),
                                rule_trace=cand.trace, form="nonfinite", stem=stem))
    return out


def analyze_compound(first: str, second: str, table: SuffixTable, rules: RuleSet,
                     light_verbs: Iterable[str] | None = None) -> tuple[list[Analysis], list[Analysis]]:
    """Analyze a two-token verb group such as ``খেয়ে নিবি``.

    When the second token's best root is a light verb, the first token's
    non-finite readings move to the front of its ranking.
    """
    light = shipped_light_verbs() if light_verbs is None else frozenset(light_verbs)
    a1 = extract_root(first, table, rules)
    a2 = extract_root(second, table, rules)
    if a2[0].analyzed and a2[0].root in light:
        nf = nonfinite_analyses(first, rules)
        if nf:
            merged = nf + [a for a in a1 if a.analyzed]
            a1 = [_rerank(a, i) for i, a in enumerate(merged)]
    return a1, a2


def _rerank(a: Analysis, rank: int) -> Analysis:
    from dataclasses import replace
    return replace(a, rank=rank)
