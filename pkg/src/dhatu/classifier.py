"""Suffix inventory, longest-match suffix identification, tense/person codes."""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from typing import Iterable, Sequence

from .script import GraphemeCluster, VOWEL_SIGNS, join, segment


class TenseClass(Enum):
    SIMPLE_PRESENT = ("0000", "simple present")
    PRESENT_CONTINUOUS = ("0001", "present continuous")
    PRESENT_PERFECT = ("0010", "present perfect")
    SIMPLE_PAST = ("0011", "simple past")
    PAST_CONTINUOUS = ("0100", "past continuous")
    PAST_PERFECT = ("0101", "past perfect")
    PAST_HABITUAL = ("0110", "past habitual")
    SIMPLE_FUTURE = ("0111", "simple future")
    FUTURE_CONTINUOUS = ("1000", "future continuous")
    FUTURE_PERFECT = ("1001", "future perfect")

    @property
    def code(self) -> str:
        return self.value[0]

    @property
    def label(self) -> str:
        return self.value[1]

    @classmethod
    def from_code(cls, code: str) -> "TenseClass":
        for t in cls:
            if t.code == code:
                return t
        raise ValueError(f"bad tense code {code!r}: expected 4 binary digits 0000-1001")


PERSON_NAMES = {"01": "first", "10": "second", "11": "third"}
FORMALITIES = ("intimate", "ordinary", "honorific")


@dataclass(frozen=True, order=True)
class Person:
    code: str
    formality: str = "ordinary"

    def __post_init__(self):
        if self.code not in PERSON_NAMES:
            raise ValueError(f"bad person code {self.code!r}")
        if self.formality not in FORMALITIES:
            raise ValueError(f"bad formality {self.formality!r}")

    @property
    def name(self) -> str:
        return PERSON_NAMES[self.code]

    def __str__(self) -> str:
        return f"{self.code}:{self.formality}"

    @classmethod
    def parse(cls, text: str) -> "Person":
        code, _, formality = text.partition(":")
        return cls(code, formality or "ordinary")


# Every (person, formality) cell the paradigm distinguishes, in canonical order.
CELLS = (
    Person("01", "ordinary"),
    Person("10", "intimate"),
    Person("10", "ordinary"),
    Person("10", "honorific"),
    Person("11", "ordinary"),
    Person("11", "honorific"),
)


@dataclass(frozen=True)
class SuffixEntry:
    suffix: str
    tense: TenseClass
    readings: frozenset
    register: str
    comment: str = ""

    @property
    def units(self) -> int:
        """Length in matching units: a leading dependent sign counts as one."""
        if self.suffix[0] in VOWEL_SIGNS:
            i = 1
            while i < len(self.suffix) and not _starts_cluster(self.suffix[i]):
                i += 1
            return 1 + len(segment(self.suffix[i:]))
        return len(segment(self.suffix))


def _starts_cluster(ch: str) -> bool:
    from .script import CONSONANTS, INDEPENDENT_VOWELS
    return ch in CONSONANTS or ch in INDEPENDENT_VOWELS


@dataclass(frozen=True)
class SuffixMatch:
    entry: SuffixEntry
    stem: tuple
    match_len: int

    @property
    def stem_text(self) -> str:
        return "".join(self.stem)


class SuffixTableError(ValueError):
    pass


class _Node:
    __slots__ = ("children", "entries")

    def __init__(self):
        self.children: dict[str, _Node] = {}
        self.entries: list[SuffixEntry] = []


class SuffixTable:
    """Immutable suffix inventory stored in a reversed-character trie."""

    def __init__(self, entries: Iterable[SuffixEntry], registers: Sequence[str] = ()):
        self._entries = tuple(entries)
        order = list(registers)
        for e in self._entries:
            if e.register not in order:
                order.append(e.register)
        self.registers = tuple(order)
        self._root = _Node()
        for e in self._entries:
            node = self._root
            for ch in reversed(e.suffix):
                node = node.children.setdefault(ch, _Node())
            node.entries.append(e)

    def __iter__(self):
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)

    def register_rank(self, register: str) -> int:
        return self.registers.index(register)

    def lookup(self, suffix: str) -> list[SuffixEntry]:
        return [e for e in self._entries if e.suffix == suffix]

    def cell_suffixes(self, tense: TenseClass, person: Person, register: str) -> list[str]:
        return [e.suffix for e in self._entries
                if e.tense is tense and person in e.readings and e.register == register]

    def match(self, word: str | Sequence[GraphemeCluster]) -> list[SuffixMatch]:
        clusters = segment(word) if isinstance(word, str) else list(word)
        texts = [c.text for c in clusters]
        text = "".join(texts)
        # cut position -> (stem clusters, units); cluster boundaries and
        # base/sign split points inside a cluster
        cuts: dict[int, tuple[tuple, int, bool]] = {}
        pos = 0
        n = len(texts)
        for i, t in enumerate(texts):
            if i > 0:
                cuts[pos] = (tuple(texts[:i]), n - i, False)
            base = clusters[i].base
            if base != t and base:
                cuts[pos + len(base)] = (tuple(texts[:i]) + (base,), n - i, True)
            pos += len(t)

        found = []
        node = self._root
        for depth in range(1, len(text) + 1):
            node = node.children.get(text[-depth])
            if node is None:
                break
            cut = cuts.get(len(text) - depth)
            if cut is None or not node.entries:
                continue
            stem, units, split = cut
            for e in node.entries:
                if split != (e.suffix[0] in VOWEL_SIGNS):
                    continue
                found.append(SuffixMatch(e, stem, units))
        found.sort(key=lambda m: (-m.match_len, self.register_rank(m.entry.register), m.entry.suffix))
        return found


_LINE_FIELDS = re.compile(r"^[01]{4}$")


def load_suffix_table(*sources: Iterable[str]) -> SuffixTable:
    """Load one or more suffix data streams; register priority follows load order."""
    entries: dict[tuple[str, str], SuffixEntry] = {}
    first_line: dict[tuple[str, str], int] = {}
    registers: list[str] = []
    for source in sources:
        name = getattr(source, "name", "<stream>")
        for lineno, raw in enumerate(source, 1):
            line = raw.rstrip("\r\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) < 4:
                raise SuffixTableError(f"{name}:{lineno}: expected 4 tab-separated fields")
            suffix, code, persons, register = (p.strip() for p in parts[:4])
            suffix = unicodedata.normalize("NFC", suffix)
            comment = parts[4].lstrip("# ").strip() if len(parts) > 4 else ""
            if not suffix:
                raise SuffixTableError(f"{name}:{lineno}: empty suffix")
            if not _LINE_FIELDS.match(code) or int(code, 2) > 9:
                raise SuffixTableError(f"{name}:{lineno}: malformed tense code {code!r}")
            try:
                readings = frozenset(Person.parse(p.strip()) for p in persons.split(",") if p.strip())
            except ValueError as exc:
                raise SuffixTableError(f"{name}:{lineno}: {exc}") from None
            if not readings:
                raise SuffixTableError(f"{name}:{lineno}: no person readings")
            tense = TenseClass.from_code(code)
            key = (suffix, register)
            old = entries.get(key)
            if old is not None:
                if old.tense is not tense:
                    raise SuffixTableError(
                        f"{name}:{lineno}: {suffix!r} ({register}) conflicts with line "
                        f"{first_line[key]}: tense {old.tense.code} vs {code}")
                entries[key] = SuffixEntry(suffix, tense, old.readings | readings, register,
                                           old.comment or comment)
            else:
                entries[key] = SuffixEntry(suffix, tense, readings, register, comment)
                first_line[key] = lineno
            if register not in registers:
                registers.append(register)
    return SuffixTable(entries.values(), registers)


SHIPPED_SUFFIX_FILES = ("chalit.tsv", "sadhu.tsv", "bangal.tsv", "radh.tsv")


def shipped_suffix_table(names: Sequence[str] = SHIPPED_SUFFIX_FILES) -> SuffixTable:
    data = resources.files("dhatu.data")
    streams = []
    for n in names:
        streams.append(data.joinpath(n).read_text("utf-8").splitlines())
    return load_suffix_table(*streams)


def match_suffix(word: str | Sequence[GraphemeCluster], table: SuffixTable) -> list[SuffixMatch]:
    return table.match(word)


def classify(match: SuffixMatch) -> tuple[TenseClass, frozenset]:
    return match.entry.tense, match.entry.readings


def person_codes(readings: Iterable[Person]) -> str:
    return ",".join(sorted({p.code for p in readings}))


__all__ = [
    "CELLS", "Person", "SuffixEntry", "SuffixMatch", "SuffixTable", "SuffixTableError",
    "TenseClass", "classify", "load_suffix_table", "match_suffix", "person_codes",
    "shipped_suffix_table", "join",
]
