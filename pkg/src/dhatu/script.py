"""Bengali text model: normalization, grapheme clusters and letter features."""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable

HASANTA = "্"
NUKTA = "়"
ZWJ = "‍"
ZWNJ = "‌"
DANDA = "।"
DOUBLE_DANDA = "॥"

INDEPENDENT_VOWELS = frozenset(
    [chr(c) for c in range(0x0985, 0x098D)]
    + ["এ", "ঐ", "ও", "ঔ", "ৠ", "ৡ"]
)
CONSONANTS = frozenset(
    [chr(c) for c in range(0x0995, 0x09BA) if c not in (0x09A9, 0x09B1, 0x09B3, 0x09B4, 0x09B5)]
    + ["ৎ", "ড়", "ঢ়", "য়", "ৰ", "ৱ"]
)
KAR_NAMES = {
    "া": "আ-কার",
    "ি": "ই-কার",
    "ী": "ঈ-কার",
    "ু": "উ-কার",
    "ূ": "ঊ-কার",
    "ৃ": "ঋ-কার",
    "ৄ": "ৠ-কার",
    "ে": "এ-কার",
    "ৈ": "ঐ-কার",
    "ো": "ও-কার",
    "ৌ": "ঔ-কার",
    "ৢ": "ঌ-কার",
    "ৣ": "ৡ-কার",
}
VOWEL_SIGNS = frozenset(KAR_NAMES)
PHALA_NAMES = {"র": "র-ফলা", "ব": "ব-ফলা", "য": "য-ফলা"}
# candrabindu, anusvara, visarga, au length mark
OTHER_MARKS = frozenset(["ঁ", "ং", "ঃ", "ৗ"])
DIGITS = frozenset(chr(c) for c in range(0x09E6, 0x09F0))

TERMINATORS = frozenset([DANDA, "?", "!"])
DETACHED = frozenset("'\"‘’“”~()[]{},<>/") | TERMINATORS

CATEGORIES = ("independent-vowel", "consonant-base", "conjunct", "digit", "punctuation", "other")


class ScriptError(ValueError):
    pass


class DecodeError(ScriptError):
    def __init__(self, offset: int, reason: str = "malformed UTF-8"):
        super().__init__(f"{reason} at byte offset {offset}")
        self.offset = offset


class SegmentationError(ScriptError):
    def __init__(self, index: int, char: str):
        super().__init__(f"cluster {index}: dependent sign U+{ord(char):04X} has no base")
        self.index = index


@dataclass(frozen=True)
class GraphemeCluster:
    text: str
    category: str

    def __str__(self) -> str:
        return self.text

    @property
    def base(self) -> str:
        """The cluster up to (not including) its first dependent vowel sign."""
        for i, ch in enumerate(self.text):
            if ch in VOWEL_SIGNS:
                return self.text[:i]
        return self.text


@dataclass(frozen=True)
class FeatureVector:
    char_count: int = 0
    vowel_count: int = 0
    consonant_count: int = 0
    kar_counts: dict = field(default_factory=dict)
    phala_counts: dict = field(default_factory=dict)
    has_hasanta_final: bool = False
    final_kars: frozenset = frozenset()

    def get(self, name: str) -> int:
        if name in ("char_count", "vowel_count", "consonant_count"):
            return getattr(self, name)
        if name == "stem_vowels":
            return self.vowel_count
        if name == "has_hasanta_final":
            return int(self.has_hasanta_final)
        if name.startswith("final:"):
            return int(name[len("final:"):] in self.final_kars)
        if name in self.kar_counts or name in KAR_NAMES.values():
            return self.kar_counts.get(name, 0)
        if name in self.phala_counts or name in PHALA_NAMES.values():
            return self.phala_counts.get(name, 0)
        raise KeyError(name)


FEATURE_NAMES = frozenset(
    ["char_count", "vowel_count", "consonant_count", "stem_vowels", "has_hasanta_final"]
    + list(KAR_NAMES.values())
    + list(PHALA_NAMES.values())
    + ["final:" + k for k in KAR_NAMES.values()]
)


def is_mark(ch: str) -> bool:
    return (
        ch in VOWEL_SIGNS
        or ch in OTHER_MARKS
        or ch in (HASANTA, NUKTA, ZWJ, ZWNJ)
        or unicodedata.category(ch).startswith("M")
    )


def decode(data: bytes) -> str:
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise DecodeError(exc.start) from None


def _check_scalars(text: str) -> None:
    for i, ch in enumerate(text):
        if 0xD800 <= ord(ch) <= 0xDFFF:
            offset = len(text[:i].encode("utf-8", "surrogatepass"))
            raise DecodeError(offset, "lone surrogate")


def parse_codepoints(field_text: str) -> str:
    return "".join(chr(int(tok.upper().removeprefix("U+"), 16)) for tok in field_text.split())


def load_legacy_map(lines: Iterable[str]) -> list[tuple[str, str]]:
    """Read `from<TAB>to` codepoint substitutions; longest sources apply first."""
    pairs = []
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].rstrip("\n")
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) < 2:
            raise ScriptError(f"line {lineno}: expected from<TAB>to")
        try:
            pairs.append((parse_codepoints(parts[0]), parse_codepoints(parts[1])))
        except ValueError as exc:
            raise ScriptError(f"line {lineno}: {exc}") from None
    pairs.sort(key=lambda p: -len(p[0]))
    return pairs


_default_legacy: list[tuple[str, str]] | None = None


def default_legacy_map() -> list[tuple[str, str]]:
    global _default_legacy
    if _default_legacy is None:
        text = resources.files("dhatu.data").joinpath("legacy.tsv").read_text("utf-8")
        _default_legacy = load_legacy_map(text.splitlines())
    return _default_legacy


def to_canonical(text: str, legacy: list[tuple[str, str]] | None = None) -> str:
    if legacy is None:
        legacy = default_legacy_map()
    text = unicodedata.normalize("NFC", text)
    for src, dst in legacy:
        text = text.replace(unicodedata.normalize("NFC", src), dst)
    return unicodedata.normalize("NFC", text)


_SPACE_RUN = re.compile(r"\s+")


def normalize_text(raw: str | bytes, legacy: list[tuple[str, str]] | None = None) -> str:
    if isinstance(raw, bytes):
        raw = decode(raw)
    _check_scalars(raw)
    text = to_canonical(raw, legacy)
    text = text.replace(DOUBLE_DANDA, DANDA)
    text = "".join(f" {ch} " if ch in DETACHED else ch for ch in text)

    lines = []
    current: list[str] = []
    for m in re.finditer(r"\S+|\s+", text):
        tok = m.group()
        if not tok.isspace():
            current.append(tok)
        elif "\n" in tok and current and current[-1] in TERMINATORS:
            # a line break after a terminator separates sentences
            lines.append(" ".join(current))
            current = []
    if current:
        lines.append(" ".join(current))
    return "\n".join(lines)


def tokens(text: str) -> list[str]:
    return _SPACE_RUN.split(text.strip()) if text.strip() else []


def _category(text: str) -> str:
    first = text[0]
    if first in CONSONANTS:
        if any(text[i] == HASANTA and i + 1 < len(text) and text[i + 1] in CONSONANTS
               for i in range(len(text))):
            return "conjunct"
        return "consonant-base"
    if first in INDEPENDENT_VOWELS:
        return "independent-vowel"
    if first in DIGITS or unicodedata.category(first) == "Nd":
        return "digit"
    if unicodedata.category(first).startswith("P") or first in TERMINATORS:
        return "punctuation"
    return "other"


def segment(word: str) -> list[GraphemeCluster]:
    """Split normalized text into Bengali grapheme clusters.

    A consonant following a hasanta (optionally with ZWJ) joins the current
    conjunct; every other base letter opens a new cluster. Marks attach to the
    preceding letter cluster and raise SegmentationError when there is none.
    """
    pieces: list[list[str]] = []
    for ch in word:
        if pieces:
            cur = pieces[-1]
            prev = cur[-1]
            if ch in CONSONANTS and cur[0] in CONSONANTS and (
                prev == HASANTA or (prev == ZWJ and len(cur) > 1 and cur[-2] == HASANTA)
            ):
                cur.append(ch)
                continue
            if is_mark(ch):
                head = cur[0]
                if head in CONSONANTS or head in INDEPENDENT_VOWELS or (
                    unicodedata.category(head).startswith("L") and not _is_bengali(head)
                ):
                    cur.append(ch)
                    continue
                raise SegmentationError(len(pieces), ch)
        elif is_mark(ch):
            raise SegmentationError(0, ch)
        pieces.append([ch])
    return [GraphemeCluster("".join(p), _category("".join(p))) for p in pieces]


def _is_bengali(ch: str) -> bool:
    return 0x0980 <= ord(ch) <= 0x09FF


def features(word: str | list[GraphemeCluster]) -> FeatureVector:
    clusters = segment(word) if isinstance(word, str) else word
    text = "".join(c.text for c in clusters)
    kars: dict[str, int] = {}
    phalas: dict[str, int] = {}
    vowels = consonants = 0
    for i, ch in enumerate(text):
        if ch in INDEPENDENT_VOWELS:
            vowels += 1
        elif ch in VOWEL_SIGNS:
            vowels += 1
            kars[KAR_NAMES[ch]] = kars.get(KAR_NAMES[ch], 0) + 1
        elif ch in CONSONANTS:
            consonants += 1
            if ch in PHALA_NAMES and i > 0 and text[i - 1] == HASANTA:
                phalas[PHALA_NAMES[ch]] = phalas.get(PHALA_NAMES[ch], 0) + 1
    final_kars = frozenset(
        KAR_NAMES[ch] for ch in (clusters[-1].text if clusters else "") if ch in VOWEL_SIGNS
    )
    return FeatureVector(
        char_count=len(clusters),
        vowel_count=vowels,
        consonant_count=consonants,
        kar_counts=kars,
        phala_counts=phalas,
        has_hasanta_final=text.endswith(HASANTA),
        final_kars=final_kars,
    )


def join(clusters: Iterable[GraphemeCluster | str]) -> str:
    return "".join(str(c) for c in clusters)
