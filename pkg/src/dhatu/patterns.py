"""Stem-tail patterns shared by repair rules and paradigm stem rewrites.

A pattern is a run of literal Bengali characters and the wildcards ``C``
(one consonant base, with an optional nukta) and ``V`` (one dependent vowel
sign), optionally ending in ``$``. Patterns always match at the end of the
stem. In a replacement, each ``C``/``V`` copies the character(s) captured by
the wildcard of the same kind at the same ordinal position.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass

from .script import CONSONANTS, NUKTA, VOWEL_SIGNS

_CONS = "[" + "".join(sorted(CONSONANTS)) + "]" + NUKTA + "?"
_SIGN = "[" + "".join(sorted(VOWEL_SIGNS)) + "]"
EMPTY = ("(none)", "∅", "")


class PatternError(ValueError):
    pass


@dataclass(frozen=True)
class TailRewrite:
    pattern: str
    replacement: str
    _regex: re.Pattern
    _slots: tuple

    def apply(self, stem: str) -> str | None:
        m = self._regex.search(stem)
        if m is None:
            return None
        captured = {"C": [], "V": []}
        for kind, group in zip(self._slots, m.groups()):
            captured[kind].append(group)
        out = []
        used = {"C": 0, "V": 0}
        for ch in self.replacement:
            if ch in used:
                k = used[ch]
                if k >= len(captured[ch]):
                    raise PatternError(f"replacement {self.replacement!r} uses more {ch} than captured")
                out.append(captured[ch][k])
                used[ch] += 1
            else:
                out.append(ch)
        return stem[: m.start()] + "".join(out)

    def __str__(self) -> str:
        return f"{self.pattern}→{self.replacement or '(none)'}"


def compile_tail(pattern: str, replacement: str) -> TailRewrite:
    pattern = unicodedata.normalize("NFC", pattern)
    replacement = unicodedata.normalize("NFC", replacement)
    body = pattern.strip()
    if body.endswith("$"):
        body = body[:-1]
    if not body:
        raise PatternError(f"empty tail pattern {pattern!r}")
    parts = []
    slots = []
    for ch in body:
        if ch == "C":
            parts.append(f"({_CONS})")
            slots.append("C")
        elif ch == "V":
            parts.append(f"({_SIGN})")
            slots.append("V")
        elif ch in "$^*+?()[]{}|\\." or ch.isspace():
            raise PatternError(f"unsupported character {ch!r} in pattern {pattern!r}")
        else:
            parts.append(re.escape(ch))
    repl = "" if replacement.strip() in EMPTY else replacement.strip()
    for kind in "CV":
        if repl.count(kind) > slots.count(kind):
            raise PatternError(f"replacement {replacement!r} uses more {kind} than {pattern!r} captures")
    return TailRewrite(pattern.strip(), repl, re.compile("".join(parts) + r"\Z"), tuple(slots))


def parse_rewrite(spec: str) -> list[TailRewrite]:
    """Parse ``pat→repl|pat→repl``; ``=`` means identity (empty list)."""
    spec = spec.strip()
    if spec in ("=", ""):
        return []
    out = []
    for alt in spec.split("|"):
        arrow = "→" if "→" in alt else "->"
        if arrow not in alt:
            raise PatternError(f"missing arrow in rewrite {alt!r}")
        pat, repl = alt.split(arrow, 1)
        out.append(compile_tail(pat, repl))
    return out


def apply_first(rewrites: list[TailRewrite], stem: str) -> str:
    for rw in rewrites:
        result = rw.apply(stem)
        if result is not None:
            return result
    return stem
