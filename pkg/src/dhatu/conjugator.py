"""Forward conjugation: (root, tense, person, register) -> surface form."""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable

from .classifier import CELLS, Person, TenseClass
from .patterns import PatternError, TailRewrite, apply_first, parse_rewrite

REGISTERS = ("chalit", "sadhu")

Cell = tuple  # (TenseClass, Person)


class ParadigmError(ValueError):
    pass


class CellNotDefined(KeyError):
    def __str__(self) -> str:
        return f"cell not defined: {self.args[0]}"


@dataclass(frozen=True)
class LexiconEntry:
    root: str
    verbal_noun: str = ""
    stem_class: str = "cvc"
    irregular_overrides: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.root:
            raise ValueError("empty root")

    def __hash__(self):
        return hash((self.root, self.stem_class))


@dataclass(frozen=True)
class _Row:
    register: str
    tenses: frozenset | None
    cells: frozenset | None
    rewrites: tuple
    series: str
    line: int


class Paradigm:
    def __init__(self, series: dict, classes: dict):
        self.series = series
        self.classes = classes

    @property
    def stem_classes(self) -> frozenset:
        return frozenset(self.classes)

    def cell(self, stem_class: str, tense: TenseClass, person: Person, register: str):
        """Return (stem rewrites, ending) for a cell, or None when undefined."""
        chosen = None
        for row in self.classes.get(stem_class, ()):
            if row.register != register:
                continue
            if row.tenses is not None and tense.code not in row.tenses:
                continue
            if row.cells is not None and person not in row.cells:
                continue
            chosen = row
        if chosen is None:
            return None
        endings = self.series.get((chosen.series, tense.code))
        if endings is None:
            return None
        return chosen.rewrites, endings[CELLS.index(person)]


def _parse_cells(text: str) -> frozenset | None:
    if text.strip() == "*":
        return None
    out = set()
    for tok in text.split(","):
        tok = tok.strip()
        if ":" in tok:
            out.add(Person.parse(tok))
        else:
            matched = [c for c in CELLS if c.code == tok]
            if not matched:
                raise ValueError(f"bad cell {tok!r}")
            out.update(matched)
    return frozenset(out)


def load_paradigm(source: Iterable[str]) -> Paradigm:
    series: dict = {}
    classes: dict = {}
    section = None
    for lineno, raw in enumerate(source, 1):
        line = unicodedata.normalize("NFC", raw.rstrip("\r\n"))
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        if line.strip() in ("[series]", "[classes]"):
            section = line.strip()[1:-1]
            continue
        parts = [p.strip() for p in line.split("\t")]
        try:
            if section == "series":
                name, code, endings = parts
                TenseClass.from_code(code)
                ends = tuple(e.strip() for e in endings.split(","))
                if len(ends) != len(CELLS) or not all(ends):
                    raise ValueError(f"expected {len(CELLS)} endings")
                series[(name, code)] = ends
            elif section == "classes":
                cls, register, tenses, cells, rewrite, ser = parts
                tset = None
                if tenses != "*":
                    tset = frozenset(t.strip() for t in tenses.split(","))
                    for t in tset:
                        TenseClass.from_code(t)
                classes.setdefault(cls, []).append(
                    _Row(register, tset, _parse_cells(cells), tuple(parse_rewrite(rewrite)), ser, lineno))
            else:
                raise ValueError("row outside a [series] or [classes] section")
        except (ValueError, PatternError) as exc:
            raise ParadigmError(f"line {lineno}: {exc}") from None
    known = {name for name, _ in series}
    for cls, rows in classes.items():
        for row in rows:
            if row.series not in known:
                raise ParadigmError(f"line {row.line}: unknown series {row.series!r}")
    return Paradigm(series, classes)


def _override_key(text: str) -> tuple:
    code, pcode, formality, register = text.split(":")
    return TenseClass.from_code(code), Person(pcode, formality), register


def load_lexicon(source: Iterable[str], paradigm: Paradigm | None = None) -> dict[str, LexiconEntry]:
    lexicon: dict[str, LexiconEntry] = {}
    for lineno, raw in enumerate(source, 1):
        line = unicodedata.normalize("NFC", raw.rstrip("\r\n"))
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = [p.strip() for p in line.split("\t")]
        if len(parts) < 3:
            raise ParadigmError(f"lexicon line {lineno}: expected root, verbal noun, stem class")
        root, noun, cls = parts[:3]
        if paradigm is not None and cls not in paradigm.stem_classes:
            raise ParadigmError(f"lexicon line {lineno}: unknown stem class {cls!r}")
        overrides = {}
        if len(parts) > 3 and parts[3]:
            for item in parts[3].split(";"):
                if not item.strip():
                    continue
                try:
                    key, form = item.split("=", 1)
                    overrides[_override_key(key.strip())] = form.strip()
                except ValueError as exc:
                    raise ParadigmError(f"lexicon line {lineno}: bad override {item!r}: {exc}") from None
        lexicon[root] = LexiconEntry(root, noun, cls, overrides)
    return lexicon


def _read(name: str) -> list[str]:
    return resources.files("dhatu.data").joinpath(name).read_text("utf-8").splitlines()


_shipped: dict = {}


def shipped_paradigm() -> Paradigm:
    if "paradigm" not in _shipped:
        _shipped["paradigm"] = load_paradigm(_read("paradigm.tsv"))
    return _shipped["paradigm"]


def shipped_lexicon() -> dict[str, LexiconEntry]:
    if "lexicon" not in _shipped:
        _shipped["lexicon"] = load_lexicon(_read("lexicon.tsv"), shipped_paradigm())
    return _shipped["lexicon"]


def conjugate(entry: LexiconEntry, tense: TenseClass, person: Person, register: str = "chalit",
              paradigm: Paradigm | None = None) -> str:
    override = entry.irregular_overrides.get((tense, person, register))
    if override is not None:
        return unicodedata.normalize("NFC", override)
    paradigm = paradigm or shipped_paradigm()
    found = paradigm.cell(entry.stem_class, tense, person, register)
    if found is None:
        raise CellNotDefined(f"{entry.root} {entry.stem_class} {tense.code} {person} {register}")
    rewrites, ending = found
    stem = apply_first(list(rewrites), entry.root)
    return unicodedata.normalize("NFC", stem + ending)


def paradigm(entry: LexiconEntry, register: str = "chalit",
             data: Paradigm | None = None) -> dict[Cell, str]:
    out = {}
    for tense in TenseClass:
        for person in CELLS:
            try:
                out[(tense, person)] = conjugate(entry, tense, person, register, data)
            except CellNotDefined:
                continue
    return out
