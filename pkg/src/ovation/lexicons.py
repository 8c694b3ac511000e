"""Lexical resources backing feature extraction.

Loads and indexes a pronunciation dictionary (CMUdict plain-text format),
a word-emotion association lexicon (tab-separated word/category/flag lines),
category lexicons ("term<TAB>category" lines, trailing * marks a prefix
term), and a given-name set. Loaded bundles are immutable and safe to share
across threads.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

ARPABET = frozenset({
    "AA", "AE", "AH", "AO", "AW", "AY", "B", "CH", "D", "DH", "EH", "ER",
    "EY", "F", "G", "HH", "IH", "IY", "JH", "K", "L", "M", "N", "NG", "OW",
    "OY", "P", "R", "S", "SH", "T", "TH", "UH", "UW", "V", "W", "Y", "Z",
    "ZH",
})

EMOTION_CATEGORIES = (
    "anger", "anticipation", "disgust", "fear", "joy",
    "sadness", "surprise", "trust", "negative", "positive",
)

DEFAULT_GRATITUDE_PREFIXES = ("grateful", "gratitud", "thank", "appreciate", "bless")
DEFAULT_APPLAUSE_PREFIXES = ("applau",)

_ALT_PRONUNCIATION_RE = re.compile(r"^(.+)\((\d+)\)$")
_STRESS_RE = re.compile(r"\d+$")


class LexiconParseError(ValueError):
    """A lexicon file line could not be parsed; the message names the line."""


def strip_stress(phoneme: str) -> str:
    return _STRESS_RE.sub("", phoneme)


@dataclass(frozen=True)
class PhoneticDict:
    """Word pronunciations keyed by uppercase spelling, primary first."""

    entries: dict[str, tuple[tuple[str, ...], ...]]

    def __len__(self) -> int:
        return len(self.entries)


def load_phonetic_dict(lines: Iterable[str]) -> PhoneticDict:
    """Parse CMUdict-format lines.

    Lines starting with ";;;" are comments. Entry lines hold an uppercase
    word followed by its phonemes; alternates are written WORD(2), WORD(3)
    and are appended after the primary pronunciation. Stress digits are
    stripped from the stored phonemes.
    """
    entries: dict[str, list[tuple[str, ...]]] = {}
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith(";;;"):
            continue
        fields = line.split()
        if len(fields) < 2:
            raise LexiconParseError(f"line {lineno}: expected WORD PH1 PH2 ..., got {line!r}")
        word, raw_phones = fields[0].upper(), fields[1:]
        alt = _ALT_PRONUNCIATION_RE.match(word)
        if alt:
            word = alt.group(1)
        phones = tuple(strip_stress(ph) for ph in raw_phones)
        bad = [ph for ph in phones if ph not in ARPABET]
        if bad:
            raise LexiconParseError(f"line {lineno}: unknown phoneme(s) {bad} in {line!r}")
        entries.setdefault(word, []).append(phones)
    return PhoneticDict({w: tuple(ps) for w, ps in entries.items()})


def lookup_phonemes(dictionary: PhoneticDict, word: str) -> tuple[str, ...] | None:
    """Primary pronunciation of `word`, or None when out of vocabulary."""
    pronunciations = dictionary.entries.get(word.upper())
    return pronunciations[0] if pronunciations else None


@dataclass(frozen=True)
class EmotionLexicon:
    word_to_categories: dict[str, frozenset[str]]

    def categories_of(self, token: str) -> frozenset[str]:
        return self.word_to_categories.get(token, frozenset())


def load_emotion_lexicon(lines: Iterable[str]) -> EmotionLexicon:
    """Parse word<TAB>category<TAB>flag lines; only flag=1 pairs are kept."""
    assoc: dict[str, set[str]] = {}
    for lineno, line in enumerate(lines, start=1):
        line = line.rstrip("\n")
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise LexiconParseError(f"line {lineno}: expected word<TAB>category<TAB>flag, got {line!r}")
        word, category, flag = parts[0].strip().lower(), parts[1].strip(), parts[2].strip()
        if category not in EMOTION_CATEGORIES:
            raise LexiconParseError(f"line {lineno}: unknown emotion category {category!r}")
        if flag not in ("0", "1"):
            raise LexiconParseError(f"line {lineno}: flag must be 0 or 1, got {flag!r}")
        if flag == "1":
            assoc.setdefault(word, set()).add(category)
    return EmotionLexicon({w: frozenset(cs) for w, cs in assoc.items()})


@dataclass(frozen=True)
class CategoryLexicon:
    """One word category: exact tokens plus prefix terms (from trailing *)."""

    category_name: str
    exact_terms: frozenset[str]
    prefix_terms: frozenset[str]


def match_token(lexicon: CategoryLexicon, token: str) -> bool:
    """True iff the lowercase token is an exact term or extends a prefix term."""
    if token in lexicon.exact_terms:
        return True
    return any(token.startswith(p) for p in lexicon.prefix_terms)


def load_category_lexicon_file(lines: Iterable[str]) -> list[CategoryLexicon]:
    """Parse term<TAB>category lines into one lexicon per category.

    Categories keep their order of first appearance; a term may appear under
    several categories via repeated lines.
    """
    exact: dict[str, set[str]] = {}
    prefixes: dict[str, set[str]] = {}
    order: list[str] = []
    for lineno, line in enumerate(lines, start=1):
        line = line.rstrip("\n")
        if not line.strip():
            continue
        if "\t" not in line:
            raise LexiconParseError(f"line {lineno}: expected term<TAB>category, got {line!r}")
        term, category = line.split("\t", 1)
        term, category = term.strip().lower(), category.strip()
        if not term or term == "*" or not category:
            raise LexiconParseError(f"line {lineno}: empty term or category in {line!r}")
        if category not in exact:
            exact[category] = set()
            prefixes[category] = set()
            order.append(category)
        if term.endswith("*"):
            prefixes[category].add(term[:-1])
        else:
            exact[category].add(term)
    return [
        CategoryLexicon(c, frozenset(exact[c]), frozenset(prefixes[c]))
        for c in order
    ]


@dataclass(frozen=True)
class NameSet:
    names: frozenset[str]

    def __contains__(self, token: str) -> bool:
        return token in self.names


def load_name_set(lines: Iterable[str], min_count: int = 0) -> NameSet:
    """Parse a names file: one name per line, or name,sex,count CSV rows
    (the Social Security national format), keeping rows with count >=
    min_count. Names are lowercased and deduplicated."""
    names: set[str] = set()
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        if "," in line:
            parts = line.split(",")
            name = parts[0].strip()
            try:
                count = int(parts[-1])
            except ValueError as exc:
                raise LexiconParseError(f"line {lineno}: bad count in {line!r}") from exc
            if count < min_count:
                continue
        else:
            name = line
        if not name or any(ch.isspace() for ch in name):
            raise LexiconParseError(f"line {lineno}: names must be single tokens, got {line!r}")
        names.add(name.lower())
    return NameSet(frozenset(names))


@dataclass(frozen=True)
class LexiconBundle:
    """All lexical resources needed by the feature extractors."""

    phonetic: PhoneticDict
    emotions: EmotionLexicon
    categories: tuple[CategoryLexicon, ...]
    names: NameSet
    gratitude_prefixes: tuple[str, ...] = DEFAULT_GRATITUDE_PREFIXES
    applause_prefixes: tuple[str, ...] = DEFAULT_APPLAUSE_PREFIXES


def load_bundle(
    phonetic_path: str,
    emotion_path: str,
    category_path: str,
    names_path: str,
    name_min_count: int = 0,
) -> LexiconBundle:
    with open(phonetic_path, encoding="utf-8") as fh:
        phonetic = load_phonetic_dict(fh)
    with open(emotion_path, encoding="utf-8") as fh:
        emotions = load_emotion_lexicon(fh)
    with open(category_path, encoding="utf-8") as fh:
        categories = tuple(load_category_lexicon_file(fh))
    with open(names_path, encoding="utf-8") as fh:
        names = load_name_set(fh, min_count=name_min_count)
    return LexiconBundle(phonetic, emotions, categories, names)
