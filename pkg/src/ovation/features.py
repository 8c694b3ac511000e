"""Rhetorical-device feature extraction.

Maps a sentence window to a fixed-order numeric vector covering seven
feature families: per-category word ratios (linguistic style), ten emotion
ratios, three phonetic scores (alliteration, rhyme, homogeneity), and four
binary detectors (name projection, gratitude, question, applause seeking).
"""

from __future__ import annotations

import csv
import hashlib
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import LabeledExample, Sentence, cased_tokens
from .lexicons import (
    EMOTION_CATEGORIES,
    LexiconBundle,
    PhoneticDict,
    lookup_phonemes,
    match_token,
)

FAMILIES = (
    "linguistic_style", "emotion", "phonetic",
    "name_projection", "gratitude", "question", "applause_seeking",
)


class RegistryMismatch(ValueError):
    """The registry does not describe the supplied lexicon bundle."""


@dataclass(frozen=True)
class FeatureEntry:
    name: str
    family: str
    kind: str  # "ratio" or "binary"


@dataclass(frozen=True)
class FeatureRegistry:
    entries: tuple[FeatureEntry, ...]

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(e.name for e in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def family_of(self, name: str) -> str:
        for e in self.entries:
            if e.name == name:
                return e.family
        raise KeyError(name)

    def columns_of_family(self, family: str) -> list[int]:
        return [i for i, e in enumerate(self.entries) if e.family == family]

    def fingerprint(self) -> str:
        payload = ";".join(f"{e.name}|{e.family}|{e.kind}" for e in self.entries)
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def registry_for_bundle(bundle: LexiconBundle) -> FeatureRegistry:
    """Feature order: one style ratio per category lexicon (file order),
    the ten emotion ratios, the three phonetic scores, then the binaries."""
    entries = [
        FeatureEntry(f"style_{lex.category_name}", "linguistic_style", "ratio")
        for lex in bundle.categories
    ]
    entries += [
        FeatureEntry(f"emotion_{cat}", "emotion", "ratio")
        for cat in EMOTION_CATEGORIES
    ]
    entries += [
        FeatureEntry("alliteration", "phonetic", "ratio"),
        FeatureEntry("rhyme", "phonetic", "ratio"),
        FeatureEntry("homogeneity", "phonetic", "ratio"),
        FeatureEntry("name_projection", "name_projection", "binary"),
        FeatureEntry("gratitude", "gratitude", "binary"),
        FeatureEntry("question", "question", "binary"),
        FeatureEntry("applause_seeking", "applause_seeking", "binary"),
    ]
    return FeatureRegistry(tuple(entries))


@dataclass(frozen=True)
class FeatureVector:
    values: tuple[float, ...]
    word_count: int


def style_and_emotion_features(
    words: Sequence[str], bundle: LexiconBundle
) -> dict[str, float]:
    """Matching-token counts normalized by total words; empty input is all zeros."""
    total = len(words)
    out: dict[str, float] = {}
    for lex in bundle.categories:
        key = f"style_{lex.category_name}"
        if total == 0:
            out[key] = 0.0
        else:
            hits = sum(1 for w in words if match_token(lex, w))
            out[key] = hits / total
    counts = dict.fromkeys(EMOTION_CATEGORIES, 0)
    for w in words:
        for cat in bundle.emotions.categories_of(w):
            counts[cat] += 1
    for cat in EMOTION_CATEGORIES:
        out[f"emotion_{cat}"] = counts[cat] / total if total else 0.0
    return out


def _pronunciations(words: Sequence[str], dictionary: PhoneticDict):
    return [p for p in (lookup_phonemes(dictionary, w) for w in words) if p]


def _repeat_count(symbols: Sequence[str]) -> int:
    counts: dict[str, int] = {}
    for s in symbols:
        counts[s] = counts.get(s, 0) + 1
    return sum(c - 1 for c in counts.values())


def alliteration_score(words: Sequence[str], dictionary: PhoneticDict) -> float:
    """Repeated word-initial phonemes (occurrences minus one per phoneme)
    over the total phoneme count; 0 when nothing is in the dictionary."""
    prons = _pronunciations(words, dictionary)
    total = sum(len(p) for p in prons)
    if total == 0:
        return 0.0
    return _repeat_count([p[0] for p in prons]) / total


def rhyme_score(words: Sequence[str], dictionary: PhoneticDict) -> float:
    """Same as alliteration but over word-final phonemes."""
    prons = _pronunciations(words, dictionary)
    total = sum(len(p) for p in prons)
    if total == 0:
        return 0.0
    return _repeat_count([p[-1] for p in prons]) / total


def homogeneity_score(words: Sequence[str], dictionary: PhoneticDict) -> float:
    """Distinct phonemes over total phonemes; higher means less repetition."""
    prons = _pronunciations(words, dictionary)
    total = sum(len(p) for p in prons)
    if total == 0:
        return 0.0
    distinct = len({ph for p in prons for ph in p})
    return distinct / total


def _name_candidate_tokens(sentence_text: str) -> list[str]:
    """Capitalized tokens excluding the sentence-initial one, lowercased."""
    tokens = cased_tokens(sentence_text)
    return [
        t.replace("’", "'").lower()
        for t in tokens[1:]
        if t[0].isupper()
    ]


def binary_detectors(
    sentence: Sentence, bundle: LexiconBundle
) -> tuple[bool, bool, bool, bool]:
    """(name, gratitude, question, applause_seeking) for one sentence."""
    return _window_binaries([sentence], bundle)


def _window_binaries(
    sentences: Sequence[Sentence], bundle: LexiconBundle
) -> tuple[bool, bool, bool, bool]:
    name = any(
        tok in bundle.names.names
        for s in sentences
        for tok in _name_candidate_tokens(s.text)
    )
    words = [w for s in sentences for w in s.words]
    gratitude = any(
        w.startswith(p) for w in words for p in bundle.gratitude_prefixes
    )
    question = any("?" in s.text for s in sentences)
    applause = any(
        w.startswith(p) for w in words for p in bundle.applause_prefixes
    )
    return name, gratitude, question, applause


def extract(
    window: Sequence[Sentence],
    bundle: LexiconBundle,
    registry: FeatureRegistry,
) -> FeatureVector:
    """Feature vector for a window of one or more sentences.

    The window's words are pooled into a single token list for the ratio
    features; the binaries fire if any sentence in the window fires.
    """
    if registry.names != registry_for_bundle(bundle).names:
        raise RegistryMismatch("registry does not match the lexicon bundle")
    words = [w for s in window for w in s.words]
    values = style_and_emotion_features(words, bundle)
    values["alliteration"] = alliteration_score(words, bundle.phonetic)
    values["rhyme"] = rhyme_score(words, bundle.phonetic)
    values["homogeneity"] = homogeneity_score(words, bundle.phonetic)
    name, gratitude, question, applause = _window_binaries(window, bundle)
    values["name_projection"] = float(name)
    values["gratitude"] = float(gratitude)
    values["question"] = float(question)
    values["applause_seeking"] = float(applause)
    return FeatureVector(
        tuple(values[e.name] for e in registry.entries), len(words)
    )


def extract_example(
    example: LabeledExample, bundle: LexiconBundle, registry: FeatureRegistry
) -> FeatureVector:
    window = [Sentence.from_text(t, i) for i, t in enumerate(example.sentence_texts)]
    return extract(window, bundle, registry)


def export_features_csv(
    examples: Iterable[LabeledExample],
    bundle: LexiconBundle,
    registry: FeatureRegistry,
    path: str | Path,
) -> int:
    """Write one row per example: registry columns, then talk_id and label.
    Returns the number of rows written."""
    rows = 0
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(registry.names) + ["talk_id", "label"])
        for ex in examples:
            vec = extract_example(ex, bundle, registry)
            writer.writerow([repr(v) for v in vec.values] + [ex.talk_id, ex.label])
            rows += 1
    return rows
