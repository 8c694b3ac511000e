"""Transcript parsing, applause-marker handling, chunk segmentation, and
construction of labeled training windows.

A talk is split into sentences; applause markers of the form "(Applause)"
are stripped from the text and recorded as positions after the sentence
they follow (or interrupt). Talks are then segmented into chunks, one per
applause incidence, and each sufficiently long applause-terminated chunk
yields one positive window (the sentences right before the applause) and
one randomly placed negative window from the start of the chunk.
"""

from __future__ import annotations

import hashlib
import json
import random
import re
import warnings
from bisect import bisect_right
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence


class EmptyTranscript(ValueError):
    """Raised when a transcript contains no sentence text."""


class InvalidWindow(ValueError):
    """Raised for window sizes below 1."""


_TOKEN_RE = re.compile(r"[a-z0-9]+(?:'[a-z0-9]+)*")
_CASED_TOKEN_RE = re.compile(r"[A-Za-z0-9]+(?:['’][A-Za-z0-9]+)*")
_APPLAUSE_RE = re.compile(r"\(\s*applause\s*\)", re.IGNORECASE)
# parenthesized runs of one to three words: stage directions like
# "(Laughter)" or "(Applause ends)" that carry no speech text
_STAGE_RE = re.compile(r"\(\s*[A-Za-z]+(?:\s+[A-Za-z]+){0,2}\s*\)")
_TERMINAL_RE = re.compile(r"[.!?]+[\"'”’)\]]*")
_QUOTE_OPENERS = "\"'“‘("

# tokens before a bare period that do not end a sentence
_ABBREVIATIONS = frozenset({
    "dr", "mr", "mrs", "ms", "prof", "rev", "gen", "hon", "st", "sr", "jr",
    "vs", "etc", "mt", "capt", "sgt", "col", "lt", "e.g", "i.e", "u.s",
    "u.k", "inc", "ltd", "co", "corp", "dept", "est", "fig", "vol",
})


def tokenize(text: str) -> list[str]:
    """Lowercase word tokens; internal apostrophes kept ("don't" is one token)."""
    return _TOKEN_RE.findall(text.replace("’", "'").lower())


def cased_tokens(text: str) -> list[str]:
    """Tokens with original casing, for capitalization-sensitive detectors."""
    return _CASED_TOKEN_RE.findall(text)


@dataclass(frozen=True)
class Sentence:
    text: str
    words: tuple[str, ...]
    index_in_talk: int

    @classmethod
    def from_text(cls, text: str, index_in_talk: int = 0) -> "Sentence":
        return cls(text.strip(), tuple(tokenize(text)), index_in_talk)


@dataclass(frozen=True)
class Transcript:
    talk_id: str
    sentences: tuple[Sentence, ...]
    applause_positions: frozenset[int]


@dataclass(frozen=True)
class Chunk:
    talk_id: str
    sentences: tuple[Sentence, ...]
    terminated_by_applause: bool

    def __len__(self) -> int:
        return len(self.sentences)


@dataclass(frozen=True)
class LabeledExample:
    talk_id: str
    sentence_texts: tuple[str, ...]
    label: str  # "pos" or "neg"
    window_size: int


def _is_abbreviation_boundary(text: str, dot_pos: int) -> bool:
    """True when the period at dot_pos ends an abbreviation or an initial."""
    i = dot_pos
    while i > 0 and (text[i - 1].isalpha() or text[i - 1] == "."):
        i -= 1
    token = text[i:dot_pos].rstrip(".")
    if not token:
        return False
    if len(token) == 1 and token.isalpha():
        return True  # single-letter initial, e.g. "J. Smith"
    return token.lower() in _ABBREVIATIONS


def _split_spans(text: str) -> list[tuple[int, int]]:
    """Character spans of sentences under the deterministic splitting rule:
    break after a terminal-punctuation run (plus closing quotes) that is
    followed by whitespace and an uppercase letter or opening quote, unless
    the run is a bare period ending a stop-listed abbreviation."""
    spans: list[tuple[int, int]] = []
    start = 0
    while start < len(text) and text[start].isspace():
        start += 1  # spans begin at text, so markers before it stay unattached
    for m in _TERMINAL_RE.finditer(text):
        if m.start() < start:
            continue
        end = m.end()
        if end >= len(text):
            break
        if not text[end].isspace():
            continue
        j = end
        while j < len(text) and text[j].isspace():
            j += 1
        if j >= len(text):
            break
        nxt = text[j]
        if not (nxt.isupper() or nxt in _QUOTE_OPENERS):
            continue
        if m.group(0) == "." and _is_abbreviation_boundary(text, m.start()):
            continue
        if text[start:end].strip():
            spans.append((start, end))
        start = j
    if text[start:].strip():
        spans.append((start, len(text)))
    return spans


def split_sentences(raw_text: str) -> list[Sentence]:
    """Split marker-free text into sentences; empty input gives an empty list."""
    return [
        Sentence.from_text(raw_text[a:b], idx)
        for idx, (a, b) in enumerate(_split_spans(raw_text))
    ]


def _strip_markers(raw_text: str) -> tuple[str, list[int]]:
    """Remove stage directions, keeping applause-marker offsets.

    Returns the cleaned text and the offsets (into the cleaned text) where
    each applause marker stood. Non-applause stage directions are dropped
    silently. Every removed span is replaced by a single space so adjacent
    sentences stay separated.
    """
    pieces: list[str] = []
    marker_offsets: list[int] = []
    length = 0
    pos = 0
    for m in _STAGE_RE.finditer(raw_text):
        pieces.append(raw_text[pos:m.start()])
        length += m.start() - pos
        if _APPLAUSE_RE.fullmatch(m.group(0)):
            marker_offsets.append(length)
        pieces.append(" ")
        length += 1
        pos = m.end()
    pieces.append(raw_text[pos:])
    return "".join(pieces), marker_offsets


def parse_transcript(talk_id: str, raw_text: str) -> Transcript:
    """Parse one talk: strip markers, split sentences, attach applause.

    Each marker is attached to the sentence it follows or interrupts.
    Markers occurring before any sentence text are dropped with a warning.
    Raises EmptyTranscript when no sentence text remains.
    """
    if not raw_text.strip():
        raise EmptyTranscript(f"transcript {talk_id!r} is empty")
    cleaned, marker_offsets = _strip_markers(raw_text)
    spans = _split_spans(cleaned)
    if not spans:
        raise EmptyTranscript(f"transcript {talk_id!r} has no sentences")
    sentences = tuple(
        Sentence.from_text(cleaned[a:b], idx) for idx, (a, b) in enumerate(spans)
    )
    starts = [a for a, _ in spans]
    positions: set[int] = set()
    for offset in marker_offsets:
        idx = bisect_right(starts, offset) - 1
        if idx < 0:
            warnings.warn(
                f"talk {talk_id!r}: applause marker before any sentence dropped"
            )
            continue
        positions.add(idx)
    return Transcript(talk_id, sentences, frozenset(positions))


def segment_into_chunks(transcript: Transcript) -> list[Chunk]:
    """One chunk per applause incidence, in order, plus a trailing
    non-terminated chunk when sentences remain.

    Applause after the final sentence is end-of-speech applause and is
    deleted before segmenting, so a talk whose only applause is terminal
    yields a single non-terminated chunk.
    """
    n = len(transcript.sentences)
    positions = sorted(p for p in transcript.applause_positions if p != n - 1)
    chunks: list[Chunk] = []
    start = 0
    for p in positions:
        chunks.append(Chunk(transcript.talk_id, transcript.sentences[start:p + 1], True))
        start = p + 1
    if start < n:
        chunks.append(Chunk(transcript.talk_id, transcript.sentences[start:], False))
    return chunks


def _talk_seed(seed: int, talk_id: str) -> int:
    digest = hashlib.sha256(talk_id.encode("utf-8")).digest()
    return (seed ^ int.from_bytes(digest[:8], "big")) & 0x7FFFFFFFFFFFFFFF


def build_examples(
    chunks: Sequence[Chunk], window_size: int, rng_seed: int
) -> list[LabeledExample]:
    """Build one positive and one negative window per eligible chunk.

    Eligible chunks are applause-terminated and at least twice the window
    size long, so the two windows can never overlap. The positive window is
    the final window_size sentences; the negative window starts at a
    uniformly drawn index within the first half of the chunk, with the draw
    range clamped so the window ends before the positive one begins. Draws
    use a per-talk generator derived from rng_seed, so results do not depend
    on how talks are interleaved.
    """
    if window_size < 1:
        raise InvalidWindow(f"window_size must be >= 1, got {window_size}")
    by_talk: dict[str, list[Chunk]] = {}
    for chunk in chunks:
        by_talk.setdefault(chunk.talk_id, []).append(chunk)
    examples: list[LabeledExample] = []
    for talk_id, talk_chunks in by_talk.items():
        rng = random.Random(_talk_seed(rng_seed, talk_id))
        for chunk in talk_chunks:
            size = len(chunk)
            if not chunk.terminated_by_applause or size < 2 * window_size:
                continue
            texts = [s.text for s in chunk.sentences]
            positive = tuple(texts[size - window_size:])
            max_start = min(size // 2 - 1, size - 2 * window_size)
            start = rng.randint(0, max_start)
            negative = tuple(texts[start:start + window_size])
            examples.append(LabeledExample(talk_id, positive, "pos", window_size))
            examples.append(LabeledExample(talk_id, negative, "neg", window_size))
    return examples


def eligible_chunk_count(chunks: Sequence[Chunk], window_size: int) -> int:
    return sum(
        1 for c in chunks
        if c.terminated_by_applause and len(c) >= 2 * window_size
    )


def write_examples_jsonl(examples: Iterable[LabeledExample], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for ex in examples:
            record = {
                "talk_id": ex.talk_id,
                "window_size": ex.window_size,
                "label": ex.label,
                "sentences": list(ex.sentence_texts),
            }
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


def read_examples_jsonl(path: str | Path) -> list[LabeledExample]:
    examples = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            examples.append(LabeledExample(
                rec["talk_id"], tuple(rec["sentences"]), rec["label"], rec["window_size"],
            ))
    return examples


def load_corpus_dir(corpus_dir: str | Path) -> list[Transcript]:
    """Parse every .txt file in a directory; the stem is the talk id.
    Files with no sentence text are skipped with a warning."""
    transcripts = []
    for path in sorted(Path(corpus_dir).glob("*.txt")):
        raw = path.read_text(encoding="utf-8")
        try:
            transcripts.append(parse_transcript(path.stem, raw))
        except EmptyTranscript:
            warnings.warn(f"skipping empty transcript file {path.name}")
    return transcripts
