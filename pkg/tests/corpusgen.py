"""Synthetic transcript generators with planted, known signal.

Two corpus families back the learning tests:

* gratitude corpora: every applause-terminated chunk ends in a sentence
  carrying a gratitude token, and no other sentence contains one, so the
  gratitude detector separates the classes perfectly.

* dilution corpora: every sentence carries a random number of joy-lexicon
  words, with chunk-final sentences drawn from a higher range. Only the
  final sentence is informative, and pooling more sentences into a window
  washes the ratio signal out, so accuracy must fall as windows grow.
"""

from __future__ import annotations

import random

# Words that hit no category, emotion, or name lexicon entry in the
# packaged starter files and carry no gratitude/applause prefix.
CLEAN_WORDS = [
    "river", "stone", "bridge", "garden", "window", "door", "table", "road",
    "cloud", "tree", "lake", "field", "hill", "valley", "market", "corner",
    "paper", "winter", "autumn", "water", "rain", "grass", "roof", "brick",
    "shadow", "gate", "bench", "basket", "candle", "lantern", "walks",
    "runs", "stands", "rests", "glows", "drifts", "settles", "rises",
    "folds", "leans", "old", "grey", "slow", "tall", "wooden", "narrow",
    "broad", "pale", "cold",
]

# joy-only entries in the packaged starter emotion lexicon
JOY_WORDS = ["joyful", "merry", "jolly", "gleeful"]

GRATITUDE_FINALS = [
    "Thank you so much.",
    "Thank you all.",
    "We are so grateful for this.",
    "I appreciate every one of you.",
    "Thanks for being here tonight.",
    "We feel blessed to stand here.",
]

NAME_SENTENCES = [
    "We met Daniel near the market.",
    "Everyone saw Mary by the gate.",
    "The crowd followed Peter over the bridge.",
]

QUESTION_SENTENCES = [
    "How did the garden grow so tall?",
    "What made the river turn cold?",
]


def _neutral_sentence(rng: random.Random) -> str:
    noun1, verb, noun2, adj = (rng.choice(CLEAN_WORDS) for _ in range(4))
    preposition = rng.choice(["near", "by", "over", "under", "past"])
    return f"The {noun1} {verb} {preposition} the {adj} {noun2}."


def gratitude_talk(
    rng: random.Random,
    n_chunks: int,
    min_chunk: int = 8,
    max_chunk: int = 14,
    variety: bool = True,
) -> str:
    """One talk: n_chunks applause-terminated chunks whose final sentence is
    the only gratitude-bearing one, plus trailing sentences so the last
    marker is not end-of-speech."""
    parts: list[str] = []
    for _ in range(n_chunks):
        size = rng.randint(min_chunk, max_chunk)
        for position in range(size - 1):
            roll = rng.random()
            if variety and roll < 0.06:
                parts.append(rng.choice(NAME_SENTENCES))
            elif variety and roll < 0.10:
                parts.append(rng.choice(QUESTION_SENTENCES))
            else:
                parts.append(_neutral_sentence(rng))
            if variety and rng.random() < 0.04:
                parts.append("(Laughter)")
        parts.append(rng.choice(GRATITUDE_FINALS))
        parts.append("(Applause)")
    for _ in range(3):
        parts.append(_neutral_sentence(rng))
    return " ".join(parts)


def gratitude_corpus(
    n_talks: int,
    chunks_per_talk: int,
    seed: int,
    min_chunk: int = 8,
    max_chunk: int = 14,
    variety: bool = True,
) -> dict[str, str]:
    rng = random.Random(seed)
    return {
        f"talk_{i:03d}": gratitude_talk(rng, chunks_per_talk, min_chunk, max_chunk, variety)
        for i in range(n_talks)
    }


def _ratio_sentence(rng: random.Random, signal_words: int, length: int = 10) -> str:
    words = [rng.choice(JOY_WORDS) for _ in range(signal_words)]
    words += [rng.choice(CLEAN_WORDS) for _ in range(length - signal_words)]
    rng.shuffle(words)
    return words[0].capitalize() + " " + " ".join(words[1:]) + "."


def dilution_talk(
    rng: random.Random,
    n_chunks: int,
    chunk_size: int = 14,
    neutral_max: int = 6,
    signal_min: int = 7,
) -> str:
    """Chunks of fixed size where only the final sentence is signal-heavy:
    neutral sentences carry 0..neutral_max joy words out of 10, final
    sentences signal_min..10."""
    parts: list[str] = []
    for _ in range(n_chunks):
        for _ in range(chunk_size - 1):
            parts.append(_ratio_sentence(rng, rng.randint(0, neutral_max)))
        parts.append(_ratio_sentence(rng, rng.randint(signal_min, 10)))
        parts.append("(Applause)")
    for _ in range(3):
        parts.append(_ratio_sentence(rng, rng.randint(0, neutral_max)))
    return " ".join(parts)


def dilution_corpus(n_talks: int, chunks_per_talk: int, seed: int) -> dict[str, str]:
    rng = random.Random(seed)
    return {
        f"talk_{i:03d}": dilution_talk(rng, chunks_per_talk)
        for i in range(n_talks)
    }
