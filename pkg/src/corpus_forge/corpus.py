"""Parallel corpora: sentence pairs, token counting, dedup, threshold sampling, splits.

A "token" throughout the toolkit is a whitespace-delimited unit after Unicode
NFC normalization and trimming. Thresholds are read as "first prefix reaching
at least the threshold": the sentence that crosses the line is kept.
"""

import json
import random
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from .errors import CorpusFormatError, InsufficientData

ORIGIN_NATURAL = "natural"
ORIGIN_SYNTHETIC = "synthetic"


@dataclass(frozen=True)
class SentencePair:
    id: str
    source: str
    target: str
    origin: str = ORIGIN_NATURAL
    seed_word: Optional[str] = None

    def __post_init__(self):
        if self.origin not in (ORIGIN_NATURAL, ORIGIN_SYNTHETIC):
            raise ValueError(f"bad origin: {self.origin!r}")
        for side in (self.source, self.target):
            if not side.strip():
                raise ValueError("source/target must be non-empty after trimming")
            if "\n" in side or "\r" in side:
                raise ValueError("source/target must be single-line")
        if self.origin == ORIGIN_SYNTHETIC and self.seed_word is None:
            raise ValueError("synthetic pairs must carry a seed_word")
        if self.origin == ORIGIN_NATURAL and self.seed_word is not None:
            raise ValueError("natural pairs must not carry a seed_word")


@dataclass
class ParallelCorpus:
    pairs: list
    source_lang: str
    target_lang: str

    def __post_init__(self):
        ids = [p.id for p in self.pairs]
        if len(set(ids)) != len(ids):
            raise ValueError("pair ids must be unique")

    def __len__(self):
        return len(self.pairs)

    def source_lines(self):
        return [p.source for p in self.pairs]

    def target_lines(self):
        return [p.target for p in self.pairs]

    def source_token_count(self):
        return sum(count_tokens(p.source) for p in self.pairs)


@dataclass
class SplitSpec:
    train_token_threshold: int = 900_000
    valid_token_threshold: int = 100_000
    test_token_threshold: Optional[int] = None  # natural corpora only
    rng_seed: int = 0

    def __post_init__(self):
        for value in (self.train_token_threshold, self.valid_token_threshold):
            if value <= 0:
                raise ValueError("thresholds must be > 0")
        if self.test_token_threshold is not None and self.test_token_threshold <= 0:
            raise ValueError("thresholds must be > 0")


def normalize(text: str) -> str:
    return unicodedata.normalize("NFC", text).strip()


def count_tokens(text: str) -> int:
    """Number of whitespace-delimited tokens after NFC normalization and trimming."""
    return len(normalize(text).split())


def dedup(items: Iterable[str], mode: str) -> list:
    """Drop duplicates, keeping first occurrences in order.

    seed_word mode compares case-insensitively (chat models vary capitalization
    of the same lemma); sentence mode compares exactly. Both compare after NFC
    normalization and trimming.
    """
    if mode not in ("seed_word", "sentence"):
        raise ValueError(f"bad dedup mode: {mode!r}")
    seen = set()
    kept = []
    for item in items:
        key = normalize(item)
        if mode == "seed_word":
            key = key.casefold()
        if key not in seen:
            seen.add(key)
            kept.append(item)
    return kept


def _take_until(pairs, threshold):
    """First prefix of pairs whose source tokens reach >= threshold, plus the rest."""
    total = 0
    for i, pair in enumerate(pairs):
        total += count_tokens(pair.source)
        if total >= threshold:
            return pairs[: i + 1], pairs[i + 1 :]
    raise InsufficientData(
        f"corpus has {total} source tokens, threshold {threshold} not reachable"
    )


def sample_to_threshold(corpus: ParallelCorpus, threshold: int, rng_seed: int):
    """Shuffle with a seeded RNG and take pairs until source tokens reach threshold.

    Returns (selected, remainder); remainder keeps the shuffled order.
    """
    if threshold <= 0:
        raise ValueError("threshold must be > 0")
    shuffled = list(corpus.pairs)
    random.Random(rng_seed).shuffle(shuffled)
    selected, rest = _take_until(shuffled, threshold)
    make = lambda pairs: ParallelCorpus(pairs, corpus.source_lang, corpus.target_lang)
    return make(selected), make(rest)


def make_splits(corpus: ParallelCorpus, spec: SplitSpec, with_test: bool = False):
    """Draw train / valid / optional test sequentially from one seeded shuffle.

    Sequential prefix consumption guarantees the splits are disjoint by id.
    Returns a dict with keys "train", "valid" and, when requested, "test".
    """
    if with_test and spec.test_token_threshold is None:
        raise ValueError("with_test requires test_token_threshold")
    shuffled = list(corpus.pairs)
    random.Random(spec.rng_seed).shuffle(shuffled)
    train, rest = _take_until(shuffled, spec.train_token_threshold)
    valid, rest = _take_until(rest, spec.valid_token_threshold)
    make = lambda pairs: ParallelCorpus(pairs, corpus.source_lang, corpus.target_lang)
    splits = {"train": make(train), "valid": make(valid)}
    if with_test:
        test, rest = _take_until(rest, spec.test_token_threshold)
        splits["test"] = make(test)
    return splits


# ---------------------------------------------------------------------------
# On-disk formats: (a) line-aligned plain text pair, (b) JSON lines.

def write_jsonl(corpus: ParallelCorpus, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for p in corpus.pairs:
            record = {
                "id": p.id,
                "src": p.source,
                "tgt": p.target,
                "origin": p.origin,
                "seed_word": p.seed_word,
            }
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


def read_jsonl(path, source_lang: str, target_lang: str) -> ParallelCorpus:
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(f"{path}:{lineno}: bad JSON: {exc}") from exc
            missing = {"id", "src", "tgt", "origin"} - record.keys()
            if missing:
                raise CorpusFormatError(
                    f"{path}:{lineno}: missing fields {sorted(missing)}"
                )
            try:
                pairs.append(
                    SentencePair(
                        id=str(record["id"]),
                        source=record["src"],
                        target=record["tgt"],
                        origin=record["origin"],
                        seed_word=record.get("seed_word"),
                    )
                )
            except ValueError as exc:
                raise CorpusFormatError(f"{path}:{lineno}: {exc}") from exc
    return ParallelCorpus(pairs, source_lang, target_lang)


def write_plain_pair(corpus: ParallelCorpus, stem) -> None:
    """Write <stem>.<srclang> and <stem>.<tgtlang>, line i aligned to line i."""
    stem = Path(stem)
    for suffix, lines in (
        (corpus.source_lang, corpus.source_lines()),
        (corpus.target_lang, corpus.target_lines()),
    ):
        with open(f"{stem}.{suffix}", "w", encoding="utf-8", newline="\n") as fh:
            for line in lines:
                fh.write(line + "\n")


def read_plain_pair(stem, source_lang: str, target_lang: str) -> ParallelCorpus:
    stem = Path(stem)
    src_path = Path(f"{stem}.{source_lang}")
    tgt_path = Path(f"{stem}.{target_lang}")
    src_lines = src_path.read_text(encoding="utf-8").splitlines()
    tgt_lines = tgt_path.read_text(encoding="utf-8").splitlines()
    if len(src_lines) != len(tgt_lines):
        raise CorpusFormatError(
            f"{src_path} has {len(src_lines)} lines, {tgt_path} has {len(tgt_lines)}"
        )
    pairs = [
        SentencePair(id=str(i), source=s, target=t)
        for i, (s, t) in enumerate(zip(src_lines, tgt_lines))
    ]
    return ParallelCorpus(pairs, source_lang, target_lang)
