"""Corpus ingestion: load, consolidate, balance and split labelled sentences.

Corpus files are UTF-8 TSV with header ``text<TAB>label<TAB>source`` (tweets
contain commas, tabs never appear in the text column). A CSV variant with the
same columns is accepted for interoperability.
"""

from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from afeng.errors import (
    CorpusError,
    EmptyText,
    InvalidFraction,
    MalformedRow,
    MissingClass,
    UnknownLabel,
)
from afeng.labels import EMOTION_ORDER, EmotionLabel

log = logging.getLogger(__name__)

CORPUS_COLUMNS = ("text", "label", "source")


@dataclass(frozen=True)
class LabeledSentence:
    """One English sentence carrying exactly one emotion label."""

    text: str
    label: EmotionLabel
    source_id: str = ""

    def __post_init__(self):
        if not self.text.strip():
            raise EmptyText()


@dataclass(frozen=True)
class CorpusSplit:
    train: tuple[LabeledSentence, ...]
    validation: tuple[LabeledSentence, ...]
    test: tuple[LabeledSentence, ...]
    seed: int = 0

    def __len__(self) -> int:
        return len(self.train) + len(self.validation) + len(self.test)


def load_corpus(path: str | Path, fmt: str = "tsv") -> list[LabeledSentence]:
    """Read all rows of a corpus file, aborting on the first bad row.

    Rows are indexed from 1 (the header is row 0). Labels are matched
    case-insensitively against the eight emotion names; a missing source
    column falls back to the file stem.
    """
    path = Path(path)
    if fmt not in ("tsv", "csv"):
        raise CorpusError(f"unsupported corpus format {fmt!r}")
    delimiter = "\t" if fmt == "tsv" else ","
    default_source = path.stem

    with open(path, encoding="utf-8", newline="") as fh:
        if fmt == "tsv":
            reader = csv.reader(fh, delimiter=delimiter, quoting=csv.QUOTE_NONE)
        else:
            reader = csv.reader(fh, delimiter=delimiter)
        try:
            header = next(reader)
        except StopIteration:
            return []
        header = [h.strip().lower() for h in header]
        try:
            text_col = header.index("text")
            label_col = header.index("label")
        except ValueError:
            raise MalformedRow(0, "header must name 'text' and 'label' columns")
        source_col = header.index("source") if "source" in header else None

        rows: list[LabeledSentence] = []
        for i, cells in enumerate(reader, start=1):
            if not cells:
                continue
            if len(cells) < 2 or len(cells) > len(header):
                raise MalformedRow(i, f"expected {len(header)} columns, found {len(cells)}")
            try:
                text = cells[text_col]
                raw_label = cells[label_col]
            except IndexError:
                raise MalformedRow(i, "missing text or label column")
            if not text.strip():
                raise EmptyText(i)
            try:
                label = EmotionLabel.from_name(raw_label)
            except KeyError:
                raise UnknownLabel(i, raw_label)
            source = default_source
            if source_col is not None and source_col < len(cells) and cells[source_col]:
                source = cells[source_col]
            rows.append(LabeledSentence(text.strip(), label, source))
    log.info("loaded %d rows from %s", len(rows), path)
    return rows


def save_corpus(path: str | Path, rows: Iterable[LabeledSentence]) -> int:
    """Write rows in the TSV corpus format; returns the row count.

    Tabs and newlines inside the text are replaced by single spaces so the
    format stays quoting-free.
    """
    path = Path(path)
    n = 0
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("text\tlabel\tsource\n")
        for row in rows:
            text = " ".join(row.text.split())
            fh.write(f"{text}\t{row.label.canonical_name}\t{row.source_id}\n")
            n += 1
    return n


def class_histogram(corpus: Iterable[LabeledSentence]) -> dict[EmotionLabel, int]:
    counts = {label: 0 for label in EMOTION_ORDER}
    for row in corpus:
        counts[row.label] += 1
    return counts


def consolidate_and_balance(
    sources: Sequence[Sequence[LabeledSentence]],
    per_class: int | None = None,
    seed: int = 0,
) -> list[LabeledSentence]:
    """Merge corpora and downsample every class to the same count.

    The target count is min(per_class, smallest class count). Selection
    within a class is a seeded shuffle followed by truncation, so the result
    is deterministic for a given seed.
    """
    merged: list[LabeledSentence] = [row for src in sources for row in src]
    by_class: dict[EmotionLabel, list[LabeledSentence]] = {
        label: [] for label in EMOTION_ORDER
    }
    for row in merged:
        by_class[row.label].append(row)
    for label in EMOTION_ORDER:
        if not by_class[label]:
            raise MissingClass(label.canonical_name)

    smallest = min(len(v) for v in by_class.values())
    target = smallest if per_class is None else min(per_class, smallest)

    rng = np.random.default_rng(seed)
    balanced: list[LabeledSentence] = []
    for label in EMOTION_ORDER:
        group = by_class[label]
        order = rng.permutation(len(group))
        balanced.extend(group[i] for i in order[:target])
    log.info(
        "consolidated %d rows from %d sources, balanced to %d per class",
        len(merged), len(sources), target,
    )
    return balanced


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def _allocate_per_class(
    counts: dict[EmotionLabel, int], total: int, fraction: float
) -> dict[EmotionLabel, int]:
    """Largest-remainder allocation of `total` picks across classes.

    Keeps every class within one instance of its proportional share while the
    overall sum lands exactly on `total`.
    """
    quotas = {c: fraction * n for c, n in counts.items()}
    take = {c: min(int(math.floor(q)), counts[c]) for c, q in quotas.items()}
    remainder = total - sum(take.values())
    order = sorted(
        counts,
        key=lambda c: (-(quotas[c] - math.floor(quotas[c])), int(c)),
    )
    i = 0
    while remainder > 0 and i < 8 * len(order):
        c = order[i % len(order)]
        if take[c] < counts[c]:
            take[c] += 1
            remainder -= 1
        i += 1
    return take


def split(
    corpus: Sequence[LabeledSentence],
    seed: int,
    test_fraction: float,
    validation_fraction: float = 0.02,
) -> CorpusSplit:
    """Stratified train/validation/test split, deterministic per seed.

    Test picks round(test_fraction * N) rows; the validation set takes
    round(validation_fraction * pool) rows of the remaining train pool. Each
    class stays within one instance of its proportional share.
    """
    if not (0 <= test_fraction < 1) or not (0 <= validation_fraction < 1):
        raise InvalidFraction("fractions must lie in [0, 1)")
    if test_fraction + validation_fraction >= 1:
        raise InvalidFraction("test and validation fractions must sum below 1")
    if not corpus:
        raise InvalidFraction("corpus is empty")

    rng = np.random.default_rng(seed)
    by_class: dict[EmotionLabel, list[LabeledSentence]] = {
        label: [] for label in EMOTION_ORDER
    }
    for row in corpus:
        by_class[row.label].append(row)
    shuffled = {
        label: [group[i] for i in rng.permutation(len(group))] if group else []
        for label, group in by_class.items()
    }

    counts = {label: len(rows) for label, rows in shuffled.items()}
    n_total = len(corpus)
    test_take = _allocate_per_class(
        counts, _round_half_up(test_fraction * n_total), test_fraction
    )

    pool_counts = {label: counts[label] - test_take[label] for label in counts}
    pool_total = sum(pool_counts.values())
    val_take = _allocate_per_class(
        pool_counts, _round_half_up(validation_fraction * pool_total), validation_fraction
    )

    train: list[LabeledSentence] = []
    validation: list[LabeledSentence] = []
    test: list[LabeledSentence] = []
    for label in EMOTION_ORDER:
        rows = shuffled[label]
        t, v = test_take[label], val_take[label]
        test.extend(rows[:t])
        validation.extend(rows[t:t + v])
        train.extend(rows[t + v:])
    return CorpusSplit(tuple(train), tuple(validation), tuple(test), seed)


# -- synthetic corpus -------------------------------------------------------

_KEYWORDS: dict[EmotionLabel, tuple[str, ...]] = {
    EmotionLabel.ANTICIPATION: ("anticipating", "awaiting", "expecting", "eager", "forecast"),
    EmotionLabel.JOY: ("joyful", "delighted", "cheerful", "elated", "gleeful"),
    EmotionLabel.TRUST: ("trusting", "reliable", "faithful", "loyal", "dependable"),
    EmotionLabel.FEAR: ("afraid", "terrified", "panicking", "fearful", "dreading"),
    EmotionLabel.SURPRISE: ("astonished", "startling", "unexpected", "stunned", "baffled"),
    EmotionLabel.SADNESS: ("mournful", "gloomy", "sorrowful", "weeping", "heartbroken"),
    EmotionLabel.DISGUST: ("disgusting", "revolting", "nauseating", "repulsive", "foul"),
    EmotionLabel.ANGER: ("furious", "enraged", "outraged", "irritated", "seething"),
}

_TEMPLATES: tuple[str, ...] = (
    "i feel so {kw} about this",
    "that was a truly {kw} moment for me",
    "this is {kw} news today",
    "we are all {kw} about the match",
    "feeling {kw} right now honestly",
    "what a {kw} day it has been",
    "my friend sounded {kw} on the phone",
    "everyone here is {kw} about tomorrow",
)


def synthetic_corpus(per_class: int = 20, seed: int = 0) -> list[LabeledSentence]:
    """Deterministic keyword-separable corpus for tests and demos.

    Each class owns a disjoint keyword set; every sentence contains exactly
    one keyword, so the classes are learnable from the text alone. Emitted
    rows carry source_id "synthetic".
    """
    rng = np.random.default_rng(seed)
    rows: list[LabeledSentence] = []
    for label in EMOTION_ORDER:
        keywords = _KEYWORDS[label]
        combos = [(kw, tpl) for kw in keywords for tpl in _TEMPLATES]
        order = rng.permutation(len(combos))
        if per_class > len(combos):
            raise CorpusError(
                f"per_class {per_class} exceeds the {len(combos)} distinct "
                f"sentences available for {label.canonical_name}"
            )
        for i in order[:per_class]:
            kw, tpl = combos[i]
            rows.append(LabeledSentence(tpl.format(kw=kw), label, "synthetic"))
    return rows


def corpus_to_tsv(rows: Iterable[LabeledSentence]) -> str:
    """The corpus serialized as a TSV string (same format as save_corpus)."""
    buf = io.StringIO()
    buf.write("text\tlabel\tsource\n")
    for row in rows:
        text = " ".join(row.text.split())
        buf.write(f"{text}\t{row.label.canonical_name}\t{row.source_id}\n")
    return buf.getvalue()
