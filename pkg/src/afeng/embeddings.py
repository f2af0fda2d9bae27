"""Pretrained word-vector parsing and vocabulary-aligned embedding matrices.

Vector files follow the GloVe text layout: one token followed by its vector
components per line, space separated. Files may be gzip-compressed; parsing
is streaming so multi-gigabyte files never load whole.
"""

from __future__ import annotations

import gzip
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from afeng.errors import DimensionMismatch, NonFinite
from afeng.textprep import Vocabulary

log = logging.getLogger(__name__)

OOV_INIT_SCALE = 0.05


@dataclass(eq=False)
class EmbeddingMatrix:
    """Vocabulary-aligned dense vectors; row 0 (pad) stays all-zero."""

    values: np.ndarray  # (rows, dim) float64
    trainable: bool

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def dim(self) -> int:
        return self.values.shape[1]


def parse_vectors(
    stream: Iterable[str],
    expected_dim: int,
    vocab: Vocabulary | None = None,
) -> dict[str, np.ndarray]:
    """Parse `token v1 .. vd` lines into a token -> vector map.

    Duplicate tokens keep the first occurrence. When a vocabulary is given,
    only its tokens are retained (misses are merely counted), which bounds
    memory on large files.
    """
    vectors: dict[str, np.ndarray] = {}
    parsed = skipped_dup = skipped_miss = 0
    for line_no, line in enumerate(stream, start=1):
        parts = line.rstrip("\n").split(" ")
        if len(parts) <= 1 and not line.strip():
            continue
        token, raw_values = parts[0], parts[1:]
        if len(raw_values) != expected_dim:
            raise DimensionMismatch(line_no, len(raw_values), expected_dim)
        if vocab is not None and token not in vocab.token_to_index:
            skipped_miss += 1
            continue
        if token in vectors:
            skipped_dup += 1
            continue
        try:
            vec = np.array([float(v) for v in raw_values], dtype=np.float64)
        except ValueError:
            raise NonFinite(line_no)
        if not np.all(np.isfinite(vec)):
            raise NonFinite(line_no)
        vectors[token] = vec
        parsed += 1
    log.info(
        "parsed %d vectors (%d duplicate lines skipped, %d out-of-vocabulary)",
        parsed, skipped_dup, skipped_miss,
    )
    return vectors


def load_vectors(
    path: str | Path,
    expected_dim: int,
    vocab: Vocabulary | None = None,
) -> dict[str, np.ndarray]:
    """parse_vectors over a text file, transparently gunzipping `.gz` paths."""
    path = Path(path)
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "rt", encoding="utf-8") as fh:  # type: ignore[operator]
        return parse_vectors(fh, expected_dim, vocab)


def build_matrix(
    vocab: Vocabulary,
    vectors: dict[str, np.ndarray],
    dim: int,
    seed: int,
    trainable: bool = False,
) -> EmbeddingMatrix:
    """Assemble the vocabulary-aligned matrix.

    In-vocabulary rows copy the pretrained vectors; the oov row and any
    unmatched row are drawn uniformly from [-0.05, 0.05] with the given seed
    (draws happen in ascending index order, so equal inputs and seeds are
    bit-identical). The pad row is zero.
    """
    rng = np.random.default_rng(seed)
    values = np.zeros((vocab.size, dim), dtype=np.float64)
    matched = 0
    for idx in range(1, vocab.size):
        token = vocab.index_to_token[idx]
        vec = None if idx == vocab.oov_index else vectors.get(token)
        if vec is None:
            values[idx] = rng.uniform(-OOV_INIT_SCALE, OOV_INIT_SCALE, dim)
        else:
            if vec.shape != (dim,):
                raise DimensionMismatch(idx, vec.shape[0], dim)
            values[idx] = vec
            matched += 1
    log.info("embedding matrix %dx%d, %d pretrained rows", vocab.size, dim, matched)
    return EmbeddingMatrix(values, trainable)
