"""Tokenization, normalization and fixed-length index encoding.

The tokenizer targets tweet-like text: URLs and @-mentions are dropped, the
`#` of a hashtag is stripped while the tag word is kept, and emoticons
survive verbatim. Normalization applies a fixed shipped stop-word list and a
deterministic suffix-stripping stemmer.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

PAD_INDEX = 0
OOV_INDEX = 1
PAD_TOKEN = "<pad>"
OOV_TOKEN = "<oov>"

_URL_RE = re.compile(r"^(?:https?://|www\.)", re.IGNORECASE)
_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)
# eyes, optional nose, mouth -- or a heart
_EMOTICON_RE = re.compile(
    r"""^(?:
        [:;=8xX][-o^*']?[()\[\]dDpP/\\|{}3*]+   # :-) ;D =P x(
      | [()\[\]dDpP/\\|{}]+[-o^*']?[:;=8]       # (-: reversed
      | <+/?3+                                  # <3 </3
    )$""",
    re.VERBOSE,
)


def tokenize(text: str) -> list[str]:
    """Lowercase and split on whitespace/punctuation boundaries.

    URLs and @-mentions are removed entirely; `#tag` keeps `tag`; emoticon
    tokens pass through unchanged.
    """
    out: list[str] = []
    for raw in text.split():
        if _URL_RE.match(raw) or raw.startswith("@"):
            continue
        if raw.startswith("#"):
            raw = raw[1:]
            if not raw:
                continue
        if _EMOTICON_RE.match(raw):
            out.append(raw)
            continue
        out.extend(_WORD_RE.findall(raw.lower()))
    return out


@lru_cache(maxsize=1)
def stopwords() -> frozenset[str]:
    """The shipped stop-word list (one token per line, versioned in the repo)."""
    text = resources.files("afeng.resources").joinpath("stopwords.txt").read_text("utf-8")
    return frozenset(line.strip() for line in text.splitlines() if line.strip())


def normalize(
    tokens: Sequence[str],
    remove_stopwords: bool = True,
    stem: bool = True,
) -> list[str]:
    """Drop stop-words and/or stem, preserving token order."""
    out = list(tokens)
    if remove_stopwords:
        stop = stopwords()
        out = [t for t in out if t not in stop]
    if stem:
        out = [porter_stem(t) for t in out]
    return out


# -- Porter-style suffix stripping -----------------------------------------

_VOWELS = "aeiou"


def _is_cons(word: str, i: int) -> bool:
    c = word[i]
    if c in _VOWELS:
        return False
    if c == "y":
        return True if i == 0 else not _is_cons(word, i - 1)
    return True


def _measure(stem: str) -> int:
    """Number of vowel-to-consonant transitions in [C](VC)^m[V]."""
    m = 0
    prev_vowel = False
    for i in range(len(stem)):
        if _is_cons(stem, i):
            if prev_vowel:
                m += 1
            prev_vowel = False
        else:
            prev_vowel = True
    return m


def _has_vowel(stem: str) -> bool:
    return any(not _is_cons(stem, i) for i in range(len(stem)))


def _double_cons(word: str) -> bool:
    return len(word) >= 2 and word[-1] == word[-2] and _is_cons(word, len(word) - 1)


def _cvc(word: str) -> bool:
    if len(word) < 3:
        return False
    return (
        _is_cons(word, len(word) - 3)
        and not _is_cons(word, len(word) - 2)
        and _is_cons(word, len(word) - 1)
        and word[-1] not in "wxy"
    )


_STEP2 = (
    ("ational", "ate"), ("tional", "tion"), ("enci", "ence"), ("anci", "ance"),
    ("izer", "ize"), ("bli", "ble"), ("alli", "al"), ("entli", "ent"),
    ("eli", "e"), ("ousli", "ous"), ("ization", "ize"), ("ation", "ate"),
    ("ator", "ate"), ("alism", "al"), ("iveness", "ive"), ("fulness", "ful"),
    ("ousness", "ous"), ("aliti", "al"), ("iviti", "ive"), ("biliti", "ble"),
    ("logi", "log"),
)
_STEP3 = (
    ("icate", "ic"), ("ative", ""), ("alize", "al"), ("iciti", "ic"),
    ("ical", "ic"), ("ful", ""), ("ness", ""),
)
_STEP4 = (
    "ement", "ance", "ence", "able", "ible", "ment", "ant", "ent", "ism",
    "ate", "iti", "ous", "ive", "ize", "ion", "al", "er", "ic", "ou",
)


def porter_stem(word: str) -> str:
    """Deterministic suffix stripping following the classic five-step rules."""
    if len(word) <= 2:
        return word
    w = word

    # step 1a
    if w.endswith("sses"):
        w = w[:-2]
    elif w.endswith("ies"):
        w = w[:-2]
    elif w.endswith("ss"):
        pass
    elif w.endswith("s"):
        w = w[:-1]

    # step 1b
    grew = False
    if w.endswith("eed"):
        if _measure(w[:-3]) > 0:
            w = w[:-1]
    elif w.endswith("ed") and _has_vowel(w[:-2]):
        w = w[:-2]
        grew = True
    elif w.endswith("ing") and _has_vowel(w[:-3]):
        w = w[:-3]
        grew = True
    if grew:
        if w.endswith(("at", "bl", "iz")):
            w += "e"
        elif _double_cons(w) and w[-1] not in "lsz":
            w = w[:-1]
        elif _measure(w) == 1 and _cvc(w):
            w += "e"

    # step 1c
    if w.endswith("y") and _has_vowel(w[:-1]):
        w = w[:-1] + "i"

    # steps 2 and 3: conditional suffix rewrites at m > 0
    for table in (_STEP2, _STEP3):
        for suffix, repl in sorted(table, key=lambda p: -len(p[0])):
            if w.endswith(suffix):
                stem = w[: len(w) - len(suffix)]
                if _measure(stem) > 0:
                    w = stem + repl
                break

    # step 4: drop derivational suffixes at m > 1
    for suffix in sorted(_STEP4, key=len, reverse=True):
        if w.endswith(suffix):
            stem = w[: len(w) - len(suffix)]
            if _measure(stem) > 1:
                if suffix == "ion" and not stem.endswith(("s", "t")):
                    break
                w = stem
            break

    # step 5a
    if w.endswith("e"):
        stem = w[:-1]
        if _measure(stem) > 1 or (_measure(stem) == 1 and not _cvc(stem)):
            w = stem

    # step 5b
    if _measure(w) > 1 and _double_cons(w) and w.endswith("l"):
        w = w[:-1]
    return w


# -- vocabulary and encoding ------------------------------------------------

@dataclass(frozen=True)
class Vocabulary:
    """Bijective token/index map; indices 0 and 1 are reserved (pad, oov)."""

    token_to_index: dict[str, int]
    index_to_token: tuple[str, ...]
    pad_index: int = PAD_INDEX
    oov_index: int = OOV_INDEX

    @property
    def size(self) -> int:
        return len(self.index_to_token)

    def index(self, token: str) -> int:
        return self.token_to_index.get(token, self.oov_index)

    def to_text(self) -> str:
        return "".join(f"{t}\t{i}\n" for i, t in enumerate(self.index_to_token))

    def sha256(self) -> str:
        return hashlib.sha256(self.to_text().encode("utf-8")).hexdigest()

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_text(), encoding="utf-8")

    @classmethod
    def from_text(cls, text: str) -> "Vocabulary":
        index_to_token: list[str] = []
        for line in text.splitlines():
            if not line:
                continue
            token, _, idx = line.rpartition("\t")
            if int(idx) != len(index_to_token):
                raise ValueError(f"vocabulary indices out of order at {idx}")
            index_to_token.append(token)
        mapping = {t: i for i, t in enumerate(index_to_token) if i >= 2}
        return cls(mapping, tuple(index_to_token))

    @classmethod
    def load(cls, path: str | Path) -> "Vocabulary":
        return cls.from_text(Path(path).read_text(encoding="utf-8"))


def build_vocab(
    token_sequences: Iterable[Sequence[str]], min_count: int = 1
) -> Vocabulary:
    """Index tokens with frequency >= min_count.

    Ordering is descending frequency then lexicographic, starting at index 2,
    so equal inputs always produce the identical vocabulary. Build only from
    the training split to keep the test set unseen.
    """
    if min_count < 1:
        raise ValueError("min_count must be >= 1")
    counts: dict[str, int] = {}
    for seq in token_sequences:
        for tok in seq:
            counts[tok] = counts.get(tok, 0) + 1
    kept = sorted(
        (t for t, c in counts.items() if c >= min_count),
        key=lambda t: (-counts[t], t),
    )
    index_to_token = (PAD_TOKEN, OOV_TOKEN, *kept)
    mapping = {t: i + 2 for i, t in enumerate(kept)}
    return Vocabulary(mapping, index_to_token)


@dataclass(eq=False)
class EncodedSentence:
    """Fixed-length index sequence; positions past true_length are padding."""

    indices: np.ndarray
    true_length: int

    def __post_init__(self):
        self.indices = np.asarray(self.indices, dtype=np.int64)


def encode(tokens: Sequence[str], vocab: Vocabulary, max_len: int) -> EncodedSentence:
    """Map tokens to indices (unknown -> oov), truncate to max_len, right-pad."""
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    head = tokens[:max_len]
    indices = np.full(max_len, PAD_INDEX, dtype=np.int64)
    for i, tok in enumerate(head):
        indices[i] = vocab.index(tok)
    return EncodedSentence(indices, len(head))


def preprocess(
    text: str,
    remove_stopwords: bool = True,
    stem: bool = True,
) -> list[str]:
    """tokenize then normalize, the standard path from raw text to tokens."""
    return normalize(tokenize(text), remove_stopwords=remove_stopwords, stem=stem)


def encode_text(
    text: str,
    vocab: "Vocabulary",
    max_len: int,
    remove_stopwords: bool = True,
    stem: bool = True,
) -> "EncodedSentence":
    """Raw text straight to a fixed-length index sequence."""
    return encode(preprocess(text, remove_stopwords, stem), vocab, max_len)
