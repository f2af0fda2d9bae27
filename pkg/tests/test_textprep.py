import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from afeng.textprep import (
    OOV_INDEX,
    PAD_INDEX,
    Vocabulary,
    build_vocab,
    encode,
    encode_text,
    normalize,
    porter_stem,
    preprocess,
    stopwords,
    tokenize,
)


# -- tokenizer ---------------------------------------------------------------

def test_tokenize_lowercases_and_splits():
    assert tokenize("Hello, World! it's fine") == ["hello", "world", "it", "s", "fine"]


def test_tokenize_drops_urls_and_mentions():
    assert tokenize("see https://x.example/a and www.example.com now @sam hi") == [
        "see", "and", "now", "hi",
    ]


def test_tokenize_hashtag_keeps_word():
    assert tokenize("#Happy day #") == ["happy", "day"]


def test_tokenize_preserves_emoticons():
    assert tokenize("well :) then <3 ok :-(") == ["well", ":)", "then", "<3", "ok", ":-("]


def test_tokenize_empty():
    assert tokenize("") == []
    assert tokenize("   \t\n ") == []


# -- stop words and normalize ------------------------------------------------

def test_stopwords_nonempty_and_common():
    stop = stopwords()
    assert {"the", "is", "and", "a"} <= stop
    assert "happy" not in stop


def test_normalize_removes_stopwords_keeps_order():
    toks = ["the", "cat", "is", "happy"]
    assert normalize(toks, stem=False) == ["cat", "happy"]
    assert normalize(toks, remove_stopwords=False, stem=False) == toks


def test_normalize_stems():
    assert normalize(["running", "dogs"], remove_stopwords=False) == ["run", "dog"]


# -- stemmer: classic pairs traced through the five-step rules ---------------

STEM_PAIRS = {
    # plurals
    "caresses": "caress", "ponies": "poni", "ties": "ti", "caress": "caress",
    "cats": "cat",
    # -ed / -ing
    "feed": "feed", "agreed": "agre", "plastered": "plaster", "bled": "bled",
    "motoring": "motor", "sing": "sing", "conflated": "conflat",
    "troubled": "troubl", "sized": "size", "hopping": "hop", "tanned": "tan",
    "falling": "fall", "hissing": "hiss", "failing": "fail", "filing": "file",
    # y -> i
    "happy": "happi", "sky": "sky",
    # double-suffix rewrites
    "relational": "relat", "conditional": "condit", "rational": "ration",
    "digitizer": "digit", "operator": "oper", "feudalism": "feudal",
    "decisiveness": "decis", "hopefulness": "hope", "formaliti": "formal",
    # -ic / -ful / -ness family
    "formalize": "formal", "electrical": "electr", "hopeful": "hope",
    "goodness": "good",
    # derivational drops at high measure
    "revival": "reviv", "allowance": "allow", "inference": "infer",
    "airliner": "airlin", "adjustable": "adjust", "defensible": "defens",
    "irritant": "irrit", "replacement": "replac", "adjustment": "adjust",
    "dependent": "depend", "adoption": "adopt", "communism": "commun",
    "activate": "activ", "angulariti": "angular", "homologous": "homolog",
    "effective": "effect", "bowdlerize": "bowdler",
    # final e and double l
    "probate": "probat", "rate": "rate", "cease": "ceas",
    "controll": "control", "roll": "roll",
}


@pytest.mark.parametrize("word,stem", sorted(STEM_PAIRS.items()))
def test_porter_classic_pairs(word, stem):
    assert porter_stem(word) == stem


def test_porter_short_words_untouched():
    assert porter_stem("a") == "a"
    assert porter_stem("is") == "is"


@settings(max_examples=100, deadline=None)
@given(st.text(alphabet="abcdefghijklmnopqrstuvwxyz", min_size=1, max_size=12))
def test_porter_idempotent_output_nonempty(word):
    out = porter_stem(word)
    assert out
    assert len(out) <= len(word)


# -- vocabulary ---------------------------------------------------------------

def test_build_vocab_order_frequency_then_lexicographic():
    seqs = [["b", "a", "b"], ["c", "a", "b"]]
    vocab = build_vocab(seqs)
    # b appears 3x, a 2x, c 1x
    assert vocab.index_to_token == ("<pad>", "<oov>", "b", "a", "c")
    assert vocab.index("b") == 2
    assert vocab.index("zzz") == OOV_INDEX


def test_build_vocab_ties_break_lexicographic():
    vocab = build_vocab([["pear", "apple"]])
    assert vocab.index_to_token[2:] == ("apple", "pear")


def test_build_vocab_min_count():
    vocab = build_vocab([["a", "a", "b"]], min_count=2)
    assert vocab.index("a") == 2
    assert vocab.index("b") == OOV_INDEX
    with pytest.raises(ValueError):
        build_vocab([], min_count=0)


def test_vocab_round_trip_and_hash(tmp_path):
    vocab = build_vocab([["x", "y", "x"]])
    path = tmp_path / "vocab.txt"
    vocab.save(path)
    loaded = Vocabulary.load(path)
    assert loaded.index_to_token == vocab.index_to_token
    assert loaded.sha256() == vocab.sha256()
    assert loaded.index("x") == vocab.index("x")


def test_vocab_hash_changes_with_content():
    a = build_vocab([["x"]])
    b = build_vocab([["y"]])
    assert a.sha256() != b.sha256()


def test_vocab_from_text_rejects_out_of_order():
    with pytest.raises(ValueError):
        Vocabulary.from_text("<pad>\t0\n<oov>\t1\nword\t5\n")


def test_reserved_indices():
    vocab = build_vocab([["tok"]])
    assert PAD_INDEX == 0 and OOV_INDEX == 1
    assert vocab.index_to_token[0] == "<pad>"
    assert vocab.index_to_token[1] == "<oov>"
    # reserved names never map back to reserved slots via lookup
    assert vocab.index("<pad>") == OOV_INDEX


# -- encoding ------------------------------------------------------------------

def test_encode_pads_and_truncates():
    vocab = build_vocab([["a", "b"]])
    enc = encode(["a", "zzz"], vocab, max_len=4)
    assert enc.indices.tolist() == [vocab.index("a"), OOV_INDEX, PAD_INDEX, PAD_INDEX]
    assert enc.true_length == 2

    enc = encode(["a", "b", "a"], vocab, max_len=2)
    assert enc.indices.tolist() == [vocab.index("a"), vocab.index("b")]
    assert enc.true_length == 2


def test_encode_empty_tokens_all_pad():
    vocab = build_vocab([["a"]])
    enc = encode([], vocab, max_len=3)
    assert enc.indices.tolist() == [0, 0, 0]
    assert enc.true_length == 0


def test_encode_rejects_bad_max_len():
    vocab = build_vocab([["a"]])
    with pytest.raises(ValueError):
        encode(["a"], vocab, max_len=0)


def test_encode_dtype_int64():
    vocab = build_vocab([["a"]])
    assert encode(["a"], vocab, 2).indices.dtype == np.int64


def test_preprocess_pipeline():
    # stop words go first, then stemming
    assert preprocess("The cats are running") == ["cat", "run"]


def test_encode_text_matches_manual_path():
    vocab = build_vocab([preprocess("the cats are running fast")])
    manual = encode(preprocess("cats running"), vocab, 5)
    auto = encode_text("cats running", vocab, 5)
    assert auto.indices.tolist() == manual.indices.tolist()
    assert auto.true_length == manual.true_length
