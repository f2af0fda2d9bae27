import collections

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from afeng.corpus import (
    LabeledSentence,
    class_histogram,
    consolidate_and_balance,
    corpus_to_tsv,
    load_corpus,
    save_corpus,
    split,
    synthetic_corpus,
)
from afeng.errors import (
    EmptyText,
    InvalidFraction,
    MalformedRow,
    MissingClass,
    UnknownLabel,
)
from afeng.labels import EMOTION_ORDER, EmotionLabel


def _rows(counts):
    rows = []
    for label, n in counts.items():
        for i in range(n):
            rows.append(LabeledSentence(f"{label.canonical_name} sample {i}", label, "t"))
    return rows


def test_save_load_round_trip(tmp_path):
    rows = _rows({label: 3 for label in EMOTION_ORDER})
    path = tmp_path / "corpus.tsv"
    assert save_corpus(path, rows) == 24
    loaded = load_corpus(path)
    assert loaded == rows


def test_save_collapses_tabs_and_newlines(tmp_path):
    path = tmp_path / "c.tsv"
    save_corpus(path, [LabeledSentence("a\tb\nc", EmotionLabel.JOY, "s")])
    assert load_corpus(path)[0].text == "a b c"


def test_load_label_case_insensitive(tmp_path):
    path = tmp_path / "c.tsv"
    path.write_text("text\tlabel\tsource\nhello there\tjOy\tx\n", encoding="utf-8")
    assert load_corpus(path)[0].label is EmotionLabel.JOY


def test_load_unknown_label_carries_row_and_value(tmp_path):
    path = tmp_path / "c.tsv"
    path.write_text(
        "text\tlabel\tsource\nfine\tJoy\tx\nbad\tBoredom\tx\n", encoding="utf-8"
    )
    with pytest.raises(UnknownLabel) as exc:
        load_corpus(path)
    assert exc.value.row == 2
    assert exc.value.value == "Boredom"


def test_load_empty_text_rejected(tmp_path):
    path = tmp_path / "c.tsv"
    path.write_text("text\tlabel\tsource\n   \tJoy\tx\n", encoding="utf-8")
    with pytest.raises(EmptyText):
        load_corpus(path)


def test_load_bad_header_rejected(tmp_path):
    path = tmp_path / "c.tsv"
    path.write_text("words\tclass\na\tJoy\n", encoding="utf-8")
    with pytest.raises(MalformedRow):
        load_corpus(path)


def test_load_extra_columns_rejected(tmp_path):
    path = tmp_path / "c.tsv"
    path.write_text("text\tlabel\tsource\na\tJoy\tx\tspill\n", encoding="utf-8")
    with pytest.raises(MalformedRow) as exc:
        load_corpus(path)
    assert exc.value.row == 1


def test_load_empty_file(tmp_path):
    path = tmp_path / "c.tsv"
    path.write_text("", encoding="utf-8")
    assert load_corpus(path) == []


def test_load_csv_variant(tmp_path):
    path = tmp_path / "c.csv"
    path.write_text(
        'text,label,source\n"hello, world",Fear,web\n', encoding="utf-8"
    )
    rows = load_corpus(path, fmt="csv")
    assert rows == [LabeledSentence("hello, world", EmotionLabel.FEAR, "web")]


def test_load_missing_source_falls_back_to_stem(tmp_path):
    path = tmp_path / "mystream.tsv"
    path.write_text("text\tlabel\nsome line\tAnger\n", encoding="utf-8")
    assert load_corpus(path)[0].source_id == "mystream"


def test_class_histogram():
    rows = _rows({EmotionLabel.JOY: 2, EmotionLabel.FEAR: 5})
    hist = class_histogram(rows)
    assert hist[EmotionLabel.JOY] == 2
    assert hist[EmotionLabel.FEAR] == 5
    assert hist[EmotionLabel.TRUST] == 0
    assert len(hist) == 8


def test_balance_downsamples_to_smallest():
    counts = {label: 4 + int(label) for label in EMOTION_ORDER}
    balanced = consolidate_and_balance([_rows(counts)], seed=1)
    hist = class_histogram(balanced)
    assert all(n == 4 for n in hist.values())


def test_balance_respects_per_class_cap():
    counts = {label: 6 for label in EMOTION_ORDER}
    balanced = consolidate_and_balance([_rows(counts)], per_class=2, seed=1)
    assert all(n == 2 for n in class_histogram(balanced).values())


def test_balance_missing_class_raises():
    counts = {label: 3 for label in EMOTION_ORDER if label != EmotionLabel.TRUST}
    with pytest.raises(MissingClass):
        consolidate_and_balance([_rows(counts)], seed=1)


def test_balance_deterministic_and_seed_sensitive():
    counts = {label: 10 for label in EMOTION_ORDER}
    rows = _rows(counts)
    a = consolidate_and_balance([rows], per_class=4, seed=5)
    b = consolidate_and_balance([rows], per_class=4, seed=5)
    c = consolidate_and_balance([rows], per_class=4, seed=6)
    assert a == b
    assert a != c


def test_balance_merges_sources():
    half1 = _rows({label: 2 for label in EMOTION_ORDER})
    half2 = _rows({label: 1 for label in EMOTION_ORDER})
    merged = consolidate_and_balance([half1, half2], seed=0)
    assert all(n == 3 for n in class_histogram(merged).values())


def test_split_sizes_and_partition():
    corpus = _rows({label: 25 for label in EMOTION_ORDER})
    sp = split(corpus, seed=3, test_fraction=0.2)
    n = len(corpus)
    assert len(sp.test) == round(0.2 * n)
    pool = n - len(sp.test)
    assert len(sp.validation) == round(0.02 * pool)
    assert len(sp.train) + len(sp.validation) + len(sp.test) == n
    # partition: every row lands in exactly one part
    key = lambda r: (r.text, int(r.label))
    combined = collections.Counter(map(key, sp.train))
    combined.update(map(key, sp.validation))
    combined.update(map(key, sp.test))
    assert combined == collections.Counter(map(key, corpus))


def test_split_stratified_within_one():
    counts = {label: 11 + 3 * int(label) for label in EMOTION_ORDER}
    corpus = _rows(counts)
    sp = split(corpus, seed=9, test_fraction=0.25)
    test_hist = class_histogram(sp.test)
    for label in EMOTION_ORDER:
        share = 0.25 * counts[label]
        assert abs(test_hist[label] - share) <= 1.0


def test_split_deterministic():
    corpus = _rows({label: 12 for label in EMOTION_ORDER})
    a = split(corpus, seed=7, test_fraction=0.2)
    b = split(corpus, seed=7, test_fraction=0.2)
    assert a == b
    c = split(corpus, seed=8, test_fraction=0.2)
    assert c.test != a.test


def test_split_invalid_fractions():
    corpus = _rows({label: 5 for label in EMOTION_ORDER})
    with pytest.raises(InvalidFraction):
        split(corpus, seed=0, test_fraction=-0.1)
    with pytest.raises(InvalidFraction):
        split(corpus, seed=0, test_fraction=1.0)
    with pytest.raises(InvalidFraction):
        split(corpus, seed=0, test_fraction=0.6, validation_fraction=0.5)
    with pytest.raises(InvalidFraction):
        split([], seed=0, test_fraction=0.2)


@settings(max_examples=25, deadline=None)
@given(
    sizes=st.lists(st.integers(min_value=1, max_value=12), min_size=8, max_size=8),
    seed=st.integers(min_value=0, max_value=2**31 - 1),
    frac=st.floats(min_value=0.0, max_value=0.4),
)
def test_split_partition_property(sizes, seed, frac):
    corpus = _rows(dict(zip(EMOTION_ORDER, sizes)))
    sp = split(corpus, seed=seed, test_fraction=frac)
    key = lambda r: (r.text, int(r.label))
    combined = collections.Counter(map(key, sp.train))
    combined.update(map(key, sp.validation))
    combined.update(map(key, sp.test))
    assert combined == collections.Counter(map(key, corpus))
    assert len(sp.test) == round(frac * len(corpus))


def test_synthetic_corpus_shape():
    rows = synthetic_corpus()
    assert len(rows) == 160
    hist = class_histogram(rows)
    assert all(n == 20 for n in hist.values())
    assert len({r.text for r in rows}) == 160
    assert all(r.source_id == "synthetic" for r in rows)


def test_synthetic_corpus_deterministic():
    assert synthetic_corpus(seed=0) == synthetic_corpus(seed=0)
    assert synthetic_corpus(seed=1) != synthetic_corpus(seed=0)


def test_synthetic_corpus_per_class_limit():
    assert len(synthetic_corpus(per_class=40)) == 320
    with pytest.raises(Exception):
        synthetic_corpus(per_class=41)


def test_corpus_to_tsv_matches_save(tmp_path):
    rows = _rows({label: 2 for label in EMOTION_ORDER})
    path = tmp_path / "c.tsv"
    save_corpus(path, rows)
    assert path.read_text(encoding="utf-8") == corpus_to_tsv(rows)


def test_labeled_sentence_rejects_blank():
    with pytest.raises(EmptyText):
        LabeledSentence("   ", EmotionLabel.JOY)
