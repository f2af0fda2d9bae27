"""Shared fixtures.

The expensive trained-model fixtures are session-scoped so the acceptance
tests and the service tests reuse one training run.
"""

import time

import numpy as np
import pytest

from afeng.corpus import split, synthetic_corpus
from afeng.neural import CnnLstmModel, ModelConfig, TrainConfig, train
from afeng.neural.train import EncodedSplit
from afeng.pipeline import build_vocab_from_split

# config small enough for finite-difference checks but exercising every layer
TINY = dict(
    vocab_size=14,
    embedding_dim=6,
    filter_widths=(2, 3),
    filters_per_width=3,
    pool_size=4,
    hidden_size=5,
    dense_size=4,
    num_classes=8,
    max_len=7,
    dropout_rate=0.0,
)

# frozen configuration for the synthetic-corpus learning runs
SYNTH_MODEL = dict(
    embedding_dim=24,
    filter_widths=(2, 3),
    filters_per_width=12,
    hidden_size=24,
    dense_size=24,
    max_len=10,
    dropout_rate=0.5,
    epochs=300,
    batch_size=32,
)
SYNTH_SPLIT_SEED = 42
SYNTH_TRAIN_SEED = 42


@pytest.fixture
def tiny_config():
    return ModelConfig(**TINY)


@pytest.fixture
def tiny_model(tiny_config):
    return CnnLstmModel.initialize(tiny_config, seed=0)


@pytest.fixture(scope="session")
def synthetic_split():
    corpus = synthetic_corpus(per_class=20, seed=0)
    return split(corpus, seed=SYNTH_SPLIT_SEED, test_fraction=0.2)


@pytest.fixture(scope="session")
def synthetic_vocab(synthetic_split):
    return build_vocab_from_split(synthetic_split)


@pytest.fixture(scope="session")
def synthetic_encoded(synthetic_split, synthetic_vocab):
    cfg = ModelConfig(vocab_size=synthetic_vocab.size, **SYNTH_MODEL)
    return cfg, EncodedSplit.from_corpus(synthetic_split, synthetic_vocab, cfg.max_len)


@pytest.fixture(scope="session")
def trained_synthetic(synthetic_encoded):
    """Model trained once on the synthetic corpus, with history and wall time."""
    cfg, enc = synthetic_encoded
    model = CnnLstmModel.initialize(cfg, seed=SYNTH_TRAIN_SEED)
    started = time.monotonic()
    model, history = train(model, enc, TrainConfig(seed=SYNTH_TRAIN_SEED))
    return model, history, time.monotonic() - started


def rand_indices(rng: np.random.Generator, batch: int, max_len: int, vocab: int):
    """Index batches that avoid pad so every position is active."""
    return rng.integers(1, vocab, size=(batch, max_len))
