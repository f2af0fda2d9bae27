"""End-to-end wiring: text -> emotion -> appraisal -> behaviors -> BML -> memory.

Also hosts the artifact-producing flows (train, evaluate, compare) shared
by the CLI so they stay deterministic and testable without a terminal.
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Callable, Optional, Sequence

import numpy as np

from afeng import affect, bml, evaluation
from afeng.affect import AppraisalResult, BehaviorSet, EmotionDistribution
from afeng.baselines import GRID, comparison_to_csv, comparison_to_text, run_comparison
from afeng.corpus import CorpusSplit, LabeledSentence, load_corpus
from afeng.embeddings import build_matrix, load_vectors
from afeng.errors import EmptyText, TooLong
from afeng.labels import EMOTION_NAMES
from afeng.memory import InteractionRecord, LongTermStore, SessionBuffer, record
from afeng.neural import (
    CnnLstmModel,
    ModelConfig,
    TrainConfig,
    forward,
    load_checkpoint,
    save_checkpoint,
    train,
)
from afeng.neural.checkpoint import load_checkpoint_meta
from afeng.neural.train import EncodedSplit, accuracy, history_to_csv, predict_batch
from afeng.textprep import Vocabulary, build_vocab, encode_text, preprocess

TEXT_LIMIT = 1000


def utc_clock() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass(frozen=True)
class InteractResult:
    text: str
    distribution: EmotionDistribution
    appraisal: AppraisalResult
    behaviors: BehaviorSet
    bml_xml: str
    record_id: int
    timestamp: str

    def to_payload(self) -> dict:
        return {
            "text": self.text,
            "distribution": self.distribution.as_mapping(),
            "dominant": self.appraisal.dominant.canonical_name,
            "intensity": self.appraisal.intensity,
            "valence": self.appraisal.valence.value,
            "agent_emotion": self.appraisal.agent_emotion,
            "event_goal": self.appraisal.event_goal,
            "behaviors": {
                "goal": self.behaviors.goal_behavior,
                "self": self.behaviors.self_behavior,
                "other": self.behaviors.other_behavior,
            },
            "bml": self.bml_xml,
            "record_id": self.record_id,
            "timestamp": self.timestamp,
        }


class EmotionBehaviorEngine:
    """Owns a trained model plus memory and runs the interaction loop."""

    def __init__(
        self,
        model: CnnLstmModel,
        vocab: Vocabulary,
        store: Optional[LongTermStore] = None,
        buffer: Optional[SessionBuffer] = None,
        clock: Callable[[], str] = utc_clock,
        blend_lambda: float = 0.0,
        blend_window: int = 5,
        text_limit: int = TEXT_LIMIT,
        checkpoint_sha256: str = "",
        seed: Optional[int] = None,
    ):
        self.model = model
        self.vocab = vocab
        self.store = store
        self.buffer = buffer if buffer is not None else SessionBuffer()
        self.clock = clock
        self.blend_lambda = blend_lambda
        self.blend_window = blend_window
        self.text_limit = text_limit
        self.checkpoint_sha256 = checkpoint_sha256
        self.seed = seed

    @classmethod
    def load(
        cls,
        checkpoint_path,
        vocab_path,
        log_path=None,
        clock: Callable[[], str] = utc_clock,
        blend_lambda: float = 0.0,
    ) -> "EmotionBehaviorEngine":
        model = load_checkpoint(checkpoint_path)
        meta = load_checkpoint_meta(checkpoint_path)
        vocab = Vocabulary.load(vocab_path)
        with open(checkpoint_path, "rb") as fh:
            digest = hashlib.sha256(fh.read()).hexdigest()
        store = LongTermStore(log_path) if log_path else None
        buffer = store.load_buffer() if store else SessionBuffer()
        return cls(
            model=model,
            vocab=vocab,
            store=store,
            buffer=buffer,
            clock=clock,
            blend_lambda=blend_lambda,
            checkpoint_sha256=digest,
            seed=meta.get("seed"),
        )

    def classify(self, text: str) -> EmotionDistribution:
        encoded = encode_text(text, self.vocab, self.model.config.max_len)
        probs = forward(self.model, encoded)
        return EmotionDistribution(probs=probs)

    def interact(self, text: str) -> InteractResult:
        if text is None or not text.strip():
            raise EmptyText()
        if len(text) > self.text_limit:
            raise TooLong(len(text), self.text_limit)

        dist = self.classify(text)
        if self.blend_lambda > 0.0:
            history = [
                rec.distribution for rec in self.buffer.recent(self.blend_window)
            ]
            dist = affect.blend_with_memory(dist, history, self.blend_lambda)
        appraisal = affect.appraise(dist)
        behaviors = affect.derive_behaviors(appraisal.dominant)

        rec_id = self.store.next_id() if self.store else self._next_buffer_id()
        doc = bml.compose(appraisal, behaviors, doc_id=f"bml-{rec_id}")
        xml = bml.serialize(doc)
        rec = InteractionRecord(
            id=rec_id,
            timestamp=self.clock(),
            text=text,
            distribution=dist,
            appraisal=appraisal,
            behaviors=behaviors,
            bml_id=doc.id,
        )
        record(self.store, self.buffer, rec)
        return InteractResult(
            text=text,
            distribution=dist,
            appraisal=appraisal,
            behaviors=behaviors,
            bml_xml=xml,
            record_id=rec_id,
            timestamp=rec.timestamp,
        )

    def _next_buffer_id(self) -> int:
        return self.buffer.records[0].id + 1 if self.buffer.records else 1

    def history(self, n: int) -> list:
        return self.buffer.recent(n)

    def model_info(self) -> dict:
        return {
            "checkpoint_sha256": self.checkpoint_sha256,
            "hyperparameters": self.model.config.to_dict(),
            "emotion_order": list(EMOTION_NAMES),
            "vocab_size": self.vocab.size,
            "seed": self.seed,
        }


# -- artifact flows -------------------------------------------------------------

def build_vocab_from_split(split: CorpusSplit, min_count: int = 1) -> Vocabulary:
    token_seqs = [preprocess(s.text) for s in split.train]
    return build_vocab(token_seqs, min_count=min_count)


@dataclass(frozen=True)
class TrainingArtifacts:
    checkpoint_path: str
    history_path: str
    vocab_path: str
    final_train_accuracy: float


def run_training(
    split: CorpusSplit,
    model_config: ModelConfig,
    train_config: TrainConfig,
    out_dir,
    embedding_path=None,
    embedding_seed: int = 0,
) -> TrainingArtifacts:
    """Build vocab, train the classifier, and write the three artifacts."""
    os.makedirs(out_dir, exist_ok=True)
    vocab = build_vocab_from_split(split)
    if model_config.vocab_size != vocab.size:
        model_config = ModelConfig.from_dict(
            {**model_config.to_dict(), "vocab_size": vocab.size}
        )
    embedding = None
    if embedding_path is not None:
        vectors = load_vectors(
            embedding_path, expected_dim=model_config.embedding_dim, vocab=vocab
        )
        matrix = build_matrix(
            vocab, vectors, model_config.embedding_dim, seed=embedding_seed
        )
        embedding = matrix.values

    model = CnnLstmModel.initialize(model_config, seed=train_config.seed, embedding=embedding)
    encoded = EncodedSplit.from_corpus(split, vocab, model_config.max_len)
    model, history = train(model, encoded, train_config)

    vocab_path = os.path.join(out_dir, "vocab.txt")
    vocab.save(vocab_path)
    checkpoint_path = os.path.join(out_dir, "model.ckpt")
    save_checkpoint(
        model, checkpoint_path, seed=train_config.seed, vocab_sha256=vocab.sha256()
    )
    history_path = os.path.join(out_dir, "history.csv")
    with open(history_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(history_to_csv(history, seed=train_config.seed))
    return TrainingArtifacts(
        checkpoint_path=checkpoint_path,
        history_path=history_path,
        vocab_path=vocab_path,
        final_train_accuracy=accuracy(model, encoded.train),
    )


@dataclass(frozen=True)
class EvaluationArtifacts:
    report: evaluation.ClassificationReport
    confusion: evaluation.ConfusionMatrix
    report_text: str


def run_evaluation(
    checkpoint_path,
    vocab_path,
    sentences: Sequence[LabeledSentence],
    out_dir=None,
) -> EvaluationArtifacts:
    model = load_checkpoint(checkpoint_path)
    vocab = Vocabulary.load(vocab_path)
    x = np.stack(
        [encode_text(s.text, vocab, model.config.max_len).indices for s in sentences]
    )
    y = [int(s.label) for s in sentences]
    predicted = predict_batch(model, x).argmax(axis=1)
    cm = evaluation.confusion(y, predicted)
    rep = evaluation.report(cm)
    text = evaluation.report_to_text(rep)
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        with open(os.path.join(out_dir, "report.csv"), "w", encoding="utf-8", newline="") as fh:
            fh.write(evaluation.report_to_csv(rep))
        with open(os.path.join(out_dir, "report.txt"), "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        with open(os.path.join(out_dir, "confusion.csv"), "w", encoding="utf-8", newline="") as fh:
            fh.write(evaluation.confusion_to_csv(cm))
    return EvaluationArtifacts(report=rep, confusion=cm, report_text=text)


def run_grid_comparison(
    split: CorpusSplit,
    checkpoint_path=None,
    vocab_path=None,
    seed: int = 0,
    out_dir=None,
    grid: tuple = GRID,
) -> list:
    """Baseline grid on the split, plus the CNN-LSTM row when a model is given."""
    train_docs = [preprocess(s.text) for s in split.train]
    train_labels = [int(s.label) for s in split.train]
    test_docs = [preprocess(s.text) for s in split.test]
    test_labels = [int(s.label) for s in split.test]

    cnn_precision = None
    cnn_label = "Word Vectors"
    if checkpoint_path is not None and vocab_path is not None:
        arts = run_evaluation(checkpoint_path, vocab_path, split.test)
        cnn_precision = arts.report.macro_precision
    rows = run_comparison(
        train_docs,
        train_labels,
        test_docs,
        test_labels,
        grid=grid,
        seed=seed,
        cnn_precision=cnn_precision,
        cnn_vectorizer_label=cnn_label,
    )
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        with open(os.path.join(out_dir, "comparison.csv"), "w", encoding="utf-8", newline="") as fh:
            fh.write(comparison_to_csv(rows))
        with open(os.path.join(out_dir, "comparison.txt"), "w", encoding="utf-8", newline="") as fh:
            fh.write(comparison_to_text(rows))
    return rows


def load_split_dir(split_dir) -> CorpusSplit:
    """Read the train/validation/test TSVs written by the ingest flow."""
    def read(name: str):
        path = os.path.join(split_dir, f"{name}.tsv")
        return tuple(load_corpus(path)) if os.path.exists(path) else ()

    return CorpusSplit(train=read("train"), validation=read("validation"), test=read("test"))
