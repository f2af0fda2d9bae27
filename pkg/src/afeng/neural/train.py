"""Mini-batch trainer: seeded shuffling, Adadelta, weight clipping, history."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from afeng.corpus import CorpusSplit, LabeledSentence
from afeng.neural.adadelta import AdadeltaState, adadelta_step, clip_l2
from afeng.neural.model import CnnLstmModel, backward, forward_batch
from afeng.textprep import Vocabulary, encode_text

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EpochStats:
    epoch: int
    loss: float
    val_accuracy: float


@dataclass
class EncodedDataset:
    x: np.ndarray
    y: np.ndarray

    def __len__(self) -> int:
        return len(self.y)


@dataclass
class EncodedSplit:
    train: EncodedDataset
    validation: EncodedDataset
    test: EncodedDataset

    @classmethod
    def from_corpus(
        cls, split: CorpusSplit, vocab: Vocabulary, max_len: int
    ) -> "EncodedSplit":
        return cls(
            train=encode_dataset(split.train, vocab, max_len),
            validation=encode_dataset(split.validation, vocab, max_len),
            test=encode_dataset(split.test, vocab, max_len),
        )


def encode_dataset(
    sentences: Sequence[LabeledSentence], vocab: Vocabulary, max_len: int
) -> EncodedDataset:
    if not sentences:
        return EncodedDataset(
            x=np.zeros((0, max_len), dtype=np.int64), y=np.zeros(0, dtype=np.int64)
        )
    x = np.stack([encode_text(s.text, vocab, max_len).indices for s in sentences])
    y = np.array([int(s.label) for s in sentences], dtype=np.int64)
    return EncodedDataset(x=x, y=y)


@dataclass(frozen=True)
class TrainConfig:
    seed: int = 0
    epochs: Optional[int] = None
    batch_size: Optional[int] = None
    max_norm: float = 3.0
    patience: Optional[int] = None
    log_every: int = 0


def predict_batch(model: CnnLstmModel, x: np.ndarray, chunk: int = 256) -> np.ndarray:
    """Inference probabilities, chunked to bound peak memory."""
    parts = [
        forward_batch(model, x[i:i + chunk]) for i in range(0, len(x), chunk)
    ]
    if not parts:
        return np.zeros((0, model.config.num_classes))
    return np.concatenate(parts, axis=0)


def accuracy(model: CnnLstmModel, data: EncodedDataset) -> float:
    if len(data) == 0:
        return float("nan")
    probs = predict_batch(model, data.x)
    return float((probs.argmax(axis=1) == data.y).mean())


def train(
    model: CnnLstmModel,
    split: EncodedSplit,
    config: TrainConfig = TrainConfig(),
) -> tuple[CnnLstmModel, list]:
    """Train in place; returns the model and the per-epoch history."""
    model.validate_shapes()
    epochs = config.epochs if config.epochs is not None else model.config.epochs
    batch_size = (
        config.batch_size if config.batch_size is not None else model.config.batch_size
    )
    rng = np.random.default_rng(config.seed)
    trainable = {
        name: arr
        for name, arr in model.params.items()
        if name != "embedding/static"
    }
    state = AdadeltaState.for_params(trainable)

    n = len(split.train)
    if n == 0:
        raise ValueError("training split is empty")
    history: list = []
    best_val = -np.inf
    stale = 0
    for epoch in range(1, epochs + 1):
        perm = rng.permutation(n)
        loss_sum = 0.0
        for start in range(0, n, batch_size):
            batch = perm[start:start + batch_size]
            grads, loss = backward(
                model, split.train.x[batch], split.train.y[batch], rng
            )
            grads.pop("embedding/static", None)
            adadelta_step(model.params, grads, state)
            clip_l2(model.params["dense/weight"], config.max_norm)
            clip_l2(model.params["output/weight"], config.max_norm)
            loss_sum += loss * len(batch)
        epoch_loss = loss_sum / n
        val_acc = accuracy(model, split.validation)
        history.append(EpochStats(epoch=epoch, loss=epoch_loss, val_accuracy=val_acc))
        if config.log_every and epoch % config.log_every == 0:
            logger.info(
                "epoch %d loss %.6f val_accuracy %.4f", epoch, epoch_loss, val_acc
            )
        if config.patience is not None and not np.isnan(val_acc):
            if val_acc > best_val:
                best_val = val_acc
                stale = 0
            else:
                stale += 1
                if stale >= config.patience:
                    break
    return model, history


def history_to_csv(history: Sequence[EpochStats], seed: int) -> str:
    lines = [f"# seed={seed}", "epoch,loss,val_accuracy"]
    for row in history:
        lines.append(f"{row.epoch},{row.loss!r},{row.val_accuracy!r}")
    return "\n".join(lines) + "\n"
