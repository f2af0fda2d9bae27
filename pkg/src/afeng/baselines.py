"""Classical vectorizer x classifier grid for the comparison table.

Vectorizers produce sparse vectors over token features; classifiers are
one-vs-rest SGD linear models (log loss or hinge) and a small MLP. All
training is seeded and deterministic.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from afeng.errors import MissingClass, NotFitted
from afeng.labels import NUM_EMOTIONS, EmotionLabel

HASHING_DIM = 2 ** 18


@dataclass(frozen=True)
class SparseVector:
    indices: np.ndarray
    values: np.ndarray
    dim: int

    def __post_init__(self):
        object.__setattr__(self, "indices", np.asarray(self.indices, dtype=np.int64))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))
        if len(self.indices) != len(self.values):
            raise ValueError("indices and values must be the same length")
        if len(self.indices) > 0:
            if (np.diff(self.indices) <= 0).any():
                raise ValueError("indices must be strictly ascending")
            if self.indices[0] < 0 or self.indices[-1] >= self.dim:
                raise ValueError("index outside feature space")
            if (self.values == 0.0).any():
                raise ValueError("stored values must be non-zero")

    def l2_normalized(self) -> "SparseVector":
        norm = math.sqrt(float(self.values @ self.values))
        if norm == 0.0:
            return self
        return SparseVector(self.indices, self.values / norm, self.dim)

    def to_dense(self) -> np.ndarray:
        dense = np.zeros(self.dim)
        dense[self.indices] = self.values
        return dense


def _counts(tokens: Sequence[str]) -> Counter:
    return Counter(tokens)


class BowVectorizer:
    """Raw token counts over a vocabulary fixed at fit time."""

    def __init__(self):
        self.feature_ids: Optional[dict] = None

    def fit(self, documents: Sequence[Sequence[str]]) -> "BowVectorizer":
        seen = sorted({tok for doc in documents for tok in doc})
        self.feature_ids = {tok: i for i, tok in enumerate(seen)}
        return self

    @property
    def dim(self) -> int:
        if self.feature_ids is None:
            raise NotFitted("vectorizer used before fit")
        return max(len(self.feature_ids), 1)

    def transform(self, tokens: Sequence[str]) -> SparseVector:
        if self.feature_ids is None:
            raise NotFitted("vectorizer used before fit")
        counts = _counts(tokens)
        pairs = sorted(
            (self.feature_ids[tok], float(c))
            for tok, c in counts.items()
            if tok in self.feature_ids
        )
        idx = np.array([p[0] for p in pairs], dtype=np.int64)
        vals = np.array([p[1] for p in pairs], dtype=np.float64)
        return SparseVector(idx, vals, self.dim)


class TfidfVectorizer:
    """Counts scaled by smoothed inverse document frequency, l2-normalized."""

    def __init__(self):
        self.feature_ids: Optional[dict] = None
        self.idf: Optional[np.ndarray] = None

    def fit(self, documents: Sequence[Sequence[str]]) -> "TfidfVectorizer":
        seen = sorted({tok for doc in documents for tok in doc})
        self.feature_ids = {tok: i for i, tok in enumerate(seen)}
        df = np.zeros(max(len(seen), 1))
        for doc in documents:
            for tok in set(doc):
                df[self.feature_ids[tok]] += 1
        n = len(documents)
        self.idf = np.log((1.0 + n) / (1.0 + df)) + 1.0
        return self

    @property
    def dim(self) -> int:
        if self.feature_ids is None:
            raise NotFitted("vectorizer used before fit")
        return max(len(self.feature_ids), 1)

    def transform(self, tokens: Sequence[str]) -> SparseVector:
        if self.feature_ids is None or self.idf is None:
            raise NotFitted("vectorizer used before fit")
        counts = _counts(tokens)
        pairs = sorted(
            (self.feature_ids[tok], float(c))
            for tok, c in counts.items()
            if tok in self.feature_ids
        )
        idx = np.array([p[0] for p in pairs], dtype=np.int64)
        vals = np.array([p[1] for p in pairs], dtype=np.float64)
        vals = vals * self.idf[idx] if len(idx) else vals
        return SparseVector(idx, vals, self.dim).l2_normalized()


def fnv1a64(data: bytes) -> int:
    """64-bit FNV-1a hash; process-stable by construction."""
    h = 0xCBF29CE484222325
    for byte in data:
        h ^= byte
        h = (h * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return h


class HashingVectorizer:
    """Stateless signed feature hashing into 2^18 buckets, l2-normalized."""

    def __init__(self, dim: int = HASHING_DIM):
        self.dim = dim

    def fit(self, documents) -> "HashingVectorizer":
        return self

    def transform(self, tokens: Sequence[str]) -> SparseVector:
        accum: dict = {}
        for tok in tokens:
            h = fnv1a64(tok.encode("utf-8"))
            sign = 1.0 if (h >> 63) & 1 == 0 else -1.0
            bucket = h % self.dim
            accum[bucket] = accum.get(bucket, 0.0) + sign
        pairs = sorted((b, v) for b, v in accum.items() if v != 0.0)
        idx = np.array([p[0] for p in pairs], dtype=np.int64)
        vals = np.array([p[1] for p in pairs], dtype=np.float64)
        return SparseVector(idx, vals, self.dim).l2_normalized()


VECTORIZERS = {
    "bow": BowVectorizer,
    "tfidf": TfidfVectorizer,
    "hashing": HashingVectorizer,
}


def vectorize(tokens: Sequence[str], mode: str, state) -> SparseVector:
    if mode not in VECTORIZERS:
        raise ValueError(f"unknown vectorizer mode {mode!r}")
    return state.transform(tokens)


def _check_classes(labels: Sequence[int]) -> None:
    present = set(int(v) for v in labels)
    for label in EmotionLabel:
        if int(label) not in present:
            raise MissingClass(label.canonical_name)


# -- linear models -------------------------------------------------------------

@dataclass(frozen=True)
class LinearConfig:
    learning_rate: float = 0.1
    epochs: int = 20
    l2: float = 0.0
    seed: int = 0


@dataclass
class LinearModel:
    weights: np.ndarray
    bias: np.ndarray
    kind: str

    def scores(self, sv: SparseVector) -> np.ndarray:
        if len(sv.indices) == 0:
            return self.bias.copy()
        return self.weights[:, sv.indices] @ sv.values + self.bias

    def predict(self, sv: SparseVector) -> int:
        return int(np.argmax(self.scores(sv)))


def train_linear(
    features: Sequence[SparseVector],
    labels: Sequence[int],
    kind: str,
    config: LinearConfig = LinearConfig(),
) -> LinearModel:
    """One-vs-rest SGD; log loss for "logistic", hinge for "hinge"."""
    if kind not in ("logistic", "hinge"):
        raise ValueError(f"kind must be logistic or hinge, not {kind!r}")
    _check_classes(labels)
    dim = features[0].dim
    w = np.zeros((NUM_EMOTIONS, dim))
    b = np.zeros(NUM_EMOTIONS)
    model = LinearModel(weights=w, bias=b, kind=kind)
    rng = np.random.default_rng(config.seed)
    y = np.asarray(labels, dtype=np.int64)
    lr = config.learning_rate
    for _ in range(config.epochs):
        order = rng.permutation(len(features))
        for i in order:
            sv = features[i]
            target = np.full(NUM_EMOTIONS, -1.0)
            target[y[i]] = 1.0
            s = model.scores(sv)
            if kind == "logistic":
                # d/ds log(1 + exp(-t*s)) = -t * sigmoid(-t*s)
                z = -target * s
                sig = np.where(
                    z >= 0, 1.0 / (1.0 + np.exp(-z)), np.exp(z) / (1.0 + np.exp(z))
                )
                grad = -target * sig
            else:
                active = (target * s) < 1.0
                grad = np.where(active, -target, 0.0)
            if config.l2 > 0.0:
                w *= 1.0 - lr * config.l2
            if len(sv.indices):
                w[:, sv.indices] -= lr * np.outer(grad, sv.values)
            b -= lr * grad
    return model


# -- MLP -------------------------------------------------------------------------

@dataclass(frozen=True)
class MlpConfig:
    hidden: int = 100
    learning_rate: float = 0.05
    epochs: int = 60
    seed: int = 0


@dataclass
class MlpModel:
    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray

    def logits(self, x: np.ndarray) -> np.ndarray:
        hidden = np.maximum(x @ self.w1 + self.b1, 0.0)
        return hidden @ self.w2 + self.b2

    def predict(self, sv: SparseVector) -> int:
        return int(np.argmax(self.logits(sv.to_dense()[None, :])[0]))


def mlp_gradients(
    model: MlpModel, x: np.ndarray, y: np.ndarray
) -> tuple[dict, float]:
    """Mean cross-entropy gradients for a dense batch; shared by train and tests."""
    n = len(x)
    pre = x @ model.w1 + model.b1
    hidden = np.maximum(pre, 0.0)
    logits = hidden @ model.w2 + model.b2
    shifted = logits - logits.max(axis=1, keepdims=True)
    log_z = np.log(np.exp(shifted).sum(axis=1))
    log_probs = shifted - log_z[:, None]
    loss = float(-log_probs[np.arange(n), y].mean())
    dlogits = np.exp(log_probs)
    dlogits[np.arange(n), y] -= 1.0
    dlogits /= n
    grads = {
        "w2": hidden.T @ dlogits,
        "b2": dlogits.sum(axis=0),
    }
    dhidden = dlogits @ model.w2.T
    dpre = dhidden * (pre > 0)
    grads["w1"] = x.T @ dpre
    grads["b1"] = dpre.sum(axis=0)
    return grads, loss


def train_mlp(
    features: Sequence[SparseVector],
    labels: Sequence[int],
    config: MlpConfig = MlpConfig(),
) -> MlpModel:
    _check_classes(labels)
    dim = features[0].dim
    rng = np.random.default_rng(config.seed)
    limit1 = math.sqrt(6.0 / (dim + config.hidden))
    limit2 = math.sqrt(6.0 / (config.hidden + NUM_EMOTIONS))
    model = MlpModel(
        w1=rng.uniform(-limit1, limit1, (dim, config.hidden)),
        b1=np.zeros(config.hidden),
        w2=rng.uniform(-limit2, limit2, (config.hidden, NUM_EMOTIONS)),
        b2=np.zeros(NUM_EMOTIONS),
    )
    x = np.stack([sv.to_dense() for sv in features])
    y = np.asarray(labels, dtype=np.int64)
    lr = config.learning_rate
    for _ in range(config.epochs):
        order = rng.permutation(len(x))
        for start in range(0, len(x), 32):
            batch = order[start:start + 32]
            grads, _ = mlp_gradients(model, x[batch], y[batch])
            model.w1 -= lr * grads["w1"]
            model.b1 -= lr * grads["b1"]
            model.w2 -= lr * grads["w2"]
            model.b2 -= lr * grads["b2"]
    return model


# -- the comparison grid ----------------------------------------------------------

GRID = (
    ("SGD Classifier", "Logistic Regression", "Bag-of-words"),
    ("SGD Classifier", "Logistic Regression", "Tf-idf"),
    ("SGD Classifier", "Logistic Regression", "Hashing"),
    ("MLP Classifier", "Logistic Regression", "Bag-of-words"),
    ("SGD Classifier", "Linear Model", "Bag-of-words"),
    ("Linear SVC", "SVM Model", "Bag-of-words"),
)

_VECTORIZER_MODES = {
    "Bag-of-words": "bow",
    "Tf-idf": "tfidf",
    "Hashing": "hashing",
}


@dataclass(frozen=True)
class ComparisonRow:
    classifier: str
    model: str
    vectorizer: str
    macro_precision: float


def _fit_vectorizer(mode: str, train_docs):
    vec = VECTORIZERS[mode]()
    vec.fit(train_docs)
    return vec


def _train_cell(classifier: str, model_name: str, train_x, train_y, seed: int):
    if classifier == "MLP Classifier":
        return train_mlp(train_x, train_y, MlpConfig(seed=seed))
    if classifier == "Linear SVC":
        cfg = LinearConfig(learning_rate=0.05, epochs=40, l2=1e-4, seed=seed)
        return train_linear(train_x, train_y, "hinge", cfg)
    kind = "logistic" if model_name == "Logistic Regression" else "hinge"
    return train_linear(train_x, train_y, kind, LinearConfig(seed=seed))


def run_comparison(
    train_docs: Sequence[Sequence[str]],
    train_labels: Sequence[int],
    test_docs: Sequence[Sequence[str]],
    test_labels: Sequence[int],
    grid: tuple = GRID,
    seed: int = 0,
    cnn_precision: Optional[float] = None,
    cnn_vectorizer_label: str = "Word Vectors",
) -> list:
    """Macro precision per grid cell on the held-out documents."""
    from afeng.evaluation import confusion, report

    rows = []
    vec_cache: dict = {}
    for classifier, model_name, vec_label in grid:
        mode = _VECTORIZER_MODES[vec_label]
        if mode not in vec_cache:
            vec_cache[mode] = _fit_vectorizer(mode, train_docs)
        vec = vec_cache[mode]
        train_x = [vec.transform(doc) for doc in train_docs]
        test_x = [vec.transform(doc) for doc in test_docs]
        fitted = _train_cell(classifier, model_name, train_x, train_labels, seed)
        predicted = [fitted.predict(sv) for sv in test_x]
        rep = report(confusion(test_labels, predicted))
        rows.append(
            ComparisonRow(
                classifier=classifier,
                model=model_name,
                vectorizer=vec_label,
                macro_precision=rep.macro_precision,
            )
        )
    if cnn_precision is not None:
        rows.append(
            ComparisonRow(
                classifier="CNN-LSTM",
                model="Layered Model",
                vectorizer=cnn_vectorizer_label,
                macro_precision=float(cnn_precision),
            )
        )
    return rows


def comparison_to_csv(rows: Sequence[ComparisonRow]) -> str:
    lines = ["classifier,model,vectorizer,macro_precision"]
    for row in rows:
        lines.append(
            f"{row.classifier},{row.model},{row.vectorizer},{row.macro_precision!r}"
        )
    return "\n".join(lines) + "\n"


def comparison_to_text(rows: Sequence[ComparisonRow]) -> str:
    headers = ("Classifier", "Model", "Vectorizer", "Average Precision")
    table = [headers] + [
        (r.classifier, r.model, r.vectorizer, f"{r.macro_precision:.2f}") for r in rows
    ]
    widths = [max(len(row[i]) for row in table) for i in range(4)]
    lines = []
    for row in table:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
    return "\n".join(lines) + "\n"
