"""The multichannel CNN-LSTM emotion classifier.

Parameters live in a flat name -> float64 array dict so the optimizer,
checkpoint writer, and gradient checker can treat the model uniformly.
Two embedding channels are kept; only the tunable one receives gradients.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from afeng.errors import ShapeMismatch
from afeng.labels import NUM_EMOTIONS
from afeng.neural import layers
from afeng.textprep import EncodedSentence, PAD_INDEX

VARIANTS = ("cnn-lstm", "lstm-cnn")


@dataclass(frozen=True)
class ModelConfig:
    vocab_size: int
    embedding_dim: int = 200
    filter_widths: tuple = (2, 3, 5, 6, 8)
    filters_per_width: int = 64
    pool_size: int = 4
    hidden_size: int = 128
    dense_size: int = 128
    num_classes: int = NUM_EMOTIONS
    max_len: int = 40
    dropout_rate: float = 0.5
    epochs: int = 400
    batch_size: int = 128
    variant: str = "cnn-lstm"

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        # both layer orders convolve over a length-max_len sequence
        if self.max_len < max(self.filter_widths):
            raise ShapeMismatch(
                f"max_len {self.max_len} shorter than widest kernel "
                f"{max(self.filter_widths)}"
            )

    def to_dict(self) -> dict:
        return {
            "vocab_size": self.vocab_size,
            "embedding_dim": self.embedding_dim,
            "filter_widths": list(self.filter_widths),
            "filters_per_width": self.filters_per_width,
            "pool_size": self.pool_size,
            "hidden_size": self.hidden_size,
            "dense_size": self.dense_size,
            "num_classes": self.num_classes,
            "max_len": self.max_len,
            "dropout_rate": self.dropout_rate,
            "epochs": self.epochs,
            "batch_size": self.batch_size,
            "variant": self.variant,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ModelConfig":
        data = dict(data)
        data["filter_widths"] = tuple(data["filter_widths"])
        return cls(**data)


def _lstm_input_dim(config: ModelConfig) -> int:
    if config.variant == "cnn-lstm":
        return config.filters_per_width
    return config.embedding_dim


def _dense_input_dim(config: ModelConfig) -> int:
    if config.variant == "cnn-lstm":
        return config.hidden_size
    return config.filters_per_width * len(config.filter_widths)


def _conv_input_dim(config: ModelConfig) -> int:
    if config.variant == "cnn-lstm":
        return config.embedding_dim
    return config.hidden_size


def param_shapes(config: ModelConfig) -> dict:
    """Canonical parameter name -> shape map; iteration order is fixed."""
    shapes: dict = {
        "embedding/static": (config.vocab_size, config.embedding_dim),
        "embedding/tunable": (config.vocab_size, config.embedding_dim),
    }
    conv_dim = _conv_input_dim(config)
    for w in config.filter_widths:
        shapes[f"conv{w}/kernel"] = (config.filters_per_width, w, conv_dim)
        shapes[f"conv{w}/bias"] = (config.filters_per_width,)
    shapes["lstm/wx"] = (_lstm_input_dim(config), 4 * config.hidden_size)
    shapes["lstm/wh"] = (config.hidden_size, 4 * config.hidden_size)
    shapes["lstm/bias"] = (4 * config.hidden_size,)
    shapes["dense/weight"] = (_dense_input_dim(config), config.dense_size)
    shapes["dense/bias"] = (config.dense_size,)
    shapes["output/weight"] = (config.dense_size, config.num_classes)
    shapes["output/bias"] = (config.num_classes,)
    return shapes


def _glorot(rng: np.random.Generator, shape: tuple) -> np.ndarray:
    if len(shape) == 1:
        return np.zeros(shape)
    fan_in = int(np.prod(shape[:-1]))
    fan_out = shape[-1]
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, shape)


@dataclass
class CnnLstmModel:
    config: ModelConfig
    params: dict = field(default_factory=dict)

    @classmethod
    def initialize(
        cls,
        config: ModelConfig,
        seed: int = 0,
        embedding: Optional[np.ndarray] = None,
    ) -> "CnnLstmModel":
        """Seeded initialization; both channels start from the same matrix."""
        rng = np.random.default_rng(seed)
        if embedding is None:
            embedding = rng.uniform(
                -0.05, 0.05, (config.vocab_size, config.embedding_dim)
            )
            embedding[PAD_INDEX] = 0.0
        embedding = np.asarray(embedding, dtype=np.float64)
        if embedding.shape != (config.vocab_size, config.embedding_dim):
            raise ShapeMismatch(
                f"embedding shape {embedding.shape} != "
                f"({config.vocab_size}, {config.embedding_dim})"
            )
        params: dict = {
            "embedding/static": embedding.copy(),
            "embedding/tunable": embedding.copy(),
        }
        for name, shape in param_shapes(config).items():
            if name.startswith("embedding/"):
                continue
            params[name] = _glorot(rng, shape)
        # forget gate bias starts at 1 so early cell state is retained
        h = config.hidden_size
        params["lstm/bias"][h:2 * h] = 1.0
        return cls(config=config, params=params)

    def validate_shapes(self) -> None:
        expected = param_shapes(self.config)
        if set(expected) != set(self.params):
            raise ShapeMismatch("parameter name set inconsistent with config")
        for name, shape in expected.items():
            if self.params[name].shape != shape:
                raise ShapeMismatch(
                    f"{name}: shape {self.params[name].shape} != {shape}"
                )

    def clone(self) -> "CnnLstmModel":
        return CnnLstmModel(
            config=replace(self.config),
            params={k: v.copy() for k, v in self.params.items()},
        )


def _forward_batch(
    model: CnnLstmModel,
    indices: np.ndarray,
    train_mode: bool = False,
    rng: Optional[np.random.Generator] = None,
    want_cache: bool = False,
):
    cfg = model.config
    p = model.params
    # the two channels share post-embedding weights, so their sum can be
    # embedded once thanks to convolution linearity
    x = p["embedding/static"][indices] + p["embedding/tunable"][indices]
    cache: dict = {"indices": indices, "x": x}

    if cfg.variant == "cnn-lstm":
        pooled_parts = []
        for w in cfg.filter_widths:
            pre = layers.conv1d_forward(x, p[f"conv{w}/kernel"], p[f"conv{w}/bias"])
            act = layers.relu(pre)
            pool, arg = layers.maxpool1d(act, cfg.pool_size)
            cache[f"conv{w}/pre"] = pre
            cache[f"conv{w}/argmax"] = arg
            pooled_parts.append(pool)
        seq = np.concatenate(pooled_parts, axis=1)
        cache["pooled_lengths"] = [part.shape[1] for part in pooled_parts]
        hs, lstm_cache = layers.lstm_forward(seq, p["lstm/wx"], p["lstm/wh"], p["lstm/bias"])
        cache["lstm"] = lstm_cache
        features = hs[:, -1, :]
    else:
        hs, lstm_cache = layers.lstm_forward(x, p["lstm/wx"], p["lstm/wh"], p["lstm/bias"])
        cache["lstm"] = lstm_cache
        parts = []
        for w in cfg.filter_widths:
            pre = layers.conv1d_forward(hs, p[f"conv{w}/kernel"], p[f"conv{w}/bias"])
            act = layers.relu(pre)
            pool, arg = layers.maxpool1d(act, pre.shape[1])  # global max over time
            cache[f"conv{w}/pre"] = pre
            cache[f"conv{w}/argmax"] = arg
            parts.append(pool[:, 0, :])
        features = np.concatenate(parts, axis=1)

    dense_pre = layers.dense_forward(features, p["dense/weight"], p["dense/bias"])
    dense_act = layers.relu(dense_pre)
    if train_mode and cfg.dropout_rate > 0.0:
        if rng is None:
            raise ValueError("rng is required when dropout is active")
        mask = layers.dropout_mask(dense_act.shape, cfg.dropout_rate, rng)
    else:
        mask = np.ones_like(dense_act)
    dropped = dense_act * mask
    logits = layers.dense_forward(dropped, p["output/weight"], p["output/bias"])

    cache.update(
        features=features,
        dense_pre=dense_pre,
        dense_act=dense_act,
        mask=mask,
        dropped=dropped,
        logits=logits,
    )
    return (logits, cache) if want_cache else (logits, None)


def forward(
    model: CnnLstmModel,
    sentence: EncodedSentence,
    train_mode: bool = False,
    rng: Optional[np.random.Generator] = None,
) -> np.ndarray:
    """Probability vector over the 8 emotions for one encoded sentence."""
    model.validate_shapes()
    logits, _ = _forward_batch(
        model, sentence.indices[None, :], train_mode=train_mode, rng=rng
    )
    return layers.softmax(logits)[0]


def forward_batch(
    model: CnnLstmModel,
    indices: np.ndarray,
    train_mode: bool = False,
    rng: Optional[np.random.Generator] = None,
) -> np.ndarray:
    logits, _ = _forward_batch(model, indices, train_mode=train_mode, rng=rng)
    return layers.softmax(logits)


def backward(
    model: CnnLstmModel,
    sentences: np.ndarray,
    labels: np.ndarray,
    rng: Optional[np.random.Generator] = None,
) -> tuple[dict, float]:
    """Gradients of mean cross-entropy over the batch plus the loss itself.

    sentences: (B, max_len) int index matrix; labels: (B,) int class codes.
    The static embedding channel's gradient is identically zero and the pad
    row of the tunable channel never accumulates gradient.
    """
    if len(sentences) == 0:
        raise ValueError("batch must be non-empty")
    cfg = model.config
    p = model.params
    logits, cache = _forward_batch(
        model, sentences, train_mode=True, rng=rng, want_cache=True
    )
    loss, dlogits, _ = layers.softmax_cross_entropy(logits, labels)

    grads: dict = {name: np.zeros_like(arr) for name, arr in p.items()}
    ddropped, grads["output/weight"], grads["output/bias"] = layers.dense_backward(
        dlogits, cache["dropped"], p["output/weight"]
    )
    ddense_act = ddropped * cache["mask"]
    ddense_pre = layers.relu_backward(ddense_act, cache["dense_pre"])
    dfeatures, grads["dense/weight"], grads["dense/bias"] = layers.dense_backward(
        ddense_pre, cache["features"], p["dense/weight"]
    )

    if cfg.variant == "cnn-lstm":
        hs = cache["lstm"]["hs"]
        dhs = np.zeros_like(hs)
        dhs[:, -1, :] = dfeatures
        dseq, grads["lstm/wx"], grads["lstm/wh"], grads["lstm/bias"] = layers.lstm_backward(
            dhs, cache["lstm"], p["lstm/wx"], p["lstm/wh"]
        )
        dx = np.zeros_like(cache["x"])
        offset = 0
        for w, seg_len in zip(cfg.filter_widths, cache["pooled_lengths"]):
            dpool = dseq[:, offset:offset + seg_len, :]
            offset += seg_len
            t_out = cache[f"conv{w}/pre"].shape[1]
            dact = layers.maxpool1d_backward(dpool, cache[f"conv{w}/argmax"], t_out)
            dpre = layers.relu_backward(dact, cache[f"conv{w}/pre"])
            dx_w, dk, db = layers.conv1d_backward(dpre, cache["x"], p[f"conv{w}/kernel"])
            grads[f"conv{w}/kernel"] = dk
            grads[f"conv{w}/bias"] = db
            dx += dx_w
    else:
        hs = cache["lstm"]["hs"]
        dhs = np.zeros_like(hs)
        f = cfg.filters_per_width
        for pos, w in enumerate(cfg.filter_widths):
            dpart = dfeatures[:, pos * f:(pos + 1) * f][:, None, :]
            t_out = cache[f"conv{w}/pre"].shape[1]
            dact = layers.maxpool1d_backward(dpart, cache[f"conv{w}/argmax"], t_out)
            dpre = layers.relu_backward(dact, cache[f"conv{w}/pre"])
            dhs_w, dk, db = layers.conv1d_backward(dpre, hs, p[f"conv{w}/kernel"])
            grads[f"conv{w}/kernel"] = dk
            grads[f"conv{w}/bias"] = db
            dhs += dhs_w
        dx, grads["lstm/wx"], grads["lstm/wh"], grads["lstm/bias"] = layers.lstm_backward(
            dhs, cache["lstm"], p["lstm/wx"], p["lstm/wh"]
        )

    demb = grads["embedding/tunable"]
    np.add.at(demb, cache["indices"], dx)
    demb[PAD_INDEX] = 0.0
    return grads, loss
