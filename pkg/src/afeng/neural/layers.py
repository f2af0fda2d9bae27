"""Forward and backward passes for the individual network layers.

All functions operate on float64 batches shaped (batch, time, features) and
are deterministic. Each forward returns whatever cache its backward needs;
backwards return gradients in the same shapes as their inputs.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from afeng.errors import ShapeMismatch


def sigmoid(z: np.ndarray) -> np.ndarray:
    # piecewise form avoids overflow in exp for large |z|
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def relu(z: np.ndarray) -> np.ndarray:
    return np.maximum(z, 0.0)


def relu_backward(dy: np.ndarray, z: np.ndarray) -> np.ndarray:
    return dy * (z > 0)


# -- 1-d convolution (valid cross-correlation over time) --------------------

def conv1d_forward(x: np.ndarray, kernel: np.ndarray, bias: np.ndarray) -> np.ndarray:
    """Valid cross-correlation plus bias.

    x: (B, T, D) or (T, D); kernel: (F, w, D); bias: (F,).
    Returns (B, T-w+1, F), squeezed to (T-w+1, F) for unbatched input.
    """
    squeeze = x.ndim == 2
    if squeeze:
        x = x[None]
    f, w, d = kernel.shape
    if x.shape[1] < w:
        raise ShapeMismatch(
            f"sequence length {x.shape[1]} shorter than kernel width {w}"
        )
    if x.shape[2] != d:
        raise ShapeMismatch(f"input dim {x.shape[2]} != kernel dim {d}")
    windows = sliding_window_view(x, w, axis=1)  # (B, T-w+1, D, w)
    out = np.einsum("btdw,fwd->btf", windows, kernel, optimize=True) + bias
    return out[0] if squeeze else out


def conv1d_backward(
    dy: np.ndarray, x: np.ndarray, kernel: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Gradients w.r.t. input, kernel and bias for conv1d_forward."""
    f, w, d = kernel.shape
    windows = sliding_window_view(x, w, axis=1)
    dkernel = np.einsum("btdw,btf->fwd", windows, dy, optimize=True)
    dbias = dy.sum(axis=(0, 1))
    dx = np.zeros_like(x)
    t_out = dy.shape[1]
    for j in range(w):
        dx[:, j:j + t_out, :] += np.einsum("btf,fd->btd", dy, kernel[:, j, :], optimize=True)
    return dx, dkernel, dbias


# -- max pooling over time ---------------------------------------------------

def maxpool1d(x: np.ndarray, pool: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-feature max over consecutive time windows; last window may be short.

    x: (B, T, F) or (T, F). Returns (pooled, argmax) where argmax holds the
    absolute time index of each window maximum (first occurrence on ties).
    """
    squeeze = x.ndim == 2
    if squeeze:
        x = x[None]
    b, t, f = x.shape
    n_windows = -(-t // pool)
    pooled = np.empty((b, n_windows, f), dtype=x.dtype)
    argmax = np.empty((b, n_windows, f), dtype=np.int64)
    for wdx in range(n_windows):
        lo, hi = wdx * pool, min((wdx + 1) * pool, t)
        window = x[:, lo:hi, :]
        local = window.argmax(axis=1)
        pooled[:, wdx, :] = np.take_along_axis(window, local[:, None, :], axis=1)[:, 0, :]
        argmax[:, wdx, :] = local + lo
    if squeeze:
        return pooled[0], argmax[0]
    return pooled, argmax


def maxpool1d_backward(
    dy: np.ndarray, argmax: np.ndarray, t: int
) -> np.ndarray:
    """Route window gradients back to the recorded argmax positions."""
    b, n_windows, f = dy.shape
    dx = np.zeros((b, t, f), dtype=dy.dtype)
    b_idx = np.arange(b)[:, None, None]
    f_idx = np.arange(f)[None, None, :]
    np.add.at(dx, (b_idx, argmax, f_idx), dy)
    return dx


# -- LSTM --------------------------------------------------------------------

def lstm_forward(
    x: np.ndarray, wx: np.ndarray, wh: np.ndarray, bias: np.ndarray
) -> tuple[np.ndarray, dict]:
    """Standard LSTM recurrence over the full sequence.

    x: (B, T, D) or (T, D); wx: (D, 4H); wh: (H, 4H); bias: (4H,).
    Gate packing order along the 4H axis is [input, forget, candidate,
    output]. Returns the hidden-state sequence (B, T, H) and the cache of
    per-step activations for backprop.
    """
    squeeze = x.ndim == 2
    if squeeze:
        x = x[None]
    b, t, d = x.shape
    h_size = wh.shape[0]
    if wx.shape != (d, 4 * h_size):
        raise ShapeMismatch(f"wx shape {wx.shape} inconsistent with input dim {d}")

    h = np.zeros((b, h_size))
    c = np.zeros((b, h_size))
    hs = np.empty((b, t, h_size))
    gates = np.empty((b, t, 4 * h_size))
    cells = np.empty((b, t, h_size))
    tanh_cells = np.empty((b, t, h_size))
    for step in range(t):
        z = x[:, step, :] @ wx + h @ wh + bias
        i = sigmoid(z[:, :h_size])
        f = sigmoid(z[:, h_size:2 * h_size])
        g = np.tanh(z[:, 2 * h_size:3 * h_size])
        o = sigmoid(z[:, 3 * h_size:])
        c = f * c + i * g
        tc = np.tanh(c)
        h = o * tc
        gates[:, step, :] = np.concatenate([i, f, g, o], axis=1)
        cells[:, step, :] = c
        tanh_cells[:, step, :] = tc
        hs[:, step, :] = h
    cache = {"x": x, "gates": gates, "cells": cells, "tanh_cells": tanh_cells, "hs": hs}
    return (hs[0] if squeeze else hs), cache


def lstm_backward(
    dhs: np.ndarray, cache: dict, wx: np.ndarray, wh: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Backprop through time given gradients for every hidden state.

    dhs: (B, T, H); for a final-state-only consumer all but the last step
    are zero. Returns (dx, dwx, dwh, dbias).
    """
    x, gates, cells = cache["x"], cache["gates"], cache["cells"]
    tanh_cells, hs = cache["tanh_cells"], cache["hs"]
    b, t, d = x.shape
    h_size = wh.shape[0]

    dx = np.zeros_like(x)
    dwx = np.zeros_like(wx)
    dwh = np.zeros_like(wh)
    dbias = np.zeros(4 * h_size)
    dh_next = np.zeros((b, h_size))
    dc_next = np.zeros((b, h_size))

    for step in range(t - 1, -1, -1):
        i = gates[:, step, :h_size]
        f = gates[:, step, h_size:2 * h_size]
        g = gates[:, step, 2 * h_size:3 * h_size]
        o = gates[:, step, 3 * h_size:]
        tc = tanh_cells[:, step, :]
        c_prev = cells[:, step - 1, :] if step > 0 else np.zeros((b, h_size))
        h_prev = hs[:, step - 1, :] if step > 0 else np.zeros((b, h_size))

        dh = dhs[:, step, :] + dh_next
        dc = dc_next + dh * o * (1.0 - tc * tc)
        do = dh * tc
        di = dc * g
        df = dc * c_prev
        dg = dc * i

        dz = np.concatenate(
            [
                di * i * (1.0 - i),
                df * f * (1.0 - f),
                dg * (1.0 - g * g),
                do * o * (1.0 - o),
            ],
            axis=1,
        )
        dwx += x[:, step, :].T @ dz
        dwh += h_prev.T @ dz
        dbias += dz.sum(axis=0)
        dx[:, step, :] = dz @ wx.T
        dh_next = dz @ wh.T
        dc_next = dc * f
    return dx, dwx, dwh, dbias


# -- dense, dropout, softmax --------------------------------------------------

def dense_forward(x: np.ndarray, w: np.ndarray, b: np.ndarray) -> np.ndarray:
    return x @ w + b


def dense_backward(
    dy: np.ndarray, x: np.ndarray, w: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    return dy @ w.T, x.T @ dy, dy.sum(axis=0)


def dropout_mask(
    shape: tuple[int, ...], rate: float, rng: np.random.Generator
) -> np.ndarray:
    """Inverted-dropout mask: surviving units pre-scaled by 1/(1-rate)."""
    if rate <= 0.0:
        return np.ones(shape)
    keep = rng.random(shape) >= rate
    return keep / (1.0 - rate)


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def softmax_cross_entropy(
    logits: np.ndarray, labels: np.ndarray
) -> tuple[float, np.ndarray, np.ndarray]:
    """Mean cross-entropy over the batch.

    Returns (loss, dlogits, probs); dlogits already carries the 1/batch
    factor of the mean.
    """
    b = logits.shape[0]
    shifted = logits - logits.max(axis=1, keepdims=True)
    log_z = np.log(np.exp(shifted).sum(axis=1))
    log_probs = shifted - log_z[:, None]
    loss = -log_probs[np.arange(b), labels].mean()
    probs = np.exp(log_probs)
    dlogits = probs.copy()
    dlogits[np.arange(b), labels] -= 1.0
    dlogits /= b
    return float(loss), dlogits, probs
