"""Versioned binary checkpoint format for trained models.

Layout (all integers little-endian):
  magic        6 bytes  b"AFENG1"
  version      uint32
  meta_len     uint64, then meta_len bytes of JSON (sorted keys)
  tensor_count uint32
  per tensor:  name_len uint16 + utf-8 name, ndim uint8,
               ndim extents as uint64, then float64 values row-major

The file is parsed completely before a model is constructed, so a
truncated or corrupt file can never yield a partial model.
"""

from __future__ import annotations

import io
import json
import os
import struct
from typing import Optional

import numpy as np

from afeng.errors import BadMagic, ShapeHeaderMismatch, VersionMismatch
from afeng.labels import EMOTION_NAMES
from afeng.neural.model import CnnLstmModel, ModelConfig, param_shapes

MAGIC = b"AFENG1"
VERSION = 1


def _read_exact(fh, n: int, what: str) -> bytes:
    data = fh.read(n)
    if len(data) != n:
        raise ShapeHeaderMismatch(f"truncated file while reading {what}")
    return data


def save_checkpoint(
    model: CnnLstmModel,
    path,
    seed: Optional[int] = None,
    vocab_sha256: str = "",
) -> None:
    model.validate_shapes()
    meta = {
        "config": model.config.to_dict(),
        "emotion_order": list(EMOTION_NAMES),
        "seed": seed,
        "vocab_sha256": vocab_sha256,
    }
    meta_bytes = json.dumps(meta, sort_keys=True, separators=(",", ":")).encode("utf-8")

    buf = io.BytesIO()
    buf.write(MAGIC)
    buf.write(struct.pack("<I", VERSION))
    buf.write(struct.pack("<Q", len(meta_bytes)))
    buf.write(meta_bytes)
    names = list(param_shapes(model.config))
    buf.write(struct.pack("<I", len(names)))
    for name in names:
        arr = np.ascontiguousarray(model.params[name], dtype="<f8")
        encoded = name.encode("utf-8")
        buf.write(struct.pack("<H", len(encoded)))
        buf.write(encoded)
        buf.write(struct.pack("<B", arr.ndim))
        for extent in arr.shape:
            buf.write(struct.pack("<Q", extent))
        buf.write(arr.tobytes())

    tmp = f"{path}.tmp"
    with open(tmp, "wb") as fh:
        fh.write(buf.getvalue())
    os.replace(tmp, path)


def _parse(fh) -> tuple[dict, dict]:
    magic = fh.read(len(MAGIC))
    if magic != MAGIC:
        raise BadMagic(f"expected {MAGIC!r}, found {magic!r}")
    version = struct.unpack("<I", _read_exact(fh, 4, "version"))[0]
    if version != VERSION:
        raise VersionMismatch(f"checkpoint version {version}, supported {VERSION}")
    meta_len = struct.unpack("<Q", _read_exact(fh, 8, "meta length"))[0]
    try:
        meta = json.loads(_read_exact(fh, meta_len, "meta").decode("utf-8"))
    except (ValueError, UnicodeDecodeError) as exc:
        raise ShapeHeaderMismatch(f"unreadable meta block: {exc}") from exc

    tensor_count = struct.unpack("<I", _read_exact(fh, 4, "tensor count"))[0]
    tensors: dict = {}
    for _ in range(tensor_count):
        name_len = struct.unpack("<H", _read_exact(fh, 2, "name length"))[0]
        name = _read_exact(fh, name_len, "tensor name").decode("utf-8")
        ndim = struct.unpack("<B", _read_exact(fh, 1, "rank"))[0]
        dims = tuple(
            struct.unpack("<Q", _read_exact(fh, 8, f"{name} extent"))[0]
            for _ in range(ndim)
        )
        count = int(np.prod(dims)) if dims else 1
        raw = _read_exact(fh, count * 8, f"{name} values")
        tensors[name] = np.frombuffer(raw, dtype="<f8").reshape(dims).copy()
    return meta, tensors


def load_checkpoint_meta(path) -> dict:
    with open(path, "rb") as fh:
        magic = fh.read(len(MAGIC))
        if magic != MAGIC:
            raise BadMagic(f"expected {MAGIC!r}, found {magic!r}")
        version = struct.unpack("<I", _read_exact(fh, 4, "version"))[0]
        if version != VERSION:
            raise VersionMismatch(f"checkpoint version {version}, supported {VERSION}")
        meta_len = struct.unpack("<Q", _read_exact(fh, 8, "meta length"))[0]
        try:
            return json.loads(_read_exact(fh, meta_len, "meta").decode("utf-8"))
        except (ValueError, UnicodeDecodeError) as exc:
            raise ShapeHeaderMismatch(f"unreadable meta block: {exc}") from exc


def load_checkpoint(path) -> CnnLstmModel:
    with open(path, "rb") as fh:
        meta, tensors = _parse(fh)
    try:
        config = ModelConfig.from_dict(meta["config"])
    except (KeyError, TypeError) as exc:
        raise ShapeHeaderMismatch(f"meta block missing model config: {exc}") from exc

    expected = param_shapes(config)
    if set(expected) != set(tensors):
        missing = sorted(set(expected) - set(tensors))
        extra = sorted(set(tensors) - set(expected))
        raise ShapeHeaderMismatch(
            f"tensor names inconsistent with config (missing {missing}, extra {extra})"
        )
    for name, shape in expected.items():
        if tensors[name].shape != shape:
            raise ShapeHeaderMismatch(
                f"{name}: stored shape {tensors[name].shape}, config implies {shape}"
            )
    return CnnLstmModel(config=config, params=tensors)
