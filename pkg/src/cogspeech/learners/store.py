"""Versioned model container.

Layout: magic "CGSM", little-endian u16 format version, u64 payload length,
UTF-8 JSON payload, then a SHA-256 digest over everything before it. Arrays
travel as little-endian raw bytes in base64, so load(save(m)) predicts
bit-identically. The JSON is emitted with sorted keys and no timestamps:
fitting with the same seed twice yields byte-identical files.
"""

from __future__ import annotations

import base64
import hashlib
import json
import struct
from pathlib import Path
from typing import Any

import numpy as np

from ..errors import ChecksumFailure, VersionMismatch
from .base import TrainedModel
from .tree import DecisionTree

MAGIC = b"CGSM"
FORMAT_VERSION = 1
_PREFIX = struct.Struct("<4sHQ")


def _enc_array(arr: np.ndarray) -> dict:
    arr = np.asarray(arr)
    kind = arr.dtype.kind + str(arr.dtype.itemsize)
    le = arr.astype(arr.dtype.newbyteorder("<"), copy=False)
    return {
        "__array__": True,
        "dtype": kind,
        "shape": list(arr.shape),
        "data": base64.b64encode(np.ascontiguousarray(le).tobytes()).decode("ascii"),
    }


_DTYPES = {"f8": "<f8", "f4": "<f4", "i8": "<i8", "i4": "<i4", "u4": "<u4", "b1": "|b1"}


def _dec_array(obj: dict) -> np.ndarray:
    dtype = _DTYPES.get(obj["dtype"])
    if dtype is None:
        raise VersionMismatch(f"unsupported array dtype {obj['dtype']!r} in model file")
    data = base64.b64decode(obj["data"])
    return np.frombuffer(data, dtype=dtype).reshape(obj["shape"]).copy()


def _enc_tree(tree: DecisionTree) -> dict:
    return {
        "__tree__": True,
        "criterion": tree.criterion,
        "feature": _enc_array(tree.feature),
        "threshold": _enc_array(tree.threshold),
        "left": _enc_array(tree.left),
        "right": _enc_array(tree.right),
        "value": _enc_array(tree.value),
    }


def _dec_tree(obj: dict) -> DecisionTree:
    return DecisionTree(
        criterion=obj["criterion"],
        feature=_dec_array(obj["feature"]).astype(np.int32),
        threshold=_dec_array(obj["threshold"]),
        left=_dec_array(obj["left"]).astype(np.int32),
        right=_dec_array(obj["right"]).astype(np.int32),
        value=_dec_array(obj["value"]),
    )


def _encode(value: Any) -> Any:
    if isinstance(value, TrainedModel):
        return {
            "__model__": True,
            "kind": value.kind,
            "task_kind": value.task_kind,
            "params": _encode(value.params),
            "columns": list(value.columns),
            "seed": value.seed,
            "dataset_fingerprint": value.dataset_fingerprint,
            "flags": list(value.flags),
            "state": _encode(value.state),
        }
    if isinstance(value, DecisionTree):
        return _enc_tree(value)
    if isinstance(value, np.ndarray):
        return _enc_array(value)
    if isinstance(value, dict):
        return {k: _encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_encode(v) for v in value]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    return value


def _decode(value: Any) -> Any:
    if isinstance(value, dict):
        if value.get("__model__"):
            return TrainedModel(
                kind=value["kind"],
                task_kind=value["task_kind"],
                params=_decode(value["params"]),
                columns=tuple(value["columns"]),
                seed=value["seed"],
                dataset_fingerprint=value["dataset_fingerprint"],
                flags=tuple(value["flags"]),
                state=_decode(value["state"]),
            )
        if value.get("__tree__"):
            return _dec_tree(value)
        if value.get("__array__"):
            return _dec_array(value)
        return {k: _decode(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_decode(v) for v in value]
    return value


def save_model(model: TrainedModel) -> bytes:
    payload = json.dumps(_encode(model), sort_keys=True, separators=(",", ":")).encode("utf-8")
    head = _PREFIX.pack(MAGIC, FORMAT_VERSION, len(payload))
    digest = hashlib.sha256(head + payload).digest()
    return head + payload + digest


def load_model(data: bytes) -> TrainedModel:
    if len(data) < _PREFIX.size:
        raise ChecksumFailure("model file shorter than its header")
    magic, version, length = _PREFIX.unpack_from(data, 0)
    if magic != MAGIC:
        raise VersionMismatch(f"bad magic {magic!r}, not a model file")
    if version != FORMAT_VERSION:
        raise VersionMismatch(f"model format version {version}, supported: {FORMAT_VERSION}")
    expect = _PREFIX.size + length + 32
    if len(data) != expect:
        raise ChecksumFailure(f"model file is {len(data)} bytes, expected {expect}")
    body = data[: _PREFIX.size + length]
    digest = data[_PREFIX.size + length :]
    if hashlib.sha256(body).digest() != digest:
        raise ChecksumFailure("model file checksum does not match")
    try:
        payload = json.loads(body[_PREFIX.size :].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ChecksumFailure(f"model payload is not valid JSON: {exc}") from exc
    model = _decode(payload)
    if not isinstance(model, TrainedModel):
        raise ChecksumFailure("model payload does not contain a model record")
    return model


def save_model_file(model: TrainedModel, path: str | Path) -> None:
    Path(path).write_bytes(save_model(model))


def load_model_file(path: str | Path) -> TrainedModel:
    return load_model(Path(path).read_bytes())
