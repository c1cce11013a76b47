"""Per-recording audio-embedding matrices and file-level pooling.

Two interchangeable on-disk formats:
- text: comma-separated reals, one frame per line, no header;
- binary: 16-byte header (magic "EMB1", little-endian u32 rows, u32 dim,
  4 reserved bytes) followed by rows*dim little-endian float32, row-major.
A file with a single row is treated as pre-pooled.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Union

import numpy as np

from .errors import (
    DimensionMismatch,
    EmbeddingFormatError,
    EmptyMatrix,
    MissingEmbeddingFile,
    NonFiniteValue,
)
from .manifest import CohortManifest, Finding
from .transcripts import Task

DEFAULT_EMBEDDING_DIM = 1280
_MAGIC = b"EMB1"
_HEADER = struct.Struct("<4sII4s")


@dataclass(frozen=True)
class EmbeddingMatrix:
    participant_id: str
    task: Task
    values: np.ndarray  # (rows, dim) float64

    def __post_init__(self) -> None:
        v = self.values
        if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] < 1:
            raise EmptyMatrix(f"embedding matrix must be 2-D and non-empty, got shape {v.shape}")
        if not np.isfinite(v).all():
            raise NonFiniteValue("embedding matrix contains non-finite values")

    @property
    def rows(self) -> int:
        return int(self.values.shape[0])

    @property
    def dim(self) -> int:
        return int(self.values.shape[1])


@dataclass(frozen=True)
class PooledEmbedding:
    participant_id: str
    task: Task
    values: np.ndarray  # (dim,) float64

    def __post_init__(self) -> None:
        if self.values.ndim != 1 or self.values.shape[0] < 1:
            raise EmptyMatrix("pooled embedding must be a non-empty vector")
        if not np.isfinite(self.values).all():
            raise NonFiniteValue("pooled embedding contains non-finite values")

    @property
    def dim(self) -> int:
        return int(self.values.shape[0])


def _parse_text(data: bytes) -> np.ndarray:
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise EmbeddingFormatError(f"embedding file is not valid UTF-8: {exc}") from exc
    rows: list[list[float]] = []
    for line_no, line in enumerate(text.split("\n"), start=1):
        line = line.strip().rstrip("\r")
        if not line:
            continue
        cells = [c.strip() for c in line.split(",")]
        try:
            row = [float(c) for c in cells]
        except ValueError as exc:
            raise EmbeddingFormatError(f"line {line_no}: non-numeric cell") from exc
        rows.append(row)
    if not rows:
        raise EmptyMatrix("embedding file contains no frames")
    width = len(rows[0])
    for line_no, row in enumerate(rows, start=1):
        if len(row) != width:
            raise DimensionMismatch(
                f"frame {line_no} has {len(row)} values, expected {width} as in frame 1"
            )
    return np.asarray(rows, dtype=np.float64)


def _parse_binary(data: bytes) -> np.ndarray:
    if len(data) < _HEADER.size:
        raise EmbeddingFormatError("binary embedding file shorter than its 16-byte header")
    magic, rows, dim, _reserved = _HEADER.unpack_from(data, 0)
    if magic != _MAGIC:
        raise EmbeddingFormatError(f"bad magic {magic!r}, expected {_MAGIC!r}")
    if rows < 1 or dim < 1:
        raise EmptyMatrix(f"binary embedding declares {rows}x{dim} values")
    need = _HEADER.size + rows * dim * 4
    if len(data) != need:
        raise EmbeddingFormatError(
            f"binary embedding payload is {len(data) - _HEADER.size} bytes, expected {rows * dim * 4}"
        )
    flat = np.frombuffer(data, dtype="<f4", offset=_HEADER.size)
    return flat.reshape(rows, dim).astype(np.float64)


def load_embedding(
    source: Union[str, Path, bytes],
    expected_dim: int = DEFAULT_EMBEDDING_DIM,
    participant_id: str = "",
    task: Task | str = Task.CTD,
) -> EmbeddingMatrix:
    """Load either format (sniffed by magic); validates the configured dim."""
    if isinstance(source, bytes):
        data = source
    else:
        try:
            data = Path(source).read_bytes()
        except FileNotFoundError as exc:
            raise MissingEmbeddingFile(f"embedding file {source} does not exist") from exc
    values = _parse_binary(data) if data[:4] == _MAGIC else _parse_text(data)
    if values.shape[1] != expected_dim:
        raise DimensionMismatch(
            f"embedding dim {values.shape[1]} does not match expected {expected_dim}"
        )
    return EmbeddingMatrix(participant_id=participant_id, task=Task(task), values=values)


def write_embedding_text(values: np.ndarray, path: str | Path) -> None:
    values = np.asarray(values, dtype=np.float64)
    lines = [",".join(repr(float(x)) for x in row) for row in values]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_embedding_binary(values: np.ndarray, path: str | Path) -> None:
    arr = np.ascontiguousarray(np.asarray(values, dtype=np.float64).astype("<f4"))
    rows, dim = arr.shape
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(_MAGIC, rows, dim, b"\x00" * 4))
        fh.write(arr.tobytes())


def pool(matrix: EmbeddingMatrix, method: str = "mean") -> PooledEmbedding:
    """Collapse frames to one vector; a single row passes through unchanged."""
    if method != "mean":
        raise ValueError(f"unknown pooling method {method!r}")
    if matrix.rows == 1:
        pooled = matrix.values[0].copy()
    else:
        pooled = matrix.values.mean(axis=0)
    return PooledEmbedding(participant_id=matrix.participant_id, task=matrix.task, values=pooled)


def join_embeddings(
    manifest: CohortManifest,
    task_filter: Task = Task.CTD,
    expected_dim: int = DEFAULT_EMBEDDING_DIM,
    base_dir: str | Path | None = None,
    method: str = "mean",
) -> tuple[list[tuple[str, PooledEmbedding]], list[Finding]]:
    """One pooled vector per participant for the filtered task.

    Participants whose row lacks an embedding file are reported as findings,
    never silently dropped. Output is sorted by participant id.
    """
    base = Path(base_dir) if base_dir is not None else None
    out: list[tuple[str, PooledEmbedding]] = []
    findings: list[Finding] = []
    for pid in sorted(manifest.participant_ids):
        rows = [r for r in manifest.rows_for(pid) if r.task == task_filter]
        if not rows or not rows[0].embedding_path:
            findings.append(
                Finding(pid, "missing_embedding", f"no {task_filter} embedding row", blocking=False)
            )
            continue
        path = Path(rows[0].embedding_path)
        if base is not None and not path.is_absolute():
            path = base / path
        if not path.exists():
            findings.append(
                Finding(pid, "missing_embedding_file", f"{path} does not exist", blocking=True)
            )
            continue
        matrix = load_embedding(path, expected_dim, participant_id=pid, task=task_filter)
        out.append((pid, pool(matrix, method)))
    return out, findings
