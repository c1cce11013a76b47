"""Writers for the downstream toolkit's file formats.

These are written against the documented interfaces (6-column transcript
lines, the 7-column manifest header, the EMB1 binary layout), deliberately
not imported from the consumer package: the contract tests run the consumer's
own validator over files produced here.
"""

from __future__ import annotations

import csv
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

MANIFEST_HEADER = (
    "participant_id",
    "task",
    "transcript_path",
    "embedding_path",
    "duration_seconds",
    "diagnosis",
    "mmse",
)

_EMB_HEADER = struct.Struct("<4sII4s")


@dataclass(frozen=True)
class Token:
    form: str
    lemma: str
    upos: str
    head: int  # 0 = root, else 1-based index within the sentence
    deprel: str


def write_conllu(sentences: list[list[Token]], path: str | Path) -> None:
    blocks = []
    for sent in sentences:
        lines = [
            f"{i}\t{t.form}\t{t.lemma}\t{t.upos}\t{t.head}\t{t.deprel}"
            for i, t in enumerate(sent, start=1)
        ]
        blocks.append("\n".join(lines))
    text = "\n\n".join(blocks) + "\n" if blocks else ""
    Path(path).write_text(text, encoding="utf-8")


def write_embedding(matrix: np.ndarray, path: str | Path) -> None:
    arr = np.ascontiguousarray(np.asarray(matrix, dtype=np.float64).astype("<f4"))
    rows, dim = arr.shape
    with open(path, "wb") as fh:
        fh.write(_EMB_HEADER.pack(b"EMB1", rows, dim, b"\x00" * 4))
        fh.write(arr.tobytes())


@dataclass(frozen=True)
class ManifestRow:
    participant_id: str
    task: str
    transcript_path: str
    embedding_path: str
    duration_seconds: float
    diagnosis: str = ""
    mmse: str = ""


def write_manifest(rows: list[ManifestRow], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(MANIFEST_HEADER)
        for r in rows:
            writer.writerow(
                [
                    r.participant_id,
                    r.task,
                    r.transcript_path,
                    r.embedding_path,
                    repr(float(r.duration_seconds)),
                    r.diagnosis,
                    r.mmse,
                ]
            )
