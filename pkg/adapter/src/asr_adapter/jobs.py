"""Job discovery and the per-file stage chain (trim -> transcribe -> embed).

Input directory layout: one WAV per recording named <participant>_<task>.wav
with task in {CTD, SF, PF}; the scripted transcription backend reads a
sidecar <participant>_<task>.txt. An optional labels.csv
(participant_id,diagnosis,mmse) supplies cohort labels to pass through into
the manifest; the adapter itself never invents diagnoses, MMSE scores, or
durations - the manifest duration is the voiced time the VAD measured, not
the file length.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .audio import read_wav, write_wav
from .backends import (
    ASR_BACKENDS,
    ENCODER_BACKENDS,
    PARSER_BACKENDS,
    VAD_BACKENDS,
    EMBEDDING_DIM,
    resolve,
)
from .errors import AdapterError, BackendFailure, NoSpeechDetected, UnreadableAudio
from .formats import ManifestRow, Token, write_conllu, write_embedding, write_manifest

TASKS = ("CTD", "SF", "PF")


@dataclass(frozen=True)
class AdapterJob:
    inputs: tuple[tuple[str, str, Path], ...]  # (participant_id, task, wav path)
    out_dir: Path
    vad_id: str = "energy"
    asr_id: str = "scripted"
    parser_id: str = "rule"
    encoder_id: str = "spectral"
    pooled: bool = False
    labels: dict[str, tuple[str, str]] = field(default_factory=dict)


def discover_inputs(in_dir: str | Path) -> tuple[tuple[str, str, Path], ...]:
    """Map every <participant>_<task>.wav to exactly one (participant, task)."""
    found: dict[tuple[str, str], Path] = {}
    for path in sorted(Path(in_dir).glob("*.wav")):
        stem = path.stem
        if "_" not in stem:
            raise AdapterError(f"{path.name}: expected <participant>_<task>.wav")
        pid, _, task = stem.rpartition("_")
        if task not in TASKS:
            raise AdapterError(f"{path.name}: task {task!r} not in {TASKS}")
        key = (pid, task)
        if key in found:
            raise AdapterError(f"duplicate recording for participant {pid!r} task {task}")
        found[key] = path
    return tuple((pid, task, path) for (pid, task), path in sorted(found.items()))


def load_labels(in_dir: str | Path) -> dict[str, tuple[str, str]]:
    path = Path(in_dir) / "labels.csv"
    if not path.exists():
        return {}
    labels: dict[str, tuple[str, str]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [c.strip() for c in header] != ["participant_id", "diagnosis", "mmse"]:
            raise AdapterError("labels.csv must have header participant_id,diagnosis,mmse")
        for row in reader:
            if row:
                labels[row[0].strip()] = (row[1].strip(), row[2].strip())
    return labels


def build_job(in_dir: str | Path, out_dir: str | Path, **kwargs) -> AdapterJob:
    return AdapterJob(
        inputs=discover_inputs(in_dir),
        out_dir=Path(out_dir),
        labels=load_labels(in_dir),
        **kwargs,
    )


def preprocess_audio(samples: np.ndarray, rate: int, vad) -> tuple[np.ndarray, float]:
    """Concatenated voiced segments and the voiced duration in seconds."""
    spans = vad(samples, rate)
    if not spans:
        raise NoSpeechDetected("no voiced frames")
    voiced = np.concatenate([samples[a:b] for a, b in spans])
    duration = float(voiced.shape[0]) / rate
    if duration <= 0.0:
        raise NoSpeechDetected("voiced duration is zero")
    return voiced, duration


def transcribe_and_annotate(audio_path: Path, voiced: np.ndarray, rate: int, asr, parser) -> list[list[Token]]:
    sentences = asr(audio_path, voiced, rate)
    return [parser(words) for words in sentences]


def embed(voiced: np.ndarray, rate: int, encoder, pooled: bool) -> np.ndarray:
    matrix = encoder(voiced, rate)
    if matrix.ndim != 2 or matrix.shape[1] != EMBEDDING_DIM:
        raise BackendFailure(
            f"encoder produced shape {matrix.shape}, expected (*, {EMBEDDING_DIM})"
        )
    if pooled:
        matrix = matrix.mean(axis=0, keepdims=True)
    return matrix


def run_job(job: AdapterJob) -> dict:
    """Process every input; per-file failures are recorded and the job
    continues. Returns the report written to adapter_report.json."""
    vad = resolve(VAD_BACKENDS, job.vad_id, "VAD")
    asr = resolve(ASR_BACKENDS, job.asr_id, "ASR")
    parser = resolve(PARSER_BACKENDS, job.parser_id, "parser")
    encoder = resolve(ENCODER_BACKENDS, job.encoder_id, "encoder")

    out = job.out_dir
    (out / "transcripts").mkdir(parents=True, exist_ok=True)
    (out / "embeddings").mkdir(parents=True, exist_ok=True)
    (out / "trimmed").mkdir(parents=True, exist_ok=True)

    rows: list[ManifestRow] = []
    failures: list[dict] = []
    processed = 0

    for pid, task, wav_path in job.inputs:
        try:
            samples, rate = read_wav(wav_path)
            voiced, duration = preprocess_audio(samples, rate, vad)
            write_wav(out / "trimmed" / f"{pid}_{task}.wav", voiced, rate)

            sentences = transcribe_and_annotate(wav_path, voiced, rate, asr, parser)
            transcript_rel = f"transcripts/{pid}_{task}.conllu"
            write_conllu(sentences, out / transcript_rel)

            matrix = embed(voiced, rate, encoder, job.pooled)
            embedding_rel = f"embeddings/{pid}_{task}.emb"
            write_embedding(matrix, out / embedding_rel)

            diagnosis, mmse = job.labels.get(pid, ("", ""))
            rows.append(
                ManifestRow(
                    participant_id=pid,
                    task=task,
                    transcript_path=transcript_rel,
                    embedding_path=embedding_rel,
                    duration_seconds=duration,
                    diagnosis=diagnosis,
                    mmse=mmse,
                )
            )
            processed += 1
        except AdapterError as exc:
            # a zero-duration row would violate the manifest contract, so
            # failed files are reported here instead of written there
            failures.append(
                {"participant_id": pid, "task": task, "file": wav_path.name,
                 "error": type(exc).__name__, "message": str(exc)}
            )

    write_manifest(rows, out / "manifest.csv")
    report = {
        "processed": processed,
        "failed": len(failures),
        "failures": failures,
        "backends": {
            "vad": job.vad_id, "asr": job.asr_id,
            "parser": job.parser_id, "encoder": job.encoder_id,
        },
        "pooled": job.pooled,
    }
    (out / "adapter_report.json").write_text(
        json.dumps(report, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    return report
