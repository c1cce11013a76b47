"""Cohort manifest: one row per (participant, task) recording.

Delimiter-separated values with the exact header
participant_id,task,transcript_path,embedding_path,duration_seconds,diagnosis,mmse
Optional fields are written as empty strings. Duration lives here, not in the
transcript file, because it comes from the audio.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Union

from .errors import (
    DuplicateTaskRow,
    MissingColumn,
    MmseOutOfRange,
    NonPositiveDuration,
    UnknownDiagnosisLabel,
    UnknownTaskLabel,
)
from .transcripts import Task, TASK_ORDER

DIAGNOSES = ("HC", "MCI", "AD")

MANIFEST_HEADER = (
    "participant_id",
    "task",
    "transcript_path",
    "embedding_path",
    "duration_seconds",
    "diagnosis",
    "mmse",
)


@dataclass(frozen=True)
class ManifestRow:
    participant_id: str
    task: Task
    transcript_path: str
    embedding_path: str | None
    duration_seconds: float
    diagnosis: str | None
    mmse: int | None


@dataclass(frozen=True)
class CohortManifest:
    rows: tuple[ManifestRow, ...]

    @property
    def participant_ids(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for row in self.rows:
            seen.setdefault(row.participant_id, None)
        return tuple(seen)

    def rows_for(self, participant_id: str) -> tuple[ManifestRow, ...]:
        return tuple(r for r in self.rows if r.participant_id == participant_id)

    def rows_for_task(self, task: Task) -> tuple[ManifestRow, ...]:
        return tuple(r for r in self.rows if r.task == task)


Source = Union[str, Path, bytes, IO[bytes], IO[str]]


def _text_stream(source: Source) -> IO[str]:
    if isinstance(source, (str, Path)):
        data = Path(source).read_bytes()
    elif isinstance(source, bytes):
        data = source
    else:
        read = source.read()
        return io.StringIO(read) if isinstance(read, str) else io.StringIO(read.decode("utf-8"))
    try:
        return io.StringIO(data.decode("utf-8"))
    except UnicodeDecodeError as exc:
        raise MissingColumn(f"manifest is not valid UTF-8: {exc}") from exc


def parse_manifest(source: Source) -> CohortManifest:
    stream = _text_stream(source)
    try:
        reader = csv.reader(stream)
        raw_rows = list(reader)
    except csv.Error as exc:
        raise MissingColumn(f"manifest is not parseable as delimiter-separated values: {exc}") from exc

    if not raw_rows:
        raise MissingColumn("manifest is empty, expected a header line")
    header = tuple(c.strip() for c in raw_rows[0])
    if header != MANIFEST_HEADER:
        raise MissingColumn(
            f"manifest header must be exactly {','.join(MANIFEST_HEADER)}, got {','.join(header)}"
        )

    rows: list[ManifestRow] = []
    seen: set[tuple[str, Task]] = set()
    for line_no, cells in enumerate(raw_rows[1:], start=2):
        if not cells or (len(cells) == 1 and not cells[0].strip()):
            continue
        if len(cells) != len(MANIFEST_HEADER):
            raise MissingColumn(
                f"row {line_no}: expected {len(MANIFEST_HEADER)} fields, got {len(cells)}"
            )
        pid, task_s, tpath, epath, dur_s, diag, mmse_s = (c.strip() for c in cells)
        if not pid:
            raise MissingColumn(f"row {line_no}: participant_id is empty")
        try:
            task = Task(task_s)
        except ValueError as exc:
            raise UnknownTaskLabel(f"row {line_no}: task {task_s!r} not in {{CTD,SF,PF}}") from exc
        key = (pid, task)
        if key in seen:
            raise DuplicateTaskRow(f"row {line_no}: duplicate row for participant {pid!r} task {task}")
        seen.add(key)
        try:
            duration = float(dur_s)
        except ValueError as exc:
            raise NonPositiveDuration(f"row {line_no}: duration {dur_s!r} is not a number") from exc
        if not duration > 0:
            raise NonPositiveDuration(f"row {line_no}: duration must be > 0, got {duration}")
        if diag and diag not in DIAGNOSES:
            raise UnknownDiagnosisLabel(f"row {line_no}: diagnosis {diag!r} not in {{HC,MCI,AD}}")
        mmse: int | None = None
        if mmse_s:
            try:
                mmse = int(mmse_s)
            except ValueError as exc:
                raise MmseOutOfRange(f"row {line_no}: mmse {mmse_s!r} is not an integer") from exc
            if not 0 <= mmse <= 30:
                raise MmseOutOfRange(f"row {line_no}: mmse {mmse} outside [0, 30]")
        rows.append(
            ManifestRow(
                participant_id=pid,
                task=task,
                transcript_path=tpath,
                embedding_path=epath or None,
                duration_seconds=duration,
                diagnosis=diag or None,
                mmse=mmse,
            )
        )
    return CohortManifest(rows=tuple(rows))


def write_manifest(manifest: CohortManifest, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(MANIFEST_HEADER)
        for r in manifest.rows:
            writer.writerow(
                [
                    r.participant_id,
                    r.task.value,
                    r.transcript_path,
                    r.embedding_path or "",
                    repr(float(r.duration_seconds)),
                    r.diagnosis or "",
                    "" if r.mmse is None else str(r.mmse),
                ]
            )


def merge_manifests(manifests: list[CohortManifest]) -> CohortManifest:
    """Union of rows; a (participant, task) collision across files is an error."""
    rows: list[ManifestRow] = []
    seen: set[tuple[str, Task]] = set()
    for m in manifests:
        for r in m.rows:
            key = (r.participant_id, r.task)
            if key in seen:
                raise DuplicateTaskRow(
                    f"participant {r.participant_id!r} task {r.task} appears in more than one manifest"
                )
            seen.add(key)
            rows.append(r)
    return CohortManifest(rows=tuple(rows))


@dataclass(frozen=True)
class Finding:
    participant_id: str
    kind: str
    message: str
    blocking: bool


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[Finding, ...]
    retained_participants: int | None  # regression mode only

    @property
    def blocking(self) -> tuple[Finding, ...]:
        return tuple(f for f in self.findings if f.blocking)


def validate_cohort(
    manifest: CohortManifest,
    mode: str,
    base_dir: str | Path | None = None,
    check_files: bool = False,
) -> ValidationReport:
    """Per-participant findings; never raises on cohort-content problems.

    Classification mode treats a missing diagnosis as blocking. Regression
    mode filters to MMSE-bearing participants instead of erroring and reports
    the retained count. With check_files=True, referenced transcript files
    must exist on disk (resolved against base_dir).
    """
    if mode not in ("classification", "regression"):
        raise ValueError(f"mode must be classification or regression, got {mode!r}")
    base = Path(base_dir) if base_dir is not None else None
    findings: list[Finding] = []
    retained = 0

    for pid in manifest.participant_ids:
        rows = manifest.rows_for(pid)
        tasks_present = {r.task for r in rows}
        for task in TASK_ORDER:
            if task not in tasks_present:
                findings.append(
                    Finding(pid, "missing_task", f"missing task {task}", blocking=False)
                )
        diagnoses = {r.diagnosis for r in rows if r.diagnosis is not None}
        if len(diagnoses) > 1:
            findings.append(
                Finding(pid, "inconsistent_label", f"conflicting diagnoses {sorted(diagnoses)}", True)
            )
        if mode == "classification" and not diagnoses:
            findings.append(Finding(pid, "missing_label", "no diagnosis label", blocking=True))
        mmses = {r.mmse for r in rows if r.mmse is not None}
        if len(mmses) > 1:
            findings.append(
                Finding(pid, "inconsistent_mmse", f"conflicting MMSE values {sorted(mmses)}", True)
            )
        if mode == "regression":
            if mmses:
                retained += 1
            else:
                findings.append(
                    Finding(pid, "missing_mmse", "no MMSE score, excluded from regression", False)
                )
        if not any(r.embedding_path for r in rows):
            findings.append(
                Finding(pid, "missing_embedding", "no row has an embedding file", blocking=False)
            )
        for r in rows:
            if not r.transcript_path:
                findings.append(
                    Finding(pid, "missing_transcript_path", f"task {r.task}: no transcript path", True)
                )
            elif check_files:
                p = Path(r.transcript_path)
                if base is not None and not p.is_absolute():
                    p = base / p
                if not p.exists():
                    findings.append(
                        Finding(pid, "missing_transcript_file", f"task {r.task}: {p} does not exist", True)
                    )
                ep = r.embedding_path
                if ep:
                    q = Path(ep)
                    if base is not None and not q.is_absolute():
                        q = base / q
                    if not q.exists():
                        findings.append(
                            Finding(pid, "missing_embedding_file", f"task {r.task}: {q} does not exist", True)
                        )

    return ValidationReport(
        findings=tuple(findings),
        retained_participants=retained if mode == "regression" else None,
    )
