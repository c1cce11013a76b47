"""End-to-end runs: manifests -> features -> fit -> predict -> metrics.

Relative transcript/embedding paths resolve against each manifest's own
directory. Everything downstream of the run seed is deterministic, so a rerun
with the same inputs produces byte-identical feature tables, model files,
predictions, and reports.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import IO, Sequence

import numpy as np

from ._util import parallel_map
from .dataset import CLASSIFICATION, LABEL_TO_INDEX, LABELS, REGRESSION, Dataset
from .embeddings import DEFAULT_EMBEDDING_DIM, join_embeddings
from .ensembles import SubmissionConfig, fit_ensemble
from .errors import DatasetError, MissingColumn
from .evaluation import (
    EvalReport,
    classification_report,
    confusion_matrix,
    macro_metrics_from_confusion,
    regression_report,
    rmse,
)
from .features import (
    DEFAULT_FEATURE_CONFIG,
    FeatureConfig,
    PARTICIPANT_COLUMNS,
    ParticipantFeatureVector,
    assemble_participant_vector,
    extract_task_features,
    write_feature_table,
)
from .learners import TrainedModel, predict, predict_labels
from .manifest import CohortManifest, parse_manifest, merge_manifests
from .model_selection import fold_metric, make_folds
from .transcripts import parse_transcript


@dataclass(frozen=True)
class RunOptions:
    seed: int = 0
    k: int = 5
    jobs: int = 1
    missing_task_policy: str = "zero_fill"
    expected_dim: int = DEFAULT_EMBEDDING_DIM
    feature_config: FeatureConfig = field(default_factory=lambda: DEFAULT_FEATURE_CONFIG)


def load_manifests(paths: Sequence[str | Path]) -> tuple[CohortManifest, dict[str, Path]]:
    """Merge manifests; returns the manifest and a per-participant base dir map.

    Row paths stay relative; the map remembers which manifest directory each
    participant's rows resolve against.
    """
    manifests = []
    base_by_pid: dict[str, Path] = {}
    for p in paths:
        p = Path(p)
        m = parse_manifest(p)
        manifests.append(m)
        for pid in m.participant_ids:
            base_by_pid[pid] = p.parent
    return merge_manifests(manifests), base_by_pid


def linguistic_vectors(
    manifest: CohortManifest,
    base_by_pid: dict[str, Path],
    config: FeatureConfig = DEFAULT_FEATURE_CONFIG,
    policy: str = "zero_fill",
    jobs: int = 1,
) -> list[ParticipantFeatureVector]:
    """42-dim vector per participant, sorted by participant id."""

    def one(pid: str) -> ParticipantFeatureVector:
        base = base_by_pid.get(pid, Path("."))
        per_task = {}
        for row in manifest.rows_for(pid):
            if not row.transcript_path:
                continue
            path = Path(row.transcript_path)
            if not path.is_absolute():
                path = base / path
            transcript = parse_transcript(
                path, pid, row.task, row.duration_seconds, config.filler_lexicon
            )
            per_task[row.task] = extract_task_features(transcript, config)
        return assemble_participant_vector(pid, per_task, policy)

    pids = sorted(manifest.participant_ids)
    return parallel_map(one, pids, jobs)


def _targets(
    manifest: CohortManifest, pids: list[str], task_kind: str
) -> tuple[list[str], np.ndarray]:
    """Participants that carry the needed target, with encoded targets."""
    keep: list[str] = []
    values: list[float] = []
    for pid in pids:
        rows = manifest.rows_for(pid)
        if task_kind == CLASSIFICATION:
            diags = {r.diagnosis for r in rows if r.diagnosis}
            if len(diags) != 1:
                continue
            keep.append(pid)
            values.append(LABEL_TO_INDEX[diags.pop()])
        else:
            mmses = {r.mmse for r in rows if r.mmse is not None}
            if len(mmses) != 1:
                continue
            keep.append(pid)
            values.append(float(mmses.pop()))
    return keep, np.asarray(values)


def build_dataset(
    manifest: CohortManifest,
    base_by_pid: dict[str, Path],
    feature_source: str,
    task_kind: str,
    opts: RunOptions,
    require_targets: bool = True,
) -> Dataset:
    if feature_source == "linguistic_42":
        vectors = linguistic_vectors(
            manifest, base_by_pid, opts.feature_config, opts.missing_task_policy, opts.jobs
        )
        by_pid = {v.participant_id: np.asarray(v.values) for v in vectors}
        columns = PARTICIPANT_COLUMNS
    elif feature_source == "embedding_ctd":
        pooled = []
        for pid in sorted(manifest.participant_ids):
            sub = CohortManifest(rows=manifest.rows_for(pid))
            got, findings = join_embeddings(
                sub, expected_dim=opts.expected_dim, base_dir=base_by_pid.get(pid, Path("."))
            )
            blocking = [f for f in findings if f.blocking]
            if blocking:
                raise DatasetError(f"participant {pid}: {blocking[0].message}")
            pooled.extend(got)
        by_pid = {pid: emb.values for pid, emb in pooled}
        columns = tuple(f"emb_{i:04d}" for i in range(opts.expected_dim))
    else:
        raise DatasetError(f"unknown feature source {feature_source!r}")

    pids = sorted(by_pid)
    if require_targets:
        pids, y = _targets(manifest, pids, task_kind)
        if not pids:
            raise DatasetError(f"no participants carry a {task_kind} target")
    else:
        kept, y_kept = _targets(manifest, pids, task_kind)
        lookup = dict(zip(kept, y_kept))
        y = np.asarray(
            [lookup.get(pid, 0 if task_kind == CLASSIFICATION else 0.0) for pid in pids]
        )
    X = np.stack([by_pid[pid] for pid in pids])
    return Dataset(X=X, y=y, task_kind=task_kind, columns=columns, ids=tuple(pids))


def config_fingerprint(config: SubmissionConfig, opts: RunOptions) -> str:
    payload = {
        "config": asdict(config),
        "seed": opts.seed,
        "k": opts.k,
        "missing_task_policy": opts.missing_task_policy,
        "expected_dim": opts.expected_dim,
    }
    return hashlib.sha256(
        json.dumps(payload, sort_keys=True, default=str).encode("utf-8")
    ).hexdigest()


def write_predictions(
    ids: Sequence[str], preds: np.ndarray, task_kind: str, sink: str | Path | IO[str]
) -> None:
    own = isinstance(sink, (str, Path))
    fh: IO[str] = open(sink, "w", encoding="utf-8", newline="") if own else sink  # type: ignore[arg-type]
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("participant_id", "prediction"))
        for pid, value in zip(ids, preds):
            if task_kind == CLASSIFICATION:
                writer.writerow((pid, LABELS[int(value)]))
            else:
                writer.writerow((pid, repr(float(value))))
    finally:
        if own:
            fh.close()


def read_predictions(source: str | Path) -> list[tuple[str, str]]:
    with open(source, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != ("participant_id", "prediction"):
            raise MissingColumn("predictions file must start with participant_id,prediction")
        return [(row[0], row[1]) for row in reader if row]


def run_training(
    config: SubmissionConfig,
    train_manifest_paths: Sequence[str | Path],
    opts: RunOptions,
) -> tuple[TrainedModel, Dataset]:
    manifest, bases = load_manifests(train_manifest_paths)
    ds = build_dataset(manifest, bases, config.feature_source, config.task_kind, opts)
    model = fit_ensemble(ds, config, seed=opts.seed, jobs=opts.jobs)
    return model, ds


def run_pipeline(
    config: SubmissionConfig,
    train_manifest_paths: Sequence[str | Path],
    test_manifest_path: str | Path,
    out_dir: str | Path,
    opts: RunOptions = RunOptions(),
) -> EvalReport:
    """Train on the training manifests, predict the test manifest, write
    predictions.csv and report.json under out_dir, and return the report."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    model, train_ds = run_training(config, train_manifest_paths, opts)

    test_manifest, test_bases = load_manifests([test_manifest_path])
    has_targets = _targets(
        test_manifest, sorted(test_manifest.participant_ids), config.task_kind
    )[0]
    test_ds = build_dataset(
        test_manifest, test_bases, config.feature_source, config.task_kind, opts,
        require_targets=bool(has_targets),
    )

    fingerprint = config_fingerprint(config, opts)
    if config.task_kind == CLASSIFICATION:
        preds = predict_labels(model, test_ds.X, test_ds.columns)
    else:
        preds = predict(model, test_ds.X, test_ds.columns)
    write_predictions(test_ds.ids, preds, config.task_kind, out / "predictions.csv")

    if has_targets:
        if config.task_kind == CLASSIFICATION:
            report = classification_report(test_ds.y, preds, config_fingerprint=fingerprint)
        else:
            report = regression_report(test_ds.y, preds, config_fingerprint=fingerprint)
    else:
        report = EvalReport(
            task_kind=config.task_kind,
            n=test_ds.n,
            config_fingerprint=fingerprint,
            warnings=("test manifest carries no ground-truth targets",),
        )
    (out / "report.json").write_text(report.to_json(), encoding="utf-8")
    return report


def run_cv(
    config: SubmissionConfig,
    manifest_paths: Sequence[str | Path],
    opts: RunOptions = RunOptions(),
) -> EvalReport:
    """k-fold cross-validation of the configured ensemble on one cohort."""
    manifest, bases = load_manifests(manifest_paths)
    ds = build_dataset(manifest, bases, config.feature_source, config.task_kind, opts)
    folds = make_folds(ds.y, k=opts.k, seed=opts.seed, stratify=True, task_kind=ds.task_kind)
    fingerprint = config_fingerprint(config, opts)

    per_fold = []
    all_true: list = []
    all_pred: list = []
    for fold_no, (train_idx, val_idx) in enumerate(folds.splits()):
        model = fit_ensemble(ds.subset(train_idx), config, seed=opts.seed, jobs=opts.jobs)
        val = ds.subset(val_idx)
        if config.task_kind == CLASSIFICATION:
            labels = predict_labels(model, val.X, val.columns)
            m = macro_metrics_from_confusion(confusion_matrix(val.y, labels))
            per_fold.append(
                {
                    "fold": fold_no,
                    "macro_precision": m.macro_precision,
                    "macro_recall": m.macro_recall,
                    "macro_f1": m.macro_f1,
                }
            )
            all_true.extend(int(v) for v in val.y)
            all_pred.extend(int(v) for v in labels)
        else:
            preds = predict(model, val.X, val.columns)
            per_fold.append({"fold": fold_no, "rmse": rmse(val.y, preds)})
            all_true.extend(float(v) for v in val.y)
            all_pred.extend(float(v) for v in preds)

    warnings = folds.warnings
    if config.task_kind == CLASSIFICATION:
        return classification_report(
            all_true, all_pred, per_fold=per_fold, config_fingerprint=fingerprint, warnings=warnings
        )
    return regression_report(
        all_true, all_pred, per_fold=per_fold, config_fingerprint=fingerprint, warnings=warnings
    )
