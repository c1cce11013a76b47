"""Challenge metrics: macro precision/recall/F1 and RMSE.

Macro F1 is the harmonic mean of macro precision and macro recall. The more
common average of per-class F1 scores is also reported (as
macro_f1_per_class_avg) for comparison but never used for selection. The
macro quantities are computed in exact rational arithmetic and converted to
float once at the edge, so they match any correct confusion-matrix oracle
bit for bit. A class absent from both truth and prediction contributes
precision = recall = 0 and is flagged, not an error: the smallest diagnosis
class has few samples and empty-prediction classes occur in practice.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .dataset import LABELS, LABEL_TO_INDEX, N_CLASSES
from .errors import EmptyInput, LengthMismatch


def encode_labels(labels: Sequence) -> np.ndarray:
    out = np.empty(len(labels), dtype=np.int64)
    for i, lab in enumerate(labels):
        if isinstance(lab, str):
            if lab not in LABEL_TO_INDEX:
                raise LengthMismatch(f"unknown class label {lab!r}")
            out[i] = LABEL_TO_INDEX[lab]
        else:
            v = int(lab)
            if not 0 <= v < N_CLASSES:
                raise LengthMismatch(f"class index {v} outside 0..{N_CLASSES - 1}")
            out[i] = v
    return out


def confusion_matrix(y_true: Sequence, y_pred: Sequence) -> np.ndarray:
    """3x3 counts, rows = true class, columns = predicted class."""
    t = encode_labels(y_true)
    p = encode_labels(y_pred)
    if t.shape != p.shape:
        raise LengthMismatch(f"{t.shape[0]} true labels vs {p.shape[0]} predictions")
    if t.size == 0:
        raise EmptyInput("cannot evaluate zero predictions")
    cm = np.zeros((N_CLASSES, N_CLASSES), dtype=np.int64)
    np.add.at(cm, (t, p), 1)
    return cm


@dataclass(frozen=True)
class MacroMetrics:
    macro_precision: float
    macro_recall: float
    macro_f1: float
    macro_f1_per_class_avg: float
    per_class_precision: tuple[float, ...]
    per_class_recall: tuple[float, ...]
    zero_division_classes: tuple[str, ...]


def macro_metrics_from_confusion(cm: np.ndarray) -> MacroMetrics:
    zero_div: list[str] = []
    precisions: list[Fraction] = []
    recalls: list[Fraction] = []
    f1s: list[Fraction] = []
    for c in range(N_CLASSES):
        tp = int(cm[c, c])
        pred_c = int(cm[:, c].sum())
        true_c = int(cm[c, :].sum())
        if pred_c == 0 or true_c == 0:
            zero_div.append(LABELS[c])
        p = Fraction(tp, pred_c) if pred_c else Fraction(0)
        r = Fraction(tp, true_c) if true_c else Fraction(0)
        precisions.append(p)
        recalls.append(r)
        f1s.append(2 * p * r / (p + r) if p + r else Fraction(0))
    macro_p = sum(precisions) / N_CLASSES
    macro_r = sum(recalls) / N_CLASSES
    macro_f1 = 2 * macro_p * macro_r / (macro_p + macro_r) if macro_p + macro_r else Fraction(0)
    return MacroMetrics(
        macro_precision=float(macro_p),
        macro_recall=float(macro_r),
        macro_f1=float(macro_f1),
        macro_f1_per_class_avg=float(sum(f1s) / N_CLASSES),
        per_class_precision=tuple(float(p) for p in precisions),
        per_class_recall=tuple(float(r) for r in recalls),
        zero_division_classes=tuple(zero_div),
    )


def macro_metrics(y_true: Sequence, y_pred: Sequence) -> tuple[float, float, float]:
    m = macro_metrics_from_confusion(confusion_matrix(y_true, y_pred))
    return m.macro_precision, m.macro_recall, m.macro_f1


def rmse(y_true: Sequence[float], y_pred: Sequence[float]) -> float:
    t = np.asarray(y_true, dtype=np.float64)
    p = np.asarray(y_pred, dtype=np.float64)
    if t.shape != p.shape:
        raise LengthMismatch(f"{t.shape} true values vs {p.shape} predictions")
    if t.size == 0:
        raise EmptyInput("cannot evaluate zero predictions")
    return float(np.sqrt(np.mean(np.square(t - p))))


@dataclass(frozen=True)
class EvalReport:
    task_kind: str
    n: int
    confusion: tuple[tuple[int, ...], ...] | None = None
    macro_precision: float | None = None
    macro_recall: float | None = None
    macro_f1: float | None = None
    macro_f1_per_class_avg: float | None = None
    zero_division_classes: tuple[str, ...] = ()
    rmse: float | None = None
    per_fold: tuple[dict, ...] = ()
    config_fingerprint: str = ""
    warnings: tuple[str, ...] = ()

    def to_json(self) -> str:
        payload = {
            "task_kind": self.task_kind,
            "n": self.n,
            "confusion": None if self.confusion is None else [list(r) for r in self.confusion],
            "labels": list(LABELS),
            "macro_precision": self.macro_precision,
            "macro_recall": self.macro_recall,
            "macro_f1": self.macro_f1,
            "macro_f1_per_class_avg": self.macro_f1_per_class_avg,
            "zero_division_classes": list(self.zero_division_classes),
            "rmse": self.rmse,
            "per_fold": [dict(sorted(d.items())) for d in self.per_fold],
            "config_fingerprint": self.config_fingerprint,
            "warnings": list(self.warnings),
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def classification_report(
    y_true: Sequence, y_pred: Sequence, per_fold=(), config_fingerprint="", warnings=()
) -> EvalReport:
    cm = confusion_matrix(y_true, y_pred)
    m = macro_metrics_from_confusion(cm)
    return EvalReport(
        task_kind="classification",
        n=int(cm.sum()),
        confusion=tuple(tuple(int(x) for x in row) for row in cm),
        macro_precision=m.macro_precision,
        macro_recall=m.macro_recall,
        macro_f1=m.macro_f1,
        macro_f1_per_class_avg=m.macro_f1_per_class_avg,
        zero_division_classes=m.zero_division_classes,
        per_fold=tuple(per_fold),
        config_fingerprint=config_fingerprint,
        warnings=tuple(warnings),
    )


def regression_report(
    y_true: Sequence[float], y_pred: Sequence[float], per_fold=(), config_fingerprint="", warnings=()
) -> EvalReport:
    return EvalReport(
        task_kind="regression",
        n=len(np.asarray(y_true)),
        rmse=rmse(y_true, y_pred),
        per_fold=tuple(per_fold),
        config_fingerprint=config_fingerprint,
        warnings=tuple(warnings),
    )
