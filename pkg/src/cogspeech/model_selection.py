"""Stratified k-fold plans and grid search.

Classification stratifies by class label; regression stratifies by quartile
bin of the target so the small MMSE cohort keeps its range balanced across
folds. Folds partition the rows exactly and per-stratum counts differ by at
most one. Grid cells walk the full Cartesian product in documented order
(sorted key order, each value list in given order); ties keep the earlier
grid point.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .dataset import CLASSIFICATION, Dataset
from .errors import CogSpeechError, TooFewSamples
from .evaluation import macro_metrics_from_confusion, confusion_matrix, rmse
from .learners import fit_model, predict, predict_labels

OBJECTIVE_MACRO_F1 = "macro_f1"
OBJECTIVE_RMSE = "rmse"


@dataclass(frozen=True)
class FoldPlan:
    k: int
    folds: tuple[tuple[int, ...], ...]
    seed: int
    stratified: bool
    warnings: tuple[str, ...] = ()

    def splits(self):
        """Yield (train_indices, val_indices) per fold."""
        all_idx = [i for fold in self.folds for i in fold]
        for fold in self.folds:
            val = set(fold)
            yield [i for i in all_idx if i not in val], list(fold)


def _quantile_bins(targets: np.ndarray, bins: int = 4) -> np.ndarray:
    qs = np.quantile(targets, np.linspace(0, 1, bins + 1)[1:-1])
    return np.searchsorted(qs, targets, side="left")


def make_folds(
    values,
    k: int = 5,
    seed: int = 0,
    stratify: bool = True,
    task_kind: str = CLASSIFICATION,
) -> FoldPlan:
    """values: class labels (classification) or real targets (regression)."""
    arr = np.asarray(values)
    n = arr.shape[0]
    if n < k:
        raise TooFewSamples(f"{n} samples cannot fill {k} folds")
    rng = np.random.default_rng(seed)
    warnings: list[str] = []

    if not stratify:
        order = rng.permutation(n)
        strata = {0: list(order)}
    else:
        keys = arr if task_kind == CLASSIFICATION else _quantile_bins(arr.astype(np.float64))
        strata = {}
        for key in sorted(set(int(x) for x in keys)):
            idx = np.flatnonzero(keys == key)
            if task_kind == CLASSIFICATION and idx.size < k:
                warnings.append(
                    f"class {key} has {idx.size} samples (< k={k}); it will be absent from some folds"
                )
            strata[key] = list(rng.permutation(idx))

    folds: list[list[int]] = [[] for _ in range(k)]
    offset = 0
    for key in sorted(strata):
        for j, row in enumerate(strata[key]):
            folds[(j + offset) % k].append(int(row))
        offset += len(strata[key]) % k
    return FoldPlan(
        k=k,
        folds=tuple(tuple(sorted(f)) for f in folds),
        seed=seed,
        stratified=stratify,
        warnings=tuple(warnings),
    )


def fold_metric(ds: Dataset, model_kind: str, params: dict, train_idx, val_idx, jobs: int = 1) -> dict:
    model = fit_model(model_kind, ds.subset(train_idx), params, jobs=jobs)
    val = ds.subset(val_idx)
    if ds.task_kind == CLASSIFICATION:
        labels = predict_labels(model, val.X, val.columns)
        m = macro_metrics_from_confusion(confusion_matrix(val.y, labels))
        return {
            "macro_precision": m.macro_precision,
            "macro_recall": m.macro_recall,
            "macro_f1": m.macro_f1,
        }
    preds = predict(model, val.X, val.columns)
    return {"rmse": rmse(val.y, preds)}


def grid_points(grid: dict) -> list[dict]:
    if not grid:
        raise CogSpeechError("grid must contain at least one hyperparameter")
    keys = sorted(grid)
    return [dict(zip(keys, combo)) for combo in itertools.product(*(grid[k] for k in keys))]


def grid_search(
    ds: Dataset,
    model_kind: str,
    grid: dict,
    folds: FoldPlan,
    objective: str,
    base_params: dict | None = None,
    seed: int = 0,
    jobs: int = 1,
):
    """Full Cartesian product; returns (best_params, results).

    Each results row carries the grid point, per-fold scores, and the mean
    objective; a failed cell records its error instead of aborting the search.
    """
    if objective not in (OBJECTIVE_MACRO_F1, OBJECTIVE_RMSE):
        raise CogSpeechError(f"unknown objective {objective!r}")
    maximize = objective == OBJECTIVE_MACRO_F1
    results = []
    best_params: dict | None = None
    best_score: float | None = None

    for point in grid_points(grid):
        params = dict(base_params or {})
        params.update(point)
        params.setdefault("seed", seed)
        row = {"params": dict(point), "fold_scores": [], "mean": None, "error": None}
        try:
            scores = []
            for train_idx, val_idx in folds.splits():
                metrics = fold_metric(ds, model_kind, params, train_idx, val_idx, jobs=jobs)
                scores.append(metrics[objective])
            row["fold_scores"] = scores
            row["mean"] = float(np.mean(scores))
        except CogSpeechError as exc:
            row["error"] = f"{type(exc).__name__}: {exc}"
            results.append(row)
            continue
        results.append(row)
        better = (
            best_score is None
            or (maximize and row["mean"] > best_score)
            or (not maximize and row["mean"] < best_score)
        )
        if better:
            best_score = row["mean"]
            best_params = params
    if best_params is None:
        raise CogSpeechError("every grid cell failed")
    return best_params, results
