"""Random forest on bootstrap resamples with per-split feature subsampling."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..dataset import CLASSIFICATION, Dataset
from ..errors import DegenerateDataset
from .tree import GINI, VARIANCE, DecisionTree, fit_tree


@dataclass(frozen=True)
class ForestParams:
    n_trees: int = 300
    max_depth: int | None = None
    min_samples_leaf: int = 1
    features_per_split: int | None = None  # None: floor(sqrt(D))
    seed: int = 0


def _fit_one_tree(
    t: int, X: np.ndarray, y: np.ndarray, criterion: str, params: ForestParams, k: int
) -> DecisionTree:
    # Per-tree seed is seed + tree index, so results never depend on the
    # parallel schedule used to fit the forest.
    rng = np.random.default_rng(params.seed + t)
    boot = rng.integers(0, X.shape[0], X.shape[0])
    return fit_tree(
        X[boot],
        y[boot],
        criterion=criterion,
        max_depth=params.max_depth,
        min_samples_leaf=params.min_samples_leaf,
        features_per_split=k,
        rng=rng,
    )


def fit_forest_trees(ds: Dataset, params: ForestParams, jobs: int = 1) -> list[DecisionTree]:
    if params.n_trees < 1:
        raise DegenerateDataset(f"n_trees must be >= 1, got {params.n_trees}")
    ds = ds.sorted_by_id()
    criterion = GINI if ds.task_kind == CLASSIFICATION else VARIANCE
    if ds.task_kind == CLASSIFICATION and ds.n < 2 and np.unique(ds.y).size < 2:
        raise DegenerateDataset(
            "classification requires at least 2 samples when only one class is present"
        )
    k = params.features_per_split
    if k is None:
        k = max(1, int(math.floor(math.sqrt(ds.d))))
    k = min(k, ds.d)
    indices = list(range(params.n_trees))
    if jobs > 1:
        from .._util import parallel_map

        return parallel_map(
            lambda t: _fit_one_tree(t, ds.X, ds.y, criterion, params, k), indices, jobs
        )
    return [_fit_one_tree(t, ds.X, ds.y, criterion, params, k) for t in indices]


def forest_predict(trees: list[DecisionTree], X: np.ndarray) -> np.ndarray:
    """Average of leaf probability vectors (classification) or means."""
    acc = trees[0].predict(X).astype(np.float64)
    for tree in trees[1:]:
        acc = acc + tree.predict(X)
    return acc / len(trees)
