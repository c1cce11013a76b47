"""Adaptive boosting (multiclass staged scheme / weighted-median resampling)
and stagewise gradient boosting for squared loss.

Classification follows the multiclass exponential-loss recipe over shallow
weighted trees: a stage is kept only while its weighted error stays below
1 - 1/K; the retained stage weights are ln((1-err)/err) + ln(K-1), always
finite and positive. Regression resamples by weight, scores stages by
normalized linear loss, rejects a stage at average loss >= 0.5, and predicts
with the alpha-weighted median. If the very first stage is rejected the model
falls back to the class-prior / target-mean predictor and is flagged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..dataset import CLASSIFICATION, N_CLASSES, Dataset
from .tree import GINI, VARIANCE, DecisionTree, fit_tree

_ERR_FLOOR = 1e-10


@dataclass(frozen=True)
class AdaBoostParams:
    n_estimators: int = 200
    learning_rate: float = 1.0
    base_depth: int = 1
    seed: int = 0


@dataclass(frozen=True)
class GradientBoostingParams:
    n_estimators: int = 300
    learning_rate: float = 0.1
    max_depth: int = 3
    seed: int = 0


def class_priors(y: np.ndarray) -> np.ndarray:
    counts = np.bincount(np.asarray(y, dtype=np.int64), minlength=N_CLASSES).astype(np.float64)
    return counts / counts.sum()


def fit_adaboost_classifier(ds: Dataset, params: AdaBoostParams):
    """Returns (trees, alphas, priors, fallback: bool)."""
    ds = ds.sorted_by_id()
    X, y, n = ds.X, ds.y, ds.n
    priors = class_priors(y)
    w = np.full(n, 1.0 / n)
    trees: list[DecisionTree] = []
    alphas: list[float] = []
    chance = 1.0 - 1.0 / N_CLASSES

    for _ in range(params.n_estimators):
        tree = fit_tree(
            X, y, criterion=GINI, max_depth=params.base_depth,
            min_samples_leaf=1, sample_weight=w,
        )
        pred = np.argmax(tree.predict(X), axis=1)
        miss = pred != y
        err = float(w[miss].sum())
        if err >= chance:
            break
        err = max(err, _ERR_FLOOR)
        alpha = params.learning_rate * (np.log((1.0 - err) / err) + np.log(N_CLASSES - 1.0))
        trees.append(tree)
        alphas.append(float(alpha))
        if not miss.any():
            break
        w = w * np.exp(alpha * miss)
        w = np.maximum(w, 1e-300)
        w /= w.sum()

    fallback = not trees
    return trees, np.asarray(alphas, dtype=np.float64), priors, fallback


def adaboost_classifier_predict(
    trees: list[DecisionTree], alphas: np.ndarray, priors: np.ndarray, X: np.ndarray
) -> np.ndarray:
    """Probability rows are the alpha-weighted vote shares."""
    n = np.asarray(X).shape[0]
    if not trees:
        return np.tile(priors, (n, 1))
    votes = np.zeros((n, N_CLASSES), dtype=np.float64)
    for tree, alpha in zip(trees, alphas):
        pred = np.argmax(tree.predict(X), axis=1)
        votes[np.arange(n), pred] += alpha
    return votes / votes.sum(axis=1, keepdims=True)


def fit_adaboost_regressor(ds: Dataset, params: AdaBoostParams):
    """Returns (trees, alphas, fallback_value or None)."""
    ds = ds.sorted_by_id()
    X, y, n = ds.X, ds.y, ds.n
    mean = float(y.mean())
    if np.allclose(y, y[0], rtol=0.0, atol=0.0):
        # Constant target: zero-stage fallback predicting that constant.
        return [], np.zeros(0, dtype=np.float64), mean

    w = np.full(n, 1.0 / n)
    trees: list[DecisionTree] = []
    alphas: list[float] = []

    for m in range(params.n_estimators):
        rng = np.random.default_rng(params.seed + m)
        idx = rng.choice(n, size=n, replace=True, p=w)
        tree = fit_tree(
            X[idx], y[idx], criterion=VARIANCE, max_depth=params.base_depth, min_samples_leaf=1
        )
        pred = tree.predict(X)
        err = np.abs(pred - y)
        emax = float(err.max())
        # Perfect stage (up to float noise in the leaf means): normalizing
        # by such an emax would turn rounding error into O(1) loss, so stop
        # here with a dominating weight instead.
        if emax <= 1e-9 * max(1.0, float(np.abs(y).max())):
            trees.append(tree)
            alphas.append(params.learning_rate * np.log(1.0 / _ERR_FLOOR))
            break
        loss = err / emax
        avg_loss = float(np.dot(w, loss))
        if avg_loss >= 0.5:
            break
        beta = max(avg_loss / (1.0 - avg_loss), _ERR_FLOOR)
        alphas.append(params.learning_rate * np.log(1.0 / beta))
        trees.append(tree)
        w = w * np.power(beta, params.learning_rate * (1.0 - loss))
        w = np.maximum(w, 1e-300)
        w /= w.sum()

    if not trees:
        return [], np.zeros(0, dtype=np.float64), mean
    return trees, np.asarray(alphas, dtype=np.float64), None


def adaboost_regressor_predict(
    trees: list[DecisionTree],
    alphas: np.ndarray,
    fallback_value: float | None,
    X: np.ndarray,
) -> np.ndarray:
    n = np.asarray(X).shape[0]
    if fallback_value is not None or not trees:
        return np.full(n, 0.0 if fallback_value is None else fallback_value)
    preds = np.stack([t.predict(X) for t in trees], axis=1)  # (n, stages)
    order = np.argsort(preds, axis=1, kind="stable")
    sorted_alpha = np.asarray(alphas)[order]
    cum = np.cumsum(sorted_alpha, axis=1)
    half = 0.5 * cum[:, -1][:, None]
    pick = np.argmax(cum >= half, axis=1)
    rows = np.arange(n)
    return preds[rows, order[rows, pick]]


def fit_gradient_boosting(ds: Dataset, params: GradientBoostingParams):
    """Returns (init_mean, trees); prediction is mean + lr * sum of trees."""
    ds = ds.sorted_by_id()
    X, y = ds.X, ds.y
    init = float(y.mean())
    current = np.full(ds.n, init)
    trees: list[DecisionTree] = []
    for _ in range(params.n_estimators):
        residual = y - current
        tree = fit_tree(
            X, residual, criterion=VARIANCE, max_depth=params.max_depth, min_samples_leaf=1
        )
        current = current + params.learning_rate * tree.predict(X)
        trees.append(tree)
    return init, trees


def gradient_boosting_predict(
    init: float, trees: list[DecisionTree], learning_rate: float, X: np.ndarray
) -> np.ndarray:
    out = np.full(np.asarray(X).shape[0], init)
    for tree in trees:
        out = out + learning_rate * tree.predict(X)
    return out
