import numpy as np
import pytest

from _corpus import blob_dataset
from cogspeech.dataset import CLASSIFICATION, Dataset, REGRESSION
from cogspeech.errors import TooFewSamples
from cogspeech.model_selection import grid_points, grid_search, make_folds


def test_paper_shaped_cohort_fold_balance():
    # 117 rows: 61 HC, 44 MCI, 12 AD
    labels = np.array([0] * 61 + [1] * 44 + [2] * 12)
    plan = make_folds(labels, k=5, seed=0)
    assert sorted(i for fold in plan.folds for i in fold) == list(range(117))
    for c, total in ((0, 61), (1, 44), (2, 12)):
        per_fold = [sum(1 for i in fold if labels[i] == c) for fold in plan.folds]
        assert sum(per_fold) == total
        assert max(per_fold) - min(per_fold) <= 1


def test_singleton_folds():
    plan = make_folds(np.array([0, 1, 2, 0, 1]), k=5, seed=1)
    assert all(len(f) == 1 for f in plan.folds)


def test_same_seed_same_plan():
    labels = np.random.default_rng(0).integers(0, 3, 60)
    a = make_folds(labels, k=5, seed=9)
    b = make_folds(labels, k=5, seed=9)
    assert a == b


def test_different_seed_differs():
    labels = np.random.default_rng(0).integers(0, 3, 60)
    a = make_folds(labels, k=5, seed=1)
    b = make_folds(labels, k=5, seed=2)
    assert a.folds != b.folds


def test_too_few_samples():
    with pytest.raises(TooFewSamples):
        make_folds(np.array([0, 1]), k=5, seed=0)


def test_class_smaller_than_k_warns():
    labels = np.array([0] * 20 + [1] * 20 + [2] * 2)
    plan = make_folds(labels, k=5, seed=0)
    assert any("class 2" in w for w in plan.warnings)


def test_regression_quantile_stratification():
    rng = np.random.default_rng(3)
    targets = rng.uniform(19, 30, 69)
    plan = make_folds(targets, k=5, seed=0, task_kind=REGRESSION)
    assert sorted(i for fold in plan.folds for i in fold) == list(range(69))
    # every fold spans the target range reasonably: contains low and high bins
    qs = np.quantile(targets, [0.25, 0.75])
    for fold in plan.folds:
        vals = targets[list(fold)]
        assert vals.min() <= qs[0] + 3
        assert vals.max() >= qs[1] - 3


def test_grid_points_order_sorted_keys_then_given_values():
    pts = grid_points({"b": [1, 2], "a": [10, 20]})
    assert pts == [
        {"a": 10, "b": 1}, {"a": 10, "b": 2}, {"a": 20, "b": 1}, {"a": 20, "b": 2},
    ]


def test_singleton_grid_returns_that_point():
    ds = blob_dataset(12, 4)
    folds = make_folds(ds.y, k=3, seed=0)
    best, results = grid_search(
        ds, "random_forest", {"n_trees": [7]}, folds, "macro_f1", seed=0
    )
    assert best["n_trees"] == 7
    assert len(results) == 1
    assert results[0]["error"] is None
    assert len(results[0]["fold_scores"]) == 3


def test_grid_results_row_count_is_product():
    ds = blob_dataset(10, 4)
    folds = make_folds(ds.y, k=2, seed=0)
    _, results = grid_search(
        ds,
        "random_forest",
        {"n_trees": [3, 9], "min_samples_leaf": [1, 2], "max_depth": [None, 2]},
        folds,
        "macro_f1",
        seed=0,
    )
    assert len(results) == 8


def test_bigger_model_wins_on_separable_data():
    ds = blob_dataset(20, 6, sep=2.0)
    folds = make_folds(ds.y, k=4, seed=0)
    best, results = grid_search(
        ds, "random_forest", {"n_trees": [1, 100]}, folds, "macro_f1", seed=0
    )
    assert best["n_trees"] == 100
    means = {r["params"]["n_trees"]: r["mean"] for r in results}
    assert means[100] >= means[1]


def test_winner_dominates_all_rows():
    ds = blob_dataset(15, 5, sep=1.0)
    folds = make_folds(ds.y, k=3, seed=1)
    best, results = grid_search(
        ds, "random_forest", {"n_trees": [2, 5, 20], "min_samples_leaf": [1, 3]},
        folds, "macro_f1", seed=0,
    )
    best_mean = max(r["mean"] for r in results if r["error"] is None)
    winner_rows = [r for r in results if all(best.get(k) == v for k, v in r["params"].items())]
    assert winner_rows[0]["mean"] == best_mean


def test_failed_cell_recorded_not_fatal():
    ds = blob_dataset(10, 4)
    folds = make_folds(ds.y, k=2, seed=0)
    best, results = grid_search(
        ds, "random_forest", {"n_trees": [-1, 5]}, folds, "macro_f1", seed=0
    )
    errors = [r["error"] for r in results]
    assert errors[0] is not None and errors[1] is None
    assert best["n_trees"] == 5


def test_regression_objective_minimizes():
    rng = np.random.default_rng(0)
    X = rng.uniform(0, 10, size=(40, 2))
    y = np.clip(2.5 * X[:, 0] + 2, 0, 30)
    ds = Dataset(X=X, y=y, task_kind=REGRESSION, columns=("a", "b"),
                 ids=tuple(f"p{i:02d}" for i in range(40)))
    folds = make_folds(ds.y, k=3, seed=0, task_kind=REGRESSION)
    best, results = grid_search(
        ds, "gradient_boosting", {"n_estimators": [1, 80]}, folds, "rmse", seed=0
    )
    assert best["n_estimators"] == 80
    means = {r["params"]["n_estimators"]: r["mean"] for r in results}
    assert means[80] <= means[1]
