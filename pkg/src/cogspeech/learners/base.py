"""Uniform fit/predict surface over the four base learners.

Classifiers always return probability rows summing to 1; regressors return
reals clamped to the MMSE range [0, 30]. predict rejects feature matrices
whose schema (width and column names) differs from the training schema.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np

from ..dataset import CLASSIFICATION, REGRESSION, Dataset
from ..errors import BadConfigValue, DatasetError, SchemaMismatch
from .boosting import (
    AdaBoostParams,
    GradientBoostingParams,
    adaboost_classifier_predict,
    adaboost_regressor_predict,
    fit_adaboost_classifier,
    fit_adaboost_regressor,
    fit_gradient_boosting,
    gradient_boosting_predict,
)
from .forest import ForestParams, fit_forest_trees, forest_predict
from .network import DnnParams, fit_network, network_predict

MMSE_RANGE = (0.0, 30.0)

RANDOM_FOREST = "random_forest"
ADABOOST = "adaboost"
GRADIENT_BOOSTING = "gradient_boosting"
DNN = "dnn"
VOTING = "voting"

_PARAM_TYPES = {
    RANDOM_FOREST: ForestParams,
    ADABOOST: AdaBoostParams,
    GRADIENT_BOOSTING: GradientBoostingParams,
    DNN: DnnParams,
}


@dataclass(frozen=True)
class TrainedModel:
    kind: str
    task_kind: str
    params: dict
    columns: tuple[str, ...]
    seed: int
    dataset_fingerprint: str
    state: dict[str, Any]
    flags: tuple[str, ...] = ()


def coerce_params(kind: str, params) -> Any:
    ptype = _PARAM_TYPES[kind]
    if isinstance(params, ptype):
        return params
    try:
        out = ptype(**dict(params or {}))
    except TypeError as exc:
        raise BadConfigValue(f"bad hyperparameters for {kind}: {exc}") from exc
    if kind == DNN and not isinstance(out.hidden_sizes, tuple):
        out = DnnParams(**{**asdict(out), "hidden_sizes": tuple(out.hidden_sizes)})
    return out


def fit_random_forest(ds: Dataset, params=None, jobs: int = 1) -> TrainedModel:
    p: ForestParams = coerce_params(RANDOM_FOREST, params)
    trees = fit_forest_trees(ds, p, jobs=jobs)
    return TrainedModel(
        kind=RANDOM_FOREST,
        task_kind=ds.task_kind,
        params=asdict(p),
        columns=ds.columns,
        seed=p.seed,
        dataset_fingerprint=ds.fingerprint(),
        state={"trees": trees},
    )


def fit_adaboost(ds: Dataset, params=None) -> TrainedModel:
    p: AdaBoostParams = coerce_params(ADABOOST, params)
    flags: tuple[str, ...] = ()
    if ds.task_kind == CLASSIFICATION:
        trees, alphas, priors, fallback = fit_adaboost_classifier(ds, p)
        state = {"trees": trees, "alphas": alphas, "priors": priors}
        if fallback:
            flags = ("all_stages_rejected",)
    else:
        trees, alphas, fallback_value = fit_adaboost_regressor(ds, p)
        state = {"trees": trees, "alphas": alphas, "fallback_value": fallback_value}
        if fallback_value is not None:
            flags = ("all_stages_rejected",)
    return TrainedModel(
        kind=ADABOOST,
        task_kind=ds.task_kind,
        params=asdict(p),
        columns=ds.columns,
        seed=p.seed,
        dataset_fingerprint=ds.fingerprint(),
        state=state,
        flags=flags,
    )


def fit_gradient_boosting_model(ds: Dataset, params=None) -> TrainedModel:
    if ds.task_kind != REGRESSION:
        raise DatasetError("gradient boosting is a regression learner")
    p: GradientBoostingParams = coerce_params(GRADIENT_BOOSTING, params)
    init, trees = fit_gradient_boosting(ds, p)
    return TrainedModel(
        kind=GRADIENT_BOOSTING,
        task_kind=ds.task_kind,
        params=asdict(p),
        columns=ds.columns,
        seed=p.seed,
        dataset_fingerprint=ds.fingerprint(),
        state={"init": init, "trees": trees, "learning_rate": p.learning_rate},
    )


def fit_dnn(ds: Dataset, params=None) -> TrainedModel:
    if ds.task_kind != CLASSIFICATION:
        raise DatasetError("the network classifier requires classification targets")
    p: DnnParams = coerce_params(DNN, params)
    weights, biases = fit_network(ds, p)
    return TrainedModel(
        kind=DNN,
        task_kind=ds.task_kind,
        params=asdict(p),
        columns=ds.columns,
        seed=p.seed,
        dataset_fingerprint=ds.fingerprint(),
        state={"weights": weights, "biases": biases},
    )


_FITTERS = {
    RANDOM_FOREST: fit_random_forest,
    ADABOOST: lambda ds, params=None, jobs=1: fit_adaboost(ds, params),
    GRADIENT_BOOSTING: lambda ds, params=None, jobs=1: fit_gradient_boosting_model(ds, params),
    DNN: lambda ds, params=None, jobs=1: fit_dnn(ds, params),
}


def fit_model(kind: str, ds: Dataset, params=None, jobs: int = 1) -> TrainedModel:
    if kind not in _FITTERS:
        raise BadConfigValue(f"unknown model kind {kind!r}")
    return _FITTERS[kind](ds, params, jobs=jobs)


def check_schema(model_columns: tuple[str, ...], X: np.ndarray, columns) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.shape[1] != len(model_columns):
        raise SchemaMismatch(
            f"model was trained on {len(model_columns)} features, input has {X.shape[1]}"
        )
    if columns is not None and tuple(columns) != tuple(model_columns):
        raise SchemaMismatch("input column names do not match the training schema")
    return X


def clamp_mmse(values: np.ndarray) -> np.ndarray:
    return np.clip(values, MMSE_RANGE[0], MMSE_RANGE[1])


def predict(model: TrainedModel, X: np.ndarray, columns=None) -> np.ndarray:
    """(N, 3) probability rows for classifiers, clamped reals for regressors."""
    X = check_schema(model.columns, X, columns)
    if model.kind == RANDOM_FOREST:
        out = forest_predict(model.state["trees"], X)
    elif model.kind == ADABOOST and model.task_kind == CLASSIFICATION:
        out = adaboost_classifier_predict(
            model.state["trees"], model.state["alphas"], model.state["priors"], X
        )
    elif model.kind == ADABOOST:
        out = adaboost_regressor_predict(
            model.state["trees"], model.state["alphas"], model.state["fallback_value"], X
        )
    elif model.kind == GRADIENT_BOOSTING:
        out = gradient_boosting_predict(
            model.state["init"], model.state["trees"], model.state["learning_rate"], X
        )
    elif model.kind == DNN:
        out = network_predict(model.state["weights"], model.state["biases"], X)
    elif model.kind == VOTING:
        from ..ensembles import ensemble_predict

        return ensemble_predict(model, X)
    else:
        raise BadConfigValue(f"unknown model kind {model.kind!r}")
    if model.task_kind == REGRESSION:
        return clamp_mmse(out)
    return out


def predict_labels(model: TrainedModel, X: np.ndarray, columns=None) -> np.ndarray:
    """Argmax class indices; probability ties break to the lowest class."""
    probs = predict(model, X, columns)
    return np.argmax(probs, axis=1)
