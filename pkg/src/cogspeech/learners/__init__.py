from .base import (
    ADABOOST,
    DNN,
    GRADIENT_BOOSTING,
    MMSE_RANGE,
    RANDOM_FOREST,
    VOTING,
    TrainedModel,
    clamp_mmse,
    coerce_params,
    fit_adaboost,
    fit_dnn,
    fit_gradient_boosting_model,
    fit_model,
    fit_random_forest,
    predict,
    predict_labels,
)
from .boosting import AdaBoostParams, GradientBoostingParams
from .forest import ForestParams
from .network import DnnParams, loss_and_grads, network_predict
from .store import load_model, load_model_file, save_model, save_model_file
from .tree import GINI, VARIANCE, DecisionTree, fit_tree

__all__ = [
    "ADABOOST",
    "DNN",
    "GINI",
    "GRADIENT_BOOSTING",
    "MMSE_RANGE",
    "RANDOM_FOREST",
    "VARIANCE",
    "VOTING",
    "AdaBoostParams",
    "DecisionTree",
    "DnnParams",
    "ForestParams",
    "GradientBoostingParams",
    "TrainedModel",
    "clamp_mmse",
    "coerce_params",
    "fit_adaboost",
    "fit_dnn",
    "fit_gradient_boosting_model",
    "fit_model",
    "fit_random_forest",
    "fit_tree",
    "load_model",
    "load_model_file",
    "loss_and_grads",
    "network_predict",
    "predict",
    "predict_labels",
    "save_model",
    "save_model_file",
]
