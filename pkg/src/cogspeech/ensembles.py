"""Voting combinators and the six submitted pipeline configurations.

Soft voting averages member probability rows (weighted, renormalized only on
numerical drift beyond 1e-9). Hard voting takes the plurality of member
argmax labels, breaking vote ties by the summed soft scores among the tied
classes and then by lowest class index. The voting regressor averages member
predictions and clamps to the MMSE range.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dataset import CLASSIFICATION, N_CLASSES, REGRESSION, Dataset
from .errors import MixedTaskMembers, SchemaMismatch, UnknownConfigName
from .learners import (
    ADABOOST,
    DNN,
    GRADIENT_BOOSTING,
    RANDOM_FOREST,
    VOTING,
    TrainedModel,
    clamp_mmse,
    fit_model,
    predict,
)


def _check_members(members, X=None, columns=None) -> None:
    if not members:
        raise MixedTaskMembers("an ensemble needs at least one member")
    kinds = {m.task_kind for m in members}
    if len(kinds) > 1:
        raise MixedTaskMembers(f"members mix task kinds {sorted(kinds)}")
    schemas = {m.columns for m in members}
    if len(schemas) > 1:
        raise SchemaMismatch("members were trained on different feature schemas")
    if columns is not None and tuple(columns) != members[0].columns:
        raise SchemaMismatch("input column names do not match the member schema")


def _weights(members, weights) -> np.ndarray:
    if weights is None:
        w = np.full(len(members), 1.0 / len(members))
    else:
        w = np.asarray(weights, dtype=np.float64)
        if w.shape != (len(members),):
            raise MixedTaskMembers(f"{w.shape[0] if w.ndim else 0} weights for {len(members)} members")
        if not np.isfinite(w).all() or (w <= 0).any():
            raise MixedTaskMembers("member weights must be positive and finite")
        w = w / w.sum()
    return w


def vote_soft(members, X, columns=None, weights=None) -> np.ndarray:
    _check_members(members, X, columns)
    if members[0].task_kind != CLASSIFICATION:
        raise MixedTaskMembers("soft voting requires classifier members")
    w = _weights(members, weights)
    acc = np.zeros((np.asarray(X).shape[0], N_CLASSES))
    for m, wi in zip(members, w):
        acc += wi * predict(m, X)
    drift = np.abs(acc.sum(axis=1) - 1.0)
    if (drift > 1e-9).any():
        acc = acc / acc.sum(axis=1, keepdims=True)
    return acc


def vote_hard(members, X, columns=None, weights=None) -> np.ndarray:
    """Per-row class indices under the plurality rule."""
    _check_members(members, X, columns)
    if members[0].task_kind != CLASSIFICATION:
        raise MixedTaskMembers("hard voting requires classifier members")
    w = _weights(members, weights)
    n = np.asarray(X).shape[0]
    votes = np.zeros((n, N_CLASSES))
    soft = np.zeros((n, N_CLASSES))
    for m, wi in zip(members, w):
        probs = predict(m, X)
        votes[np.arange(n), np.argmax(probs, axis=1)] += wi
        soft += wi * probs
    out = np.empty(n, dtype=np.int64)
    for i in range(n):
        top = votes[i].max()
        tied = np.flatnonzero(votes[i] >= top - 1e-12)
        if tied.size == 1:
            out[i] = tied[0]
        else:
            best = soft[i, tied].max()
            # among vote-tied classes: highest summed soft score, then lowest index
            out[i] = tied[np.flatnonzero(soft[i, tied] >= best - 1e-12)[0]]
    return out


def vote_regress(members, X, columns=None, weights=None) -> np.ndarray:
    _check_members(members, X, columns)
    if members[0].task_kind != REGRESSION:
        raise MixedTaskMembers("the voting regressor requires regressor members")
    w = _weights(members, weights)
    acc = np.zeros(np.asarray(X).shape[0])
    for m, wi in zip(members, w):
        acc += wi * predict(m, X)
    return clamp_mmse(acc)


@dataclass(frozen=True)
class MemberSpec:
    kind: str
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class SubmissionConfig:
    name: str
    task_kind: str
    feature_source: str          # linguistic_42 | embedding_ctd
    train_split: str             # train | train+dev
    members: tuple[MemberSpec, ...]
    vote: str                    # single | soft | hard | regressor_mean


# Hyperparameters below are this artifact's defaults; the source material
# names the learners and splits of each submission but not their settings.
_RF_CLS = {"n_trees": 300, "max_depth": None, "min_samples_leaf": 1}
_RF_REG = {"n_trees": 300, "max_depth": None, "min_samples_leaf": 1}
_ADA_CLS = {"n_estimators": 200, "learning_rate": 0.5, "base_depth": 1}
_ADA_REG = {"n_estimators": 100, "learning_rate": 1.0, "base_depth": 3}
_GBM_REG = {"n_estimators": 300, "learning_rate": 0.1, "max_depth": 3}
_DNN_CLS = {"hidden_sizes": (64,), "epochs": 200, "batch_size": 16, "learning_rate": 1e-3, "l2": 1e-4}

_REG_MEMBERS = (
    MemberSpec(RANDOM_FOREST, _RF_REG),
    MemberSpec(ADABOOST, _ADA_REG),
    MemberSpec(GRADIENT_BOOSTING, _GBM_REG),
)
_EMB_CLS_MEMBERS = (
    MemberSpec(RANDOM_FOREST, _RF_CLS),
    MemberSpec(ADABOOST, _ADA_CLS),
    MemberSpec(DNN, _DNN_CLS),
)

_CONFIGS = {
    "cls1": SubmissionConfig(
        "cls1", CLASSIFICATION, "linguistic_42", "train+dev",
        (MemberSpec(RANDOM_FOREST, _RF_CLS),), "single",
    ),
    "cls2": SubmissionConfig(
        "cls2", CLASSIFICATION, "embedding_ctd", "train", _EMB_CLS_MEMBERS, "soft",
    ),
    "cls3": SubmissionConfig(
        "cls3", CLASSIFICATION, "embedding_ctd", "train+dev", _EMB_CLS_MEMBERS, "soft",
    ),
    "reg1": SubmissionConfig(
        "reg1", REGRESSION, "linguistic_42", "train+dev", _REG_MEMBERS, "regressor_mean",
    ),
    "reg2": SubmissionConfig(
        "reg2", REGRESSION, "embedding_ctd", "train", _REG_MEMBERS, "regressor_mean",
    ),
    "reg3": SubmissionConfig(
        "reg3", REGRESSION, "embedding_ctd", "train+dev", _REG_MEMBERS, "regressor_mean",
    ),
}


def build_submission_config(name: str) -> SubmissionConfig:
    try:
        return _CONFIGS[name]
    except KeyError as exc:
        raise UnknownConfigName(
            f"unknown config {name!r}; expected one of {sorted(_CONFIGS)}"
        ) from exc


def load_submission_config(path) -> SubmissionConfig:
    """User-supplied pipeline config from a JSON file with the same shape as
    the built-ins: name, task_kind, feature_source, train_split, vote, and a
    member list of {kind, params}."""
    import json
    from pathlib import Path

    from .dataset import CLASSIFICATION, REGRESSION

    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise UnknownConfigName(f"cannot load pipeline config {path}: {exc}") from exc
    required = {"name", "task_kind", "feature_source", "train_split", "vote", "members"}
    missing = required - set(raw)
    extra = set(raw) - required
    if missing or extra:
        raise UnknownConfigName(
            f"pipeline config {path}: missing keys {sorted(missing)}, unknown keys {sorted(extra)}"
        )
    if raw["task_kind"] not in (CLASSIFICATION, REGRESSION):
        raise UnknownConfigName(f"pipeline config {path}: bad task_kind {raw['task_kind']!r}")
    if raw["feature_source"] not in ("linguistic_42", "embedding_ctd"):
        raise UnknownConfigName(f"pipeline config {path}: bad feature_source {raw['feature_source']!r}")
    if raw["vote"] not in ("single", "soft", "hard", "regressor_mean"):
        raise UnknownConfigName(f"pipeline config {path}: bad vote {raw['vote']!r}")
    if raw["train_split"] not in ("train", "train+dev"):
        raise UnknownConfigName(f"pipeline config {path}: bad train_split {raw['train_split']!r}")
    members = []
    for m in raw["members"]:
        if not isinstance(m, dict) or "kind" not in m:
            raise UnknownConfigName(f"pipeline config {path}: each member needs a kind")
        params = {
            k: tuple(v) if isinstance(v, list) else v
            for k, v in dict(m.get("params", {})).items()
        }
        members.append(MemberSpec(kind=m["kind"], params=params))
    if not members:
        raise UnknownConfigName(f"pipeline config {path}: member list is empty")
    return SubmissionConfig(
        name=str(raw["name"]),
        task_kind=raw["task_kind"],
        feature_source=raw["feature_source"],
        train_split=raw["train_split"],
        members=tuple(members),
        vote=raw["vote"],
    )


def resolve_submission_config(name_or_path: str) -> SubmissionConfig:
    """Built-in name first; otherwise treat the value as a JSON file path."""
    if name_or_path in _CONFIGS:
        return _CONFIGS[name_or_path]
    from pathlib import Path

    if Path(name_or_path).exists():
        return load_submission_config(name_or_path)
    raise UnknownConfigName(
        f"{name_or_path!r} is neither a built-in config ({', '.join(sorted(_CONFIGS))}) "
        "nor an existing config file"
    )


def submission_config_names() -> tuple[str, ...]:
    return tuple(sorted(_CONFIGS))


def fit_ensemble(
    ds: Dataset, config: SubmissionConfig, seed: int = 0, jobs: int = 1
) -> TrainedModel:
    """Fit every member (member i uses seed + i) and wrap them for voting."""
    members = []
    for i, spec in enumerate(config.members):
        params = dict(spec.params)
        params["seed"] = seed + i
        members.append(fit_model(spec.kind, ds, params, jobs=jobs))
    if len(members) == 1 and config.vote == "single":
        return members[0]
    return TrainedModel(
        kind=VOTING,
        task_kind=ds.task_kind,
        params={"vote": config.vote, "n_members": len(members)},
        columns=ds.columns,
        seed=seed,
        dataset_fingerprint=ds.fingerprint(),
        state={
            "vote": config.vote,
            "members": members,
            "weights": np.full(len(members), 1.0 / len(members)),
        },
    )


def ensemble_predict(model: TrainedModel, X) -> np.ndarray:
    vote = model.state["vote"]
    members = model.state["members"]
    weights = model.state["weights"]
    if vote == "soft":
        return vote_soft(members, X, weights=weights)
    if vote == "hard":
        labels = vote_hard(members, X, weights=weights)
        probs = np.zeros((labels.shape[0], N_CLASSES))
        probs[np.arange(labels.shape[0]), labels] = 1.0
        return probs
    if vote == "regressor_mean":
        return vote_regress(members, X, weights=weights)
    raise UnknownConfigName(f"unknown vote kind {vote!r}")
