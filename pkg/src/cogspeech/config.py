"""Run configuration: every unspecified knob lives here, visible and dumpable.

A config file is JSON with a subset of the keys below; unknown keys are
rejected. Command-line flags always win over config-file values.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .errors import BadConfigValue, UnknownConfigKey
from .features import DEFAULT_FEATURE_CONFIG

DEFAULT_GRIDS: dict[str, dict] = {
    "random_forest": {"n_trees": [100, 300], "max_depth": [None, 8], "min_samples_leaf": [1, 3]},
    "adaboost": {"n_estimators": [50, 200], "learning_rate": [0.5, 1.0]},
    "gradient_boosting": {
        "n_estimators": [100, 300],
        "learning_rate": [0.05, 0.1],
        "max_depth": [2, 3],
    },
    "dnn": {"hidden_sizes": [[64], [128, 64]], "learning_rate": [1e-3, 1e-2]},
}


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    k: int = 5
    jobs: int = 1
    task: str = "all"                      # CTD | SF | PF | all
    features: str = "linguistic_42"        # linguistic_42 | embedding_ctd
    model_config: str = "cls1"
    missing_task_policy: str = "zero_fill"
    expected_dim: int = 1280
    filler_lexicon: tuple[str, ...] = tuple(sorted(DEFAULT_FEATURE_CONFIG.filler_lexicon))
    relation_map: dict = field(default_factory=dict)
    grids: dict = field(default_factory=lambda: {k: dict(v) for k, v in DEFAULT_GRIDS.items()})

    def validate(self) -> None:
        if self.task not in ("CTD", "SF", "PF", "all"):
            raise BadConfigValue(f"task must be CTD, SF, PF or all, got {self.task!r}")
        if self.features not in ("linguistic_42", "embedding_ctd"):
            raise BadConfigValue(f"unknown feature source {self.features!r}")
        if self.missing_task_policy not in ("zero_fill", "error"):
            raise BadConfigValue(f"unknown missing-task policy {self.missing_task_policy!r}")
        if self.k < 2:
            raise BadConfigValue(f"k must be >= 2, got {self.k}")
        if self.jobs < 1:
            raise BadConfigValue(f"jobs must be >= 1, got {self.jobs}")
        if self.expected_dim < 1:
            raise BadConfigValue(f"expected_dim must be >= 1, got {self.expected_dim}")


def default_config_dict() -> dict:
    return asdict(RunConfig())


def load_run_config(path: str | Path) -> RunConfig:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise BadConfigValue(f"config file is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise BadConfigValue("config file must contain a JSON object")
    known = set(RunConfig.__dataclass_fields__)
    unknown = set(raw) - known
    if unknown:
        raise UnknownConfigKey(f"unknown config keys: {sorted(unknown)}")
    if "filler_lexicon" in raw:
        raw["filler_lexicon"] = tuple(raw["filler_lexicon"])
    cfg = RunConfig(**raw)
    cfg.validate()
    return cfg
