"""Feature-matrix datasets handed to the learners.

Targets are either diagnosis labels encoded HC=0, MCI=1, AD=2 or real MMSE
values in [0, 30]. Rows carry participant ids; fits canonicalize row order by
sorting on id before any sampling, which is what makes every learner
invariant to input row permutations.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, replace

import numpy as np

from .errors import DatasetError

LABELS = ("HC", "MCI", "AD")
LABEL_TO_INDEX = {name: i for i, name in enumerate(LABELS)}
N_CLASSES = len(LABELS)

CLASSIFICATION = "classification"
REGRESSION = "regression"


@dataclass(frozen=True)
class Dataset:
    X: np.ndarray               # (N, D) float64
    y: np.ndarray               # (N,) int64 labels or float64 targets
    task_kind: str
    columns: tuple[str, ...]
    ids: tuple[str, ...]

    def __post_init__(self) -> None:
        X = np.asarray(self.X, dtype=np.float64)
        object.__setattr__(self, "X", X)
        if X.ndim != 2:
            raise DatasetError(f"feature matrix must be 2-D, got shape {X.shape}")
        n, d = X.shape
        if n < 1:
            raise DatasetError("dataset must contain at least one row")
        if not np.isfinite(X).all():
            raise DatasetError("feature matrix contains non-finite values")
        if len(self.columns) != d:
            raise DatasetError(f"{len(self.columns)} column names for {d} columns")
        if len(self.ids) != n:
            raise DatasetError(f"{len(self.ids)} row ids for {n} rows")
        if self.task_kind == CLASSIFICATION:
            y = np.asarray(self.y, dtype=np.int64)
            if y.shape != (n,):
                raise DatasetError(f"targets must have shape ({n},), got {y.shape}")
            if y.size and (y.min() < 0 or y.max() >= N_CLASSES):
                raise DatasetError("classification targets must be encoded 0/1/2")
        elif self.task_kind == REGRESSION:
            y = np.asarray(self.y, dtype=np.float64)
            if y.shape != (n,):
                raise DatasetError(f"targets must have shape ({n},), got {y.shape}")
            if not np.isfinite(y).all():
                raise DatasetError("regression targets contain non-finite values")
            if y.size and (y.min() < 0 or y.max() > 30):
                raise DatasetError("regression targets must lie in [0, 30]")
        else:
            raise DatasetError(f"task_kind must be classification or regression, got {self.task_kind!r}")
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return int(self.X.shape[0])

    @property
    def d(self) -> int:
        return int(self.X.shape[1])

    def sorted_by_id(self) -> "Dataset":
        order = sorted(range(self.n), key=lambda i: (self.ids[i], i))
        return self.subset(order)

    def subset(self, indices) -> "Dataset":
        idx = np.asarray(indices, dtype=np.int64)
        return replace(
            self,
            X=self.X[idx],
            y=self.y[idx],
            ids=tuple(self.ids[i] for i in idx),
        )

    def fingerprint(self) -> str:
        h = hashlib.sha256()
        h.update(self.task_kind.encode())
        h.update("\x00".join(self.columns).encode())
        h.update("\x00".join(self.ids).encode())
        h.update(np.ascontiguousarray(self.X, dtype="<f8").tobytes())
        if self.task_kind == CLASSIFICATION:
            h.update(np.ascontiguousarray(self.y, dtype="<i8").tobytes())
        else:
            h.update(np.ascontiguousarray(self.y, dtype="<f8").tobytes())
        return h.hexdigest()
