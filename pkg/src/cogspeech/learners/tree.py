"""CART decision trees for 3-class Gini classification and variance regression.

Split selection enumerates every midpoint between consecutive distinct sorted
feature values. The winner is the candidate with the best criterion score;
candidates within 1e-12 of the best are tied and resolved by lowest feature
index, then lowest threshold. A split must beat the parent score by more than
the same tolerance, so zero-gain splits become leaves and recursion always
terminates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..dataset import N_CLASSES

_TIE_TOL = 1e-12

GINI = "gini"
VARIANCE = "variance"


@dataclass
class DecisionTree:
    criterion: str
    feature: np.ndarray    # (n_nodes,) int32, -1 for leaves
    threshold: np.ndarray  # (n_nodes,) float64
    left: np.ndarray       # (n_nodes,) int32
    right: np.ndarray      # (n_nodes,) int32
    value: np.ndarray      # (n_nodes, 3) class probabilities or (n_nodes,) means

    @property
    def n_nodes(self) -> int:
        return int(self.feature.shape[0])

    def predict(self, X: np.ndarray) -> np.ndarray:
        """Leaf value per row: (n, 3) probabilities or (n,) means."""
        X = np.asarray(X, dtype=np.float64)
        node = np.zeros(X.shape[0], dtype=np.int64)
        while True:
            internal = self.feature[node] >= 0
            if not internal.any():
                break
            idx = np.flatnonzero(internal)
            feats = self.feature[node[idx]]
            thr = self.threshold[node[idx]]
            go_left = X[idx, feats] <= thr
            node[idx] = np.where(go_left, self.left[node[idx]], self.right[node[idx]])
        return self.value[node]


def _class_weight_matrix(y: np.ndarray, w: np.ndarray) -> np.ndarray:
    out = np.zeros((y.shape[0], N_CLASSES), dtype=np.float64)
    out[np.arange(y.shape[0]), y] = w
    return out


def _best_split(
    X: np.ndarray,
    y: np.ndarray,
    w: np.ndarray,
    feat_indices: np.ndarray,
    min_samples_leaf: int,
    criterion: str,
):
    """Return (feature, threshold) or None if no admissible improving split.

    The maximized score is sum_c wL_c^2/WL + sum_c wR_c^2/WR for Gini and
    SL^2/WL + SR^2/WR for variance (both equivalent to minimizing weighted
    child impurity).
    """
    n = X.shape[0]
    if criterion == GINI:
        cw = _class_weight_matrix(y, w)
        totals = cw.sum(axis=0)
        total_w = totals.sum()
        parent = float(np.square(totals).sum() / total_w)
        scale = max(1.0, abs(parent))
    else:
        wy = w * y
        total_wy = wy.sum()
        total_w = w.sum()
        parent = float(total_wy * total_wy / total_w)
        # score differences live on the second-moment scale, which stays
        # meaningful for the near-centered residuals of late boosting stages
        scale = float(np.dot(w, np.square(y)))

    msl = max(1, min_samples_leaf)
    tol = _TIE_TOL * scale
    if n < 2 * msl:
        return None

    # score all candidate features in one vectorized pass
    Xf = X[:, feat_indices]                                   # (n, m)
    order = np.argsort(Xf, axis=0, kind="stable")
    xs = np.take_along_axis(Xf, order, axis=0)
    cut = xs[:-1] < xs[1:]                                    # split after row i
    sizes = np.arange(1, n)
    valid_size = (sizes >= msl) & (n - sizes >= msl)
    cut &= valid_size[:, None]

    wl = np.cumsum(w[order], axis=0)[:-1]                     # (n-1, m)
    wr = total_w - wl
    with np.errstate(divide="ignore", invalid="ignore"):
        if criterion == GINI:
            cwl = np.cumsum(cw[order], axis=0)[:-1]           # (n-1, m, 3)
            cwr = totals[None, None, :] - cwl
            score = np.square(cwl).sum(axis=2) / wl + np.square(cwr).sum(axis=2) / wr
        else:
            swl = np.cumsum(wy[order], axis=0)[:-1]
            swr = total_wy - swl
            score = swl * swl / wl + swr * swr / wr
    score = np.where(cut & np.isfinite(score), score, -np.inf)

    # per feature: first position within tolerance of that feature's maximum
    fmax = score.max(axis=0)
    candidate = fmax > -np.inf
    if not candidate.any():
        return None
    first_pos = np.argmax(score >= (fmax - tol)[None, :], axis=0)
    local_scores = score[first_pos, np.arange(score.shape[1])]

    # then a scalar fold in ascending feature order: switch features only on
    # a strictly-better-than-tolerance improvement, so near-ties keep the
    # lowest feature index and, within a feature, the lowest threshold
    best_score = parent
    best_col = -1
    for j in range(local_scores.shape[0]):
        if candidate[j] and local_scores[j] > best_score + tol:
            best_score = float(local_scores[j])
            best_col = j
    if best_col < 0:
        return None
    pos = int(first_pos[best_col])
    threshold = float((xs[pos, best_col] + xs[pos + 1, best_col]) / 2.0)
    return int(feat_indices[best_col]), threshold


def _leaf_value(y: np.ndarray, w: np.ndarray, criterion: str) -> np.ndarray | float:
    if criterion == GINI:
        sums = np.zeros(N_CLASSES, dtype=np.float64)
        np.add.at(sums, y, w)
        return sums / sums.sum()
    return float(np.average(y, weights=w))


def fit_tree(
    X: np.ndarray,
    y: np.ndarray,
    criterion: str,
    max_depth: int | None = None,
    min_samples_leaf: int = 1,
    features_per_split: int | None = None,
    sample_weight: np.ndarray | None = None,
    rng: np.random.Generator | None = None,
) -> DecisionTree:
    X = np.asarray(X, dtype=np.float64)
    n, d = X.shape
    if criterion == GINI:
        y = np.asarray(y, dtype=np.int64)
    else:
        y = np.asarray(y, dtype=np.float64)
    w = np.full(n, 1.0 / n) if sample_weight is None else np.asarray(sample_weight, dtype=np.float64)

    subsample = features_per_split is not None and features_per_split < d
    if subsample and rng is None:
        raise ValueError("feature subsampling requires an rng")

    features: list[int] = []
    thresholds: list[float] = []
    lefts: list[int] = []
    rights: list[int] = []
    values: list = []

    def add_node() -> int:
        features.append(-1)
        thresholds.append(0.0)
        lefts.append(-1)
        rights.append(-1)
        values.append(None)
        return len(features) - 1

    def build(idx: np.ndarray, depth: int) -> int:
        node = add_node()
        yi, wi = y[idx], w[idx]
        pure = bool((yi == yi[0]).all())
        if (
            pure
            or idx.shape[0] < 2
            or idx.shape[0] < 2 * min_samples_leaf
            or (max_depth is not None and depth >= max_depth)
        ):
            values[node] = _leaf_value(yi, wi, criterion)
            return node
        if subsample:
            feat_idx = np.sort(rng.choice(d, size=features_per_split, replace=False))
        else:
            feat_idx = np.arange(d)
        split = _best_split(X[idx], yi, wi, feat_idx, min_samples_leaf, criterion)
        if split is None:
            values[node] = _leaf_value(yi, wi, criterion)
            return node
        f, thr = split
        go_left = X[idx, f] <= thr
        features[node] = f
        thresholds[node] = thr
        lefts[node] = build(idx[go_left], depth + 1)
        rights[node] = build(idx[~go_left], depth + 1)
        return node

    build(np.arange(n), 0)

    if criterion == GINI:
        value_arr = np.zeros((len(values), N_CLASSES), dtype=np.float64)
        for i, v in enumerate(values):
            if v is not None:
                value_arr[i] = v
    else:
        value_arr = np.array([0.0 if v is None else v for v in values], dtype=np.float64)
    return DecisionTree(
        criterion=criterion,
        feature=np.asarray(features, dtype=np.int32),
        threshold=np.asarray(thresholds, dtype=np.float64),
        left=np.asarray(lefts, dtype=np.int32),
        right=np.asarray(rights, dtype=np.int32),
        value=value_arr,
    )
