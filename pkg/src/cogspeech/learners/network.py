"""Fully-connected softmax classifier trained with mini-batch SGD.

Rectified-linear hidden layers, 3-way softmax output, cross-entropy loss plus
an L2 penalty of 0.5 * l2 * sum(W^2) over weight matrices (biases are not
penalized). All arithmetic is float64 and single-threaded; the shuffling
stream and He-style initialization are drawn from one seeded generator, so a
fit is a pure function of (dataset, hyperparameters, seed).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..dataset import N_CLASSES, Dataset
from ..errors import DivergedTraining


@dataclass(frozen=True)
class DnnParams:
    hidden_sizes: tuple[int, ...] = (64,)
    epochs: int = 200
    batch_size: int = 16
    learning_rate: float = 1e-3
    l2: float = 1e-4
    seed: int = 0


def init_network(d_in: int, hidden_sizes, rng: np.random.Generator):
    sizes = [d_in, *hidden_sizes, N_CLASSES]
    weights = []
    biases = []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        std = np.sqrt(2.0 / fan_in)
        weights.append(rng.normal(0.0, std, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return weights, biases


def _forward(weights, biases, X):
    activations = [X]
    h = X
    for W, b in zip(weights[:-1], biases[:-1]):
        h = np.maximum(h @ W + b, 0.0)
        activations.append(h)
    logits = h @ weights[-1] + biases[-1]
    return activations, logits


def softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def loss_and_grads(weights, biases, X, y, l2):
    """Mean cross-entropy + L2, with gradients for every parameter."""
    n = X.shape[0]
    activations, logits = _forward(weights, biases, X)
    probs = softmax(logits)
    eps = 1e-300
    data_loss = -np.log(np.maximum(probs[np.arange(n), y], eps)).mean()
    reg_loss = 0.5 * l2 * sum(float(np.square(W).sum()) for W in weights)

    delta = probs.copy()
    delta[np.arange(n), y] -= 1.0
    delta /= n

    grads_w = [np.zeros_like(W) for W in weights]
    grads_b = [np.zeros_like(b) for b in biases]
    for layer in range(len(weights) - 1, -1, -1):
        grads_w[layer] = activations[layer].T @ delta + l2 * weights[layer]
        grads_b[layer] = delta.sum(axis=0)
        if layer > 0:
            delta = (delta @ weights[layer].T) * (activations[layer] > 0.0)
    return data_loss + reg_loss, grads_w, grads_b


def network_predict(weights, biases, X) -> np.ndarray:
    _, logits = _forward(weights, biases, np.asarray(X, dtype=np.float64))
    return softmax(logits)


def fit_network(ds: Dataset, params: DnnParams):
    """Returns (weights, biases). Epoch budget is the stop rule; a NaN loss
    aborts with DivergedTraining."""
    ds = ds.sorted_by_id()
    X, y, n = ds.X, ds.y, ds.n
    rng = np.random.default_rng(params.seed)
    weights, biases = init_network(ds.d, params.hidden_sizes, rng)
    batch = max(1, min(params.batch_size, n))
    lr = params.learning_rate

    for epoch in range(params.epochs):
        perm = rng.permutation(n)
        for start in range(0, n, batch):
            sel = perm[start : start + batch]
            loss, gw, gb = loss_and_grads(weights, biases, X[sel], y[sel], params.l2)
            if not np.isfinite(loss):
                raise DivergedTraining(f"loss became non-finite at epoch {epoch}")
            for i in range(len(weights)):
                weights[i] -= lr * gw[i]
                biases[i] -= lr * gb[i]
    return weights, biases
