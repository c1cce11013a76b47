import numpy as np
import pytest

from _corpus import blob_dataset
from cogspeech.errors import ChecksumFailure, VersionMismatch
from cogspeech.learners import (
    fit_adaboost,
    fit_dnn,
    fit_gradient_boosting_model,
    fit_random_forest,
    load_model,
    predict,
    save_model,
)
from cogspeech.dataset import Dataset, REGRESSION


def regression_ds(n=30, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.uniform(0, 10, size=(n, 4))
    y = np.clip(1.5 * X[:, 0] + X[:, 1], 0, 30)
    return Dataset(
        X=X, y=y, task_kind=REGRESSION,
        columns=("a", "b", "c", "d"), ids=tuple(f"p{i:03d}" for i in range(n)),
    )


@pytest.mark.parametrize(
    "fit",
    [
        lambda: fit_random_forest(blob_dataset(12, 6), {"n_trees": 15, "seed": 1}),
        lambda: fit_adaboost(blob_dataset(12, 6), {"n_estimators": 10, "seed": 1}),
        lambda: fit_adaboost(regression_ds(), {"n_estimators": 10, "base_depth": 2, "seed": 1}),
        lambda: fit_gradient_boosting_model(regression_ds(), {"n_estimators": 20, "seed": 1}),
        lambda: fit_dnn(blob_dataset(12, 6), {"hidden_sizes": (8,), "epochs": 15, "seed": 1}),
    ],
    ids=["forest", "ada_cls", "ada_reg", "gbm", "dnn"],
)
def test_roundtrip_predictions_bit_identical(fit):
    model = fit()
    data = save_model(model)
    back = load_model(data)
    rng = np.random.default_rng(9)
    probe = rng.normal(5, 3, size=(100, len(model.columns)))
    np.testing.assert_array_equal(predict(model, probe), predict(back, probe))
    assert back.kind == model.kind
    assert back.columns == model.columns
    assert back.dataset_fingerprint == model.dataset_fingerprint


def test_truncated_file_checksum_failure():
    model = fit_random_forest(blob_dataset(8, 4), {"n_trees": 3, "seed": 0})
    data = save_model(model)
    with pytest.raises(ChecksumFailure):
        load_model(data[:-3])


def test_corrupted_payload_checksum_failure():
    model = fit_random_forest(blob_dataset(8, 4), {"n_trees": 3, "seed": 0})
    data = bytearray(save_model(model))
    data[len(data) // 2] ^= 0xFF
    with pytest.raises(ChecksumFailure):
        load_model(bytes(data))


def test_bumped_version_rejected():
    model = fit_random_forest(blob_dataset(8, 4), {"n_trees": 3, "seed": 0})
    data = bytearray(save_model(model))
    data[4] = 99  # little-endian u16 version right after the 4-byte magic
    with pytest.raises(VersionMismatch):
        load_model(bytes(data))


def test_bad_magic_rejected():
    with pytest.raises(VersionMismatch):
        load_model(b"NOPE" + b"\x00" * 40)


def test_save_is_deterministic():
    model = fit_random_forest(blob_dataset(8, 4), {"n_trees": 5, "seed": 2})
    assert save_model(model) == save_model(model)
