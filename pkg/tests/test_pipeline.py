import json

import numpy as np
import pytest

from cogspeech.dataset import CLASSIFICATION
from cogspeech.ensembles import build_submission_config
from cogspeech.pipeline import (
    RunOptions,
    build_dataset,
    load_manifests,
    read_predictions,
    run_cv,
    run_pipeline,
    write_predictions,
)
from cogspeech.synthetic import CohortSpec, gen_cohort

SMALL = CohortSpec(
    train_counts=(12, 9, 6),
    dev_counts=(5, 4, 2),
    mmse_fraction=1.0,
    embedding_dim=24,
    informative_dims_per_class=3,
    frames=(3, 6),
    separation=3.0,
    seed=21,
)

FAST_CLS = {
    "random_forest": {"n_trees": 40},
    "adaboost": {"n_estimators": 30},
    "dnn": {"epochs": 60},
}
FAST_REG = {
    "random_forest": {"n_trees": 40},
    "adaboost": {"n_estimators": 20},
    "gradient_boosting": {"n_estimators": 60},
}


def shrink(config, overrides):
    import dataclasses

    members = tuple(
        dataclasses.replace(m, params={**m.params, **overrides.get(m.kind, {})})
        for m in config.members
    )
    return dataclasses.replace(config, members=members)


@pytest.fixture(scope="module")
def cohort(tmp_path_factory):
    out = tmp_path_factory.mktemp("cohort")
    gen_cohort(SMALL, out)
    return out


def test_build_dataset_linguistic(cohort):
    manifest, bases = load_manifests([cohort / "manifest.csv"])
    opts = RunOptions()
    ds = build_dataset(manifest, bases, "linguistic_42", CLASSIFICATION, opts)
    assert ds.d == 42
    assert ds.n == 38
    assert ds.ids == tuple(sorted(ds.ids))


def test_build_dataset_embeddings(cohort):
    manifest, bases = load_manifests([cohort / "manifest.csv"])
    opts = RunOptions(expected_dim=24)
    ds = build_dataset(manifest, bases, "embedding_ctd", CLASSIFICATION, opts)
    assert ds.d == 24
    assert ds.n == 38


def test_run_pipeline_cls_writes_outputs(cohort, tmp_path):
    config = shrink(build_submission_config("cls3"), FAST_CLS)
    opts = RunOptions(seed=1, expected_dim=24)
    report = run_pipeline(
        config, [cohort / "train_manifest.csv"], cohort / "dev_manifest.csv", tmp_path, opts
    )
    assert report.task_kind == "classification"
    assert report.confusion is not None
    assert sum(sum(row) for row in report.confusion) == 11
    preds = read_predictions(tmp_path / "predictions.csv")
    assert len(preds) == 11
    assert all(label in ("HC", "MCI", "AD") for _, label in preds)
    payload = json.loads((tmp_path / "report.json").read_text())
    assert payload["task_kind"] == "classification"
    assert payload["config_fingerprint"] == report.config_fingerprint


def test_run_pipeline_reg_report_has_rmse_only(cohort, tmp_path):
    config = shrink(build_submission_config("reg3"), FAST_REG)
    opts = RunOptions(seed=1, expected_dim=24)
    report = run_pipeline(
        config, [cohort / "train_manifest.csv"], cohort / "dev_manifest.csv", tmp_path, opts
    )
    assert report.task_kind == "regression"
    assert report.rmse is not None
    assert report.confusion is None
    preds = read_predictions(tmp_path / "predictions.csv")
    values = [float(v) for _, v in preds]
    assert all(0.0 <= v <= 30.0 for v in values)


def test_rerun_same_seed_byte_identical(cohort, tmp_path):
    config = shrink(build_submission_config("cls3"), FAST_CLS)
    opts = RunOptions(seed=5, expected_dim=24)
    a, b = tmp_path / "a", tmp_path / "b"
    run_pipeline(config, [cohort / "train_manifest.csv"], cohort / "dev_manifest.csv", a, opts)
    run_pipeline(config, [cohort / "train_manifest.csv"], cohort / "dev_manifest.csv", b, opts)
    assert (a / "predictions.csv").read_bytes() == (b / "predictions.csv").read_bytes()
    assert (a / "report.json").read_bytes() == (b / "report.json").read_bytes()


def test_different_seed_changes_fingerprint(cohort, tmp_path):
    config = shrink(build_submission_config("cls3"), FAST_CLS)
    a = run_pipeline(
        config, [cohort / "train_manifest.csv"], cohort / "dev_manifest.csv",
        tmp_path / "a", RunOptions(seed=1, expected_dim=24),
    )
    b = run_pipeline(
        config, [cohort / "train_manifest.csv"], cohort / "dev_manifest.csv",
        tmp_path / "b", RunOptions(seed=2, expected_dim=24),
    )
    assert a.config_fingerprint != b.config_fingerprint


def test_run_cv_shapes(cohort):
    config = shrink(build_submission_config("cls3"), FAST_CLS)
    report = run_cv(
        config,
        [cohort / "train_manifest.csv", cohort / "dev_manifest.csv"],
        RunOptions(seed=0, k=5, expected_dim=24),
    )
    assert len(report.per_fold) == 5
    assert all("macro_f1" in fold for fold in report.per_fold)
    assert report.n == 38


def test_regression_cv_filters_to_mmse(tmp_path):
    # half the participants carry MMSE; regression CV must use only those
    spec = CohortSpec(
        train_counts=(10, 8, 6), dev_counts=(0, 0, 0), mmse_fraction=0.5,
        embedding_dim=16, informative_dims_per_class=2, frames=(3, 5), seed=3,
    )
    out = tmp_path / "c"
    manifest = gen_cohort(spec, out)
    config = shrink(build_submission_config("reg1"), FAST_REG)
    report = run_cv(config, [out / "manifest.csv"], RunOptions(seed=0, k=3))
    assert report.n == 12  # round(0.5 * 24)


def test_predictions_file_roundtrip(tmp_path):
    path = tmp_path / "p.csv"
    write_predictions(["a", "b"], np.array([0, 2]), CLASSIFICATION, path)
    assert read_predictions(path) == [("a", "HC"), ("b", "AD")]
    write_predictions(["a"], np.array([27.25]), "regression", path)
    assert read_predictions(path) == [("a", "27.25")]
