"""Single executable over the whole pipeline.

Subcommands: validate, features, synth, train, cv, predict, evaluate, config.
Exit codes: 0 success, 1 validation failure, 2 runtime error. Errors go to
stderr as one JSON object per line.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from .config import DEFAULT_GRIDS, RunConfig, default_config_dict, load_run_config
from .dataset import CLASSIFICATION, LABELS, LABEL_TO_INDEX, REGRESSION
from .ensembles import resolve_submission_config, submission_config_names
from .errors import CogSpeechError
from .evaluation import classification_report, regression_report
from .features import (
    DEFAULT_FEATURE_CONFIG,
    FeatureConfig,
    extract_task_features,
    write_feature_table,
    write_task_feature_table,
)
from .learners import load_model_file, predict, predict_labels, save_model_file
from .manifest import parse_manifest, validate_cohort
from .model_selection import grid_search, make_folds
from .pipeline import (
    RunOptions,
    build_dataset,
    load_manifests,
    linguistic_vectors,
    read_predictions,
    run_cv,
    run_pipeline,
    run_training,
)
from .synthetic import CohortSpec, gen_cohort
from .transcripts import Task, parse_transcript


def _fail(exc: Exception, code: int) -> int:
    line = json.dumps({"error": type(exc).__name__, "message": str(exc)})
    print(line, file=sys.stderr)
    return code


def _options(args, config: RunConfig) -> RunOptions:
    lexicon = frozenset(config.filler_lexicon)
    feature_config = dataclasses.replace(
        DEFAULT_FEATURE_CONFIG, filler_lexicon=lexicon, relation_map=dict(config.relation_map)
    )
    return RunOptions(
        seed=config.seed,
        k=config.k,
        jobs=config.jobs,
        missing_task_policy=config.missing_task_policy,
        expected_dim=config.expected_dim,
        feature_config=feature_config,
    )


def _merge_config(args) -> RunConfig:
    """Config file first, explicit flags win."""
    config = load_run_config(args.config) if getattr(args, "config", None) else RunConfig()
    overrides = {}
    for name in ("seed", "k", "jobs", "task", "features"):
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    if getattr(args, "model_config", None):
        overrides["model_config"] = args.model_config
    if overrides:
        config = dataclasses.replace(config, **overrides)
    config.validate()
    return config


def cmd_validate(args) -> int:
    manifest = parse_manifest(args.manifest)
    report = validate_cohort(
        manifest, args.mode, base_dir=Path(args.manifest).parent, check_files=True
    )
    for f in report.findings:
        severity = "BLOCKING" if f.blocking else "info"
        print(f"{severity}\t{f.participant_id}\t{f.kind}\t{f.message}")
    print(f"participants: {len(manifest.participant_ids)}")
    if report.retained_participants is not None:
        print(f"retained for regression: {report.retained_participants}")
    return 1 if report.blocking else 0


def cmd_features(args) -> int:
    config = _merge_config(args)
    opts = _options(args, config)
    manifest, bases = load_manifests([args.manifest])
    if config.task == "all":
        vectors = linguistic_vectors(
            manifest, bases, opts.feature_config, opts.missing_task_policy, opts.jobs
        )
        rows = write_feature_table(vectors, args.out)
    else:
        task = Task(config.task)
        pairs = []
        for pid in sorted(manifest.participant_ids):
            for row in manifest.rows_for(pid):
                if row.task != task or not row.transcript_path:
                    continue
                path = Path(row.transcript_path)
                if not path.is_absolute():
                    path = bases[pid] / path
                transcript = parse_transcript(
                    path, pid, task, row.duration_seconds, opts.feature_config.filler_lexicon
                )
                pairs.append((pid, extract_task_features(transcript, opts.feature_config)))
        rows = write_task_feature_table(pairs, task, args.out)
    print(f"wrote {rows} rows to {args.out}")
    return 0


def cmd_synth(args) -> int:
    if args.spec:
        spec = CohortSpec.from_json(Path(args.spec).read_text(encoding="utf-8"))
    else:
        spec = CohortSpec()
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.separation is not None:
        overrides["separation"] = args.separation
    if overrides:
        spec = dataclasses.replace(spec, **overrides)
    manifest = gen_cohort(spec, args.out)
    print(f"wrote cohort of {len(manifest.participant_ids)} participants to {args.out}")
    return 0


def _submission(args, config):
    submission = resolve_submission_config(config.model_config)
    if getattr(args, "features", None):
        submission = dataclasses.replace(submission, feature_source=args.features)
    return submission


def cmd_train(args) -> int:
    config = _merge_config(args)
    opts = _options(args, config)
    submission = _submission(args, config)
    model, ds = run_training(submission, args.manifest, opts)
    save_model_file(model, args.out)
    print(f"trained {submission.name} on {ds.n} participants; model written to {args.out}")
    return 0


def cmd_cv(args) -> int:
    config = _merge_config(args)
    opts = _options(args, config)
    submission = _submission(args, config)
    if args.grid:
        manifest, bases = load_manifests(args.manifest)
        ds = build_dataset(manifest, bases, submission.feature_source, submission.task_kind, opts)
        folds = make_folds(ds.y, k=opts.k, seed=opts.seed, task_kind=ds.task_kind)
        kind = args.grid
        grid = config.grids.get(kind)
        if not grid:
            raise CogSpeechError(f"no grid configured for model kind {kind!r}")
        objective = "macro_f1" if ds.task_kind == CLASSIFICATION else "rmse"
        best, results = grid_search(
            ds, kind, grid, folds, objective, seed=opts.seed, jobs=opts.jobs
        )
        for row in results:
            status = row["error"] or f"mean {objective} = {row['mean']:.6f}"
            print(f"{json.dumps(row['params'], sort_keys=True, default=str)}\t{status}")
        print(f"best: {json.dumps({k: v for k, v in best.items() if k != 'seed'}, sort_keys=True, default=str)}")
        return 0
    report = run_cv(submission, args.manifest, opts)
    for fold in report.per_fold:
        metric = "macro_f1" if submission.task_kind == CLASSIFICATION else "rmse"
        print(f"fold {fold['fold']}: {metric} = {fold[metric]:.6f}")
    if submission.task_kind == CLASSIFICATION:
        mean = float(np.mean([f["macro_f1"] for f in report.per_fold]))
        print(f"mean macro_f1 = {mean:.6f}")
        print(f"pooled macro_f1 = {report.macro_f1:.6f}")
    else:
        mean = float(np.mean([f["rmse"] for f in report.per_fold]))
        print(f"mean rmse = {mean:.6f}")
        print(f"pooled rmse = {report.rmse:.6f}")
    return 0


def cmd_predict(args) -> int:
    config = _merge_config(args)
    opts = _options(args, config)
    model = load_model_file(args.model)
    manifest, bases = load_manifests([args.manifest])
    from .features import PARTICIPANT_COLUMNS

    feature_source = (
        "linguistic_42" if tuple(model.columns) == PARTICIPANT_COLUMNS else "embedding_ctd"
    )
    if feature_source == "embedding_ctd":
        # the saved schema knows the embedding width; no config needed
        opts = dataclasses.replace(opts, expected_dim=len(model.columns))
    ds = build_dataset(
        manifest, bases, feature_source, model.task_kind, opts, require_targets=False
    )
    from .pipeline import write_predictions

    if model.task_kind == CLASSIFICATION:
        preds = predict_labels(model, ds.X, ds.columns)
    else:
        preds = predict(model, ds.X, ds.columns)
    write_predictions(ds.ids, preds, model.task_kind, args.out)
    print(f"wrote {ds.n} predictions to {args.out}")
    return 0


def cmd_evaluate(args) -> int:
    manifest = parse_manifest(args.manifest)
    predictions = read_predictions(args.predictions)
    mode = args.mode
    truth: dict[str, object] = {}
    for pid in manifest.participant_ids:
        rows = manifest.rows_for(pid)
        if mode == CLASSIFICATION:
            diags = {r.diagnosis for r in rows if r.diagnosis}
            if len(diags) == 1:
                truth[pid] = diags.pop()
        else:
            mmses = {r.mmse for r in rows if r.mmse is not None}
            if len(mmses) == 1:
                truth[pid] = float(mmses.pop())
    y_true: list = []
    y_pred: list = []
    for pid, value in predictions:
        if pid not in truth:
            continue
        y_true.append(truth[pid])
        y_pred.append(value if mode == CLASSIFICATION else float(value))
    if mode == CLASSIFICATION:
        report = classification_report(y_true, y_pred)
        print(report.to_json(), end="")
    else:
        report = regression_report(y_true, y_pred)
        print(report.to_json(), end="")
    return 0


def cmd_config(args) -> int:
    if args.dump:
        print(json.dumps(default_config_dict(), sort_keys=True, indent=2, default=str))
        return 0
    print("use --dump to print the reference configuration")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cogspeech",
        description="Speech-and-language cognitive marker pipeline",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, manifest_nargs=None):
        if manifest_nargs:
            p.add_argument("--manifest", required=True, nargs="+", help="cohort manifest file(s)")
        else:
            p.add_argument("--manifest", required=True, help="cohort manifest file")
        p.add_argument("--config", help="JSON run-config file (flags win)")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--jobs", type=int, default=None)
        p.add_argument("--k", type=int, default=None, help="cross-validation folds")
        p.add_argument("--task", choices=["CTD", "SF", "PF", "all"], default=None)
        p.add_argument("--features", choices=["linguistic_42", "embedding_ctd"], default=None)
        p.add_argument(
            "--model-config", dest="model_config", default=None,
            help=(
                f"submission config name ({', '.join(submission_config_names())}) "
                "or a pipeline-config JSON file"
            ),
        )

    p = sub.add_parser("validate", help="check a cohort manifest and its files")
    p.add_argument("--manifest", required=True)
    p.add_argument("--mode", choices=[CLASSIFICATION, REGRESSION], default=CLASSIFICATION)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("features", help="extract the linguistic feature table")
    common(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("synth", help="generate a synthetic cohort")
    p.add_argument("--out", required=True)
    p.add_argument("--spec", help="cohort spec JSON file")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--separation", type=float, default=None)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("train", help="fit a submission config on manifests")
    common(p, manifest_nargs="+")
    p.add_argument("--out", required=True, help="model file to write")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("cv", help="cross-validate a submission config")
    common(p, manifest_nargs="+")
    p.add_argument("--grid", help="grid-search this model kind instead", default=None)
    p.set_defaults(func=cmd_cv)

    p = sub.add_parser("predict", help="predict a manifest with a saved model")
    common(p)
    p.add_argument("--model", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("evaluate", help="score a predictions file against a manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--predictions", required=True)
    p.add_argument("--mode", choices=[CLASSIFICATION, REGRESSION], default=CLASSIFICATION)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("config", help="show the reference configuration")
    p.add_argument("--dump", action="store_true")
    p.set_defaults(func=cmd_config)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CogSpeechError as exc:
        return _fail(exc, 1)
    except Exception as exc:  # runtime failure, not a validation problem
        return _fail(exc, 2)


if __name__ == "__main__":
    sys.exit(main())
