from __future__ import annotations

from pathlib import Path

import numpy as np

from cogspeech.dataset import CLASSIFICATION, Dataset
from cogspeech.transcripts import Task

FIXTURES = Path(__file__).parent / "fixtures"


def blob_dataset(n_per_class=50, d=42, sep=3.0, seed=0, axes_per_class=3):
    """Three Gaussian blobs; class c sits sep standard deviations out along
    each of its own axes_per_class coordinate axes."""
    rng = np.random.default_rng(seed)
    xs, ys = [], []
    for c in range(3):
        mean = np.zeros(d)
        mean[c * axes_per_class : (c + 1) * axes_per_class] = sep
        xs.append(rng.normal(size=(n_per_class, d)) + mean)
        ys.append(np.full(n_per_class, c))
    X = np.vstack(xs)
    y = np.concatenate(ys)
    return Dataset(
        X=X,
        y=y,
        task_kind=CLASSIFICATION,
        columns=tuple(f"f{j}" for j in range(d)),
        ids=tuple(f"s{i:04d}" for i in range(X.shape[0])),
    )


# Hand-computed oracle table for the fixture corpus. Every count below was
# tallied by hand from the annotated files; the feature values are the direct
# evaluation of the thirteen formulas plus duration, written as exact
# fractions of those hand counts.
FIXTURE_ORACLE = {
    "fix1_ctd.conllu": {
        "task": Task.CTD,
        "duration": 30.0,
        "counts": dict(
            pronoun_count=1, definite_np_count=1, indefinite_np_count=1,
            filler_word_count=1, total_word_count=10, actual_word_count=9,
            adverbial_adjunct_count=1, total_sentence_count_punct=1,
            total_sentence_count_sentstruct=2, total_clause_count_minimal=2,
            total_clause_count_comprehensive=2, adjunct_clause_count=0,
        ),
        "features": [
            30.0, 1 / 3, 1 / 3, 1 / 3, 3 / 30, 1 / 30, 10 / 30, 9 / 10,
            1 / 1, 1 / 2, 2 / 30, 2 / 30, 0.0, 0.0,
        ],
        "zero_denominators": 0,
    },
    "fix2_ctd.conllu": {
        "task": Task.CTD,
        "duration": 60.0,
        "counts": dict(
            pronoun_count=2, definite_np_count=2, indefinite_np_count=0,
            filler_word_count=0, total_word_count=12, actual_word_count=12,
            adverbial_adjunct_count=1, total_sentence_count_punct=1,
            total_sentence_count_sentstruct=2, total_clause_count_minimal=4,
            total_clause_count_comprehensive=4, adjunct_clause_count=1,
        ),
        "features": [
            60.0, 2 / 4, 2 / 4, 0.0, 4 / 60, 0.0, 12 / 60, 12 / 12,
            1 / 1, 1 / 2, 4 / 60, 4 / 60, 1 / 4, 1 / 4,
        ],
        "zero_denominators": 0,
    },
    "fix3_sf.conllu": {
        "task": Task.SF,
        "duration": 60.0,
        "counts": dict(
            pronoun_count=0, definite_np_count=1, indefinite_np_count=2,
            filler_word_count=2, total_word_count=6, actual_word_count=4,
            adverbial_adjunct_count=0, total_sentence_count_punct=0,
            total_sentence_count_sentstruct=3, total_clause_count_minimal=0,
            total_clause_count_comprehensive=0, adjunct_clause_count=0,
        ),
        "features": [
            60.0, 0.0, 1 / 3, 2 / 3, 3 / 60, 2 / 60, 6 / 60, 4 / 6,
            0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
        ],
        "zero_denominators": 3,  # punct-sentence ratio and the two clause ratios
    },
    "fix4_pf.conllu": {
        "task": Task.PF,
        "duration": 45.0,
        "counts": dict(
            pronoun_count=0, definite_np_count=0, indefinite_np_count=0,
            filler_word_count=0, total_word_count=0, actual_word_count=0,
            adverbial_adjunct_count=0, total_sentence_count_punct=0,
            total_sentence_count_sentstruct=0, total_clause_count_minimal=0,
            total_clause_count_comprehensive=0, adjunct_clause_count=0,
        ),
        "features": [45.0] + [0.0] * 13,
        "zero_denominators": 8,
    },
    "fix5_ctd.conllu": {
        "task": Task.CTD,
        "duration": 40.0,
        "counts": dict(
            pronoun_count=2, definite_np_count=1, indefinite_np_count=1,
            filler_word_count=0, total_word_count=9, actual_word_count=9,
            adverbial_adjunct_count=0, total_sentence_count_punct=1,
            total_sentence_count_sentstruct=1, total_clause_count_minimal=2,
            total_clause_count_comprehensive=3, adjunct_clause_count=0,
        ),
        "features": [
            40.0, 2 / 4, 1 / 4, 1 / 4, 4 / 40, 0.0, 9 / 40, 9 / 9,
            0 / 1, 0 / 1, 2 / 40, 3 / 40, 0.0, 0.0,
        ],
        "zero_denominators": 0,
    },
    "fix6_pf.conllu": {
        "task": Task.PF,
        "duration": 50.0,
        "counts": dict(
            pronoun_count=2, definite_np_count=0, indefinite_np_count=2,
            filler_word_count=2, total_word_count=9, actual_word_count=7,
            adverbial_adjunct_count=0, total_sentence_count_punct=0,
            total_sentence_count_sentstruct=2, total_clause_count_minimal=2,
            total_clause_count_comprehensive=2, adjunct_clause_count=0,
        ),
        "features": [
            50.0, 2 / 4, 0.0, 2 / 4, 4 / 50, 2 / 50, 9 / 50, 7 / 9,
            0.0, 0 / 2, 2 / 50, 2 / 50, 0 / 2, 0 / 2,
        ],
        "zero_denominators": 1,  # punct-sentence ratio only
    },
}


