"""Linguistic counts and the 14-feature task vector.

Counting rules are fixed here (and overridable through FeatureConfig):

- pronoun_count: tokens tagged PRON, excluding filler-flagged tokens.
- Noun phrases: one per NOUN/PROPN token. Definite if a `det` dependent has a
  definite-article lemma, the head is PROPN, or a possessive dependent is
  attached; indefinite otherwise (bare nouns and a/an included).
- total_word_count: every non-PUNCT token, fillers included (configurable);
  actual_word_count = total - fillers.
- adverbial adjuncts: advmod/advcl tokens whose head is VERB/AUX.
- Sentence counts: punct-terminated sentences vs annotation blocks.
- Clauses: minimal = heads owning an explicit subject plus a verbal root;
  comprehensive adds heads attached via clausal relations (ccomp, xcomp,
  advcl, acl, acl:relcl, csubj, conj under a verbal head). Adjunct clauses
  are the advcl tokens.
- Any ratio with a zero denominator evaluates to 0.0 and is recorded as a
  warning, never an error: one-word fluency answers legitimately produce
  zero clauses.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import IO, Iterable, Mapping, Union

from .errors import (
    AllTasksMissing,
    InvalidFeatureVector,
    MissingColumn,
    MissingTask,
    NonPositiveDuration,
)
from .transcripts import (
    AnnotatedSentence,
    AnnotatedTranscript,
    DEFAULT_FILLER_LEXICON,
    Task,
    TASK_ORDER,
)

FEATURE_NAMES = (
    "duration",
    "pronoun_ratio",
    "percent_definite",
    "percent_indefinite",
    "total_np_rate",
    "filler_word_rate",
    "total_word_count_rate",
    "active_interaction",
    "adverbial_adjunct_ratio_punct",
    "adverbial_adjunct_ratio_sentstruct",
    "total_clause_rate_minimal",
    "total_clause_rate_comprehensive",
    "adjunct_clause_ratio_minimal",
    "adjunct_clause_ratio_comprehensive",
)

PARTICIPANT_COLUMNS = tuple(
    f"{task}__{name}" for task in TASK_ORDER for name in FEATURE_NAMES
)

# Bounded-by-construction ratios. adjunct_clause_ratio_minimal is excluded:
# an adverbial clause head without its own overt subject is counted by the
# numerator but not by the minimal clause count, so that ratio can exceed 1.
_UNIT_INTERVAL_FEATURES = frozenset(
    {
        "pronoun_ratio",
        "percent_definite",
        "percent_indefinite",
        "active_interaction",
        "adjunct_clause_ratio_comprehensive",
    }
)


@dataclass(frozen=True)
class FeatureConfig:
    filler_lexicon: frozenset[str] = DEFAULT_FILLER_LEXICON
    definite_lemmas: frozenset[str] = frozenset({"the", "this", "that", "these", "those"})
    possessive_deprels: frozenset[str] = frozenset({"nmod:poss", "poss"})
    subject_deprels: frozenset[str] = frozenset({"nsubj", "nsubj:pass", "csubj", "expl"})
    clause_attach_deprels: frozenset[str] = frozenset(
        {"ccomp", "xcomp", "advcl", "acl", "acl:relcl", "csubj"}
    )
    adverbial_deprels: frozenset[str] = frozenset({"advmod", "advcl"})
    adjunct_clause_deprel: str = "advcl"
    verbal_upos: frozenset[str] = frozenset({"VERB", "AUX"})
    include_fillers_in_total: bool = True
    # Maps a parser's relation labels onto the Universal Dependencies names
    # used by the rules above, e.g. {"nsubjpass": "nsubj:pass"}.
    relation_map: Mapping[str, str] = field(default_factory=dict)

    def canon(self, deprel: str) -> str:
        return self.relation_map.get(deprel, deprel)

    def rel_in(self, deprel: str, relset: frozenset[str]) -> bool:
        rel = self.canon(deprel)
        return rel in relset or rel.split(":", 1)[0] in relset


DEFAULT_FEATURE_CONFIG = FeatureConfig()


@dataclass(frozen=True)
class LinguisticCounts:
    pronoun_count: int = 0
    definite_np_count: int = 0
    indefinite_np_count: int = 0
    filler_word_count: int = 0
    total_word_count: int = 0
    actual_word_count: int = 0
    adverbial_adjunct_count: int = 0
    total_sentence_count_punct: int = 0
    total_sentence_count_sentstruct: int = 0
    total_clause_count_minimal: int = 0
    total_clause_count_comprehensive: int = 0
    adjunct_clause_count: int = 0

    def __post_init__(self) -> None:
        for name, value in self.__dict__.items():
            if value < 0:
                raise InvalidFeatureVector(f"{name} must be nonnegative, got {value}")
        if self.total_clause_count_minimal > self.total_clause_count_comprehensive:
            raise InvalidFeatureVector("minimal clause count exceeds comprehensive clause count")
        if self.adjunct_clause_count > self.total_clause_count_comprehensive:
            raise InvalidFeatureVector("adjunct clause count exceeds comprehensive clause count")
        if self.total_sentence_count_punct > self.total_sentence_count_sentstruct:
            raise InvalidFeatureVector("punct sentence count exceeds sentence block count")

    def __add__(self, other: "LinguisticCounts") -> "LinguisticCounts":
        return LinguisticCounts(
            **{k: getattr(self, k) + getattr(other, k) for k in self.__dict__}
        )


def _sentence_counts(sent: AnnotatedSentence, cfg: FeatureConfig) -> LinguisticCounts:
    children: dict[int, list] = {}
    for tok in sent.tokens:
        children.setdefault(tok.head, []).append(tok)

    pronouns = definite = indefinite = fillers = words = adverbial = 0
    for tok in sent.tokens:
        if tok.is_filler:
            fillers += 1
        if tok.upos != "PUNCT":
            if cfg.include_fillers_in_total or not tok.is_filler:
                words += 1
        if tok.upos == "PRON" and not tok.is_filler:
            pronouns += 1
        if tok.upos in ("NOUN", "PROPN"):
            deps = children.get(tok.index, [])
            if tok.upos == "PROPN":
                definite += 1
            elif any(
                cfg.rel_in(d.deprel, frozenset({"det"}))
                and d.lemma.lower() in cfg.definite_lemmas
                for d in deps
            ) or any(cfg.canon(d.deprel) in cfg.possessive_deprels for d in deps):
                definite += 1
            else:
                indefinite += 1
        if cfg.rel_in(tok.deprel, cfg.adverbial_deprels) and tok.head > 0:
            if sent.token(tok.head).upos in cfg.verbal_upos:
                adverbial += 1

    minimal: set[int] = set()
    for tok in sent.tokens:
        if cfg.rel_in(tok.deprel, cfg.subject_deprels) and tok.head > 0:
            minimal.add(tok.head)
    root = sent.root_index
    if sent.token(root).upos in cfg.verbal_upos:
        minimal.add(root)

    comprehensive = set(minimal)
    for tok in sent.tokens:
        if cfg.rel_in(tok.deprel, cfg.clause_attach_deprels):
            comprehensive.add(tok.index)
        elif cfg.rel_in(tok.deprel, frozenset({"conj"})) and tok.head > 0:
            if sent.token(tok.head).upos in cfg.verbal_upos:
                comprehensive.add(tok.index)

    adjunct = sum(
        1 for tok in sent.tokens if cfg.rel_in(tok.deprel, frozenset({cfg.adjunct_clause_deprel}))
    )

    fillers_in_total = fillers if cfg.include_fillers_in_total else 0
    return LinguisticCounts(
        pronoun_count=pronouns,
        definite_np_count=definite,
        indefinite_np_count=indefinite,
        filler_word_count=fillers,
        total_word_count=words,
        actual_word_count=words - fillers_in_total,
        adverbial_adjunct_count=adverbial,
        total_sentence_count_punct=1 if sent.ends_with_terminal_punct else 0,
        total_sentence_count_sentstruct=1,
        total_clause_count_minimal=len(minimal),
        total_clause_count_comprehensive=len(comprehensive),
        adjunct_clause_count=adjunct,
    )


def extract_counts(
    transcript: AnnotatedTranscript, config: FeatureConfig = DEFAULT_FEATURE_CONFIG
) -> LinguisticCounts:
    """Raw counts for one transcript; additive over its sentence list."""
    counts = LinguisticCounts()
    for sent in transcript.sentences:
        counts = counts + _sentence_counts(sent, config)
    return counts


@dataclass(frozen=True)
class TaskFeatureVector:
    task: Task
    values: tuple[float, ...]
    warnings: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if len(self.values) != len(FEATURE_NAMES):
            raise InvalidFeatureVector(
                f"expected {len(FEATURE_NAMES)} features, got {len(self.values)}"
            )
        for name, v in zip(FEATURE_NAMES, self.values):
            if v != v or v in (float("inf"), float("-inf")):
                raise InvalidFeatureVector(f"{name} is not finite: {v!r}")
            if name in _UNIT_INTERVAL_FEATURES and not 0.0 <= v <= 1.0:
                raise InvalidFeatureVector(f"{name} outside [0, 1]: {v!r}")
            if v < 0.0:
                raise InvalidFeatureVector(f"{name} is negative: {v!r}")

    def as_dict(self) -> dict[str, float]:
        return dict(zip(FEATURE_NAMES, self.values))


def compute_features(
    counts: LinguisticCounts, duration_seconds: float, task: Task | str = Task.CTD
) -> TaskFeatureVector:
    """Evaluate the 13 ratio/rate formulas plus duration, in canonical order."""
    if not duration_seconds > 0:
        raise NonPositiveDuration(f"duration must be > 0 seconds, got {duration_seconds}")
    warnings: list[str] = []

    def ratio(numer: float, denom: float, name: str) -> float:
        if denom == 0:
            warnings.append(f"{name}: zero denominator, feature set to 0.0")
            return 0.0
        return numer / denom

    c = counts
    dur = float(duration_seconds)
    np_total = c.pronoun_count + c.definite_np_count + c.indefinite_np_count
    values = (
        dur,
        ratio(c.pronoun_count, np_total, "pronoun_ratio"),
        ratio(c.definite_np_count, np_total, "percent_definite"),
        ratio(c.indefinite_np_count, np_total, "percent_indefinite"),
        np_total / dur,
        c.filler_word_count / dur,
        c.total_word_count / dur,
        ratio(c.actual_word_count, c.total_word_count, "active_interaction"),
        ratio(c.adverbial_adjunct_count, c.total_sentence_count_punct, "adverbial_adjunct_ratio_punct"),
        ratio(
            c.adverbial_adjunct_count,
            c.total_sentence_count_sentstruct,
            "adverbial_adjunct_ratio_sentstruct",
        ),
        c.total_clause_count_minimal / dur,
        c.total_clause_count_comprehensive / dur,
        ratio(c.adjunct_clause_count, c.total_clause_count_minimal, "adjunct_clause_ratio_minimal"),
        ratio(
            c.adjunct_clause_count,
            c.total_clause_count_comprehensive,
            "adjunct_clause_ratio_comprehensive",
        ),
    )
    return TaskFeatureVector(task=Task(task), values=values, warnings=tuple(warnings))


def extract_task_features(
    transcript: AnnotatedTranscript, config: FeatureConfig = DEFAULT_FEATURE_CONFIG
) -> TaskFeatureVector:
    return compute_features(
        extract_counts(transcript, config), transcript.duration_seconds, transcript.task
    )


@dataclass(frozen=True)
class ParticipantFeatureVector:
    participant_id: str
    values: tuple[float, ...]
    warnings: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if len(self.values) != len(PARTICIPANT_COLUMNS):
            raise InvalidFeatureVector(
                f"expected {len(PARTICIPANT_COLUMNS)} values, got {len(self.values)}"
            )
        for name, v in zip(PARTICIPANT_COLUMNS, self.values):
            if v != v or v in (float("inf"), float("-inf")):
                raise InvalidFeatureVector(f"{name} is not finite: {v!r}")

    @staticmethod
    def columns() -> tuple[str, ...]:
        return PARTICIPANT_COLUMNS


def assemble_participant_vector(
    participant_id: str,
    per_task: Mapping[Task, TaskFeatureVector],
    policy: str = "zero_fill",
) -> ParticipantFeatureVector:
    """Concatenate CTD ++ SF ++ PF task vectors into the 42-value row.

    policy "zero_fill" fills a missing task with an all-zero block and records
    a warning; policy "error" raises MissingTask instead.
    """
    if policy not in ("zero_fill", "error"):
        raise ValueError(f"unknown missing-task policy {policy!r}")
    if not per_task:
        raise AllTasksMissing(f"participant {participant_id!r}: no task vectors at all")
    values: list[float] = []
    warnings: list[str] = []
    for task in TASK_ORDER:
        tfv = per_task.get(task)
        if tfv is None:
            if policy == "error":
                raise MissingTask(f"participant {participant_id!r}: missing task {task}")
            warnings.append(f"missing task {task}: block filled with zeros")
            values.extend([0.0] * len(FEATURE_NAMES))
            continue
        if tfv.task != task:
            raise InvalidFeatureVector(
                f"participant {participant_id!r}: vector for {tfv.task} keyed under {task}"
            )
        values.extend(tfv.values)
        warnings.extend(f"{task}: {w}" for w in tfv.warnings)
    return ParticipantFeatureVector(
        participant_id=participant_id, values=tuple(values), warnings=tuple(warnings)
    )


Sink = Union[str, Path, IO[str]]


def _fmt(x: float) -> str:
    return repr(float(x))


def write_feature_table(vectors: Iterable[ParticipantFeatureVector], sink: Sink) -> int:
    """Write the 43-column feature table; floats round-trip exactly."""
    rows = 0
    own = isinstance(sink, (str, Path))
    fh: IO[str] = open(sink, "w", encoding="utf-8", newline="") if own else sink  # type: ignore[arg-type]
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("participant_id",) + PARTICIPANT_COLUMNS)
        for vec in vectors:
            writer.writerow([vec.participant_id] + [_fmt(v) for v in vec.values])
            rows += 1
    finally:
        if own:
            fh.close()
    return rows


def read_feature_table(source: Union[str, Path, IO[str]]) -> list[ParticipantFeatureVector]:
    own = isinstance(source, (str, Path))
    fh: IO[str] = open(source, "r", encoding="utf-8", newline="") if own else source  # type: ignore[arg-type]
    try:
        reader = csv.reader(fh)
        try:
            header = tuple(next(reader))
        except StopIteration as exc:
            raise MissingColumn("feature table is empty") from exc
        expected = ("participant_id",) + PARTICIPANT_COLUMNS
        if header != expected:
            raise MissingColumn("feature table header does not match the canonical 43 columns")
        out = []
        for cells in reader:
            if not cells:
                continue
            if len(cells) != len(expected):
                raise MissingColumn(f"feature row for {cells[0]!r} has {len(cells)} fields")
            out.append(
                ParticipantFeatureVector(
                    participant_id=cells[0], values=tuple(float(c) for c in cells[1:])
                )
            )
        return out
    finally:
        if own:
            fh.close()


def write_task_feature_table(
    rows: Iterable[tuple[str, TaskFeatureVector]], task: Task, sink: Sink
) -> int:
    """Single-task table: participant_id plus the 14 <task>__<name> columns."""
    count = 0
    own = isinstance(sink, (str, Path))
    fh: IO[str] = open(sink, "w", encoding="utf-8", newline="") if own else sink  # type: ignore[arg-type]
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["participant_id"] + [f"{task}__{n}" for n in FEATURE_NAMES])
        for pid, tfv in rows:
            if tfv.task != task:
                raise InvalidFeatureVector(f"row for {pid!r} is task {tfv.task}, expected {task}")
            writer.writerow([pid] + [_fmt(v) for v in tfv.values])
            count += 1
    finally:
        if own:
            fh.close()
    return count
