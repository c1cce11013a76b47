"""Synthetic cohorts: manifests, annotated transcripts, embeddings, labels.

Transcripts come from parameterized sentence templates with hand-authored
annotations, so every Table-style count is controlled and auditable; no
language model is involved. Embeddings are class-conditional Gaussians whose
means sit `separation` within-class standard deviations away from the shared
base along a per-class block of informative dimensions. MMSE is a noisy
monotone function of class unless a linear ground-truth signal is requested.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from .embeddings import write_embedding_binary
from .features import DEFAULT_FEATURE_CONFIG, assemble_participant_vector, extract_task_features
from .manifest import CohortManifest, ManifestRow, write_manifest
from .transcripts import (
    AnnotatedSentence,
    AnnotatedToken,
    AnnotatedTranscript,
    Task,
    TASK_ORDER,
    parse_transcript,
    write_transcript,
)

CLASS_NAMES = ("HC", "MCI", "AD")

# Default linear MMSE signal for regression benchmarks: weights over the
# high-variance columns of the 42-dim vector (fluency/word-rate up, fillers
# and pronoun reliance down), scaled so the signal has roughly 1.75 points of
# spread and stays inside [0, 30] before noise.
DEFAULT_SIGNAL_INTERCEPT = 23.0
DEFAULT_SIGNAL_WEIGHTS = {
    "CTD__total_word_count_rate": 2.1,
    "CTD__filler_word_rate": -28.0,
    "CTD__total_clause_rate_minimal": 5.6,
    "SF__total_word_count_rate": 4.2,
    "PF__total_word_count_rate": 4.2,
    "CTD__pronoun_ratio": -3.5,
}


def default_signal_coefficients() -> np.ndarray:
    from .features import PARTICIPANT_COLUMNS

    coef = np.zeros(len(PARTICIPANT_COLUMNS))
    index = {name: i for i, name in enumerate(PARTICIPANT_COLUMNS)}
    for name, weight in DEFAULT_SIGNAL_WEIGHTS.items():
        coef[index[name]] = weight
    return coef


@dataclass(frozen=True)
class ClassTemplate:
    """Per-class knobs for the sentence templates."""

    filler_rate: float          # chance of a leading filler per sentence
    pronoun_rate: float         # chance the subject is a pronoun
    definite_rate: float        # chance a non-pronoun subject NP is definite
    advcl_rate: float           # chance of an adverbial clause
    advmod_rate: float          # chance of a single-word adverbial
    punct_rate: float           # chance the sentence carries terminal punctuation
    ctd_sentences: tuple[int, int]
    fluency_items: tuple[int, int]


DEFAULT_TEMPLATES = {
    "HC": ClassTemplate(0.10, 0.30, 0.60, 0.45, 0.50, 0.90, (8, 12), (14, 20)),
    "MCI": ClassTemplate(0.25, 0.45, 0.50, 0.30, 0.40, 0.80, (6, 9), (10, 15)),
    "AD": ClassTemplate(0.45, 0.65, 0.35, 0.15, 0.25, 0.60, (4, 7), (6, 10)),
}


@dataclass(frozen=True)
class CohortSpec:
    train_counts: tuple[int, int, int] = (61, 44, 12)   # HC, MCI, AD
    dev_counts: tuple[int, int, int] = (21, 15, 4)
    mmse_fraction: float = 69 / 157
    embedding_dim: int = 1280
    informative_dims_per_class: int = 8
    separation: float = 1.0
    pooled_spread: float = 1.0
    frames: tuple[int, int] = (16, 40)
    mmse_class_means: tuple[float, float, float] = (28.5, 26.5, 22.0)
    mmse_sigma: float = 1.5
    mmse_clamp: tuple[float, float] = (19.0, 30.0)
    seed: int = 0
    templates: dict = field(default_factory=lambda: dict(DEFAULT_TEMPLATES))

    def to_json(self) -> str:
        payload = asdict(self)
        payload["templates"] = {k: asdict(v) for k, v in self.templates.items()}
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"

    @staticmethod
    def from_json(text: str) -> "CohortSpec":
        raw = json.loads(text)
        templates = {
            k: ClassTemplate(**{kk: tuple(vv) if isinstance(vv, list) else vv for kk, vv in v.items()})
            for k, v in raw.pop("templates", {}).items()
        } or dict(DEFAULT_TEMPLATES)
        fixed = {
            k: tuple(v) if isinstance(v, list) else v for k, v in raw.items()
        }
        return CohortSpec(templates=templates, **fixed)


_SUBJ_PRONOUNS = (("he", "he"), ("she", "she"), ("they", "they"))
_NOUNS = (
    ("boy", "boy"), ("girl", "girl"), ("mother", "mother"), ("cookie", "cookie"),
    ("jar", "jar"), ("stool", "stool"), ("sink", "sink"), ("plate", "plate"),
    ("window", "window"), ("water", "water"),
)
_VERBS = (
    ("falls", "fall"), ("reaches", "reach"), ("washes", "wash"), ("takes", "take"),
    ("spills", "spill"), ("stands", "stand"), ("laughs", "laugh"), ("looks", "look"),
)
_ADVERBS = (("quickly", "quickly"), ("quietly", "quietly"), ("slowly", "slowly"))
_FILLERS = ("um", "uh", "er")
_ANIMALS = (
    ("cat", "cat"), ("dog", "dog"), ("horse", "horse"), ("cow", "cow"), ("sheep", "sheep"),
    ("lion", "lion"), ("tiger", "tiger"), ("bear", "bear"), ("mouse", "mouse"), ("bird", "bird"),
)
_P_WORDS = (
    ("pot", "pot"), ("pan", "pan"), ("pear", "pear"), ("peach", "peach"), ("pig", "pig"),
    ("pen", "pen"), ("park", "park"), ("plant", "plant"), ("pillow", "pillow"), ("paper", "paper"),
)


def _pick(rng: np.random.Generator, options):
    return options[int(rng.integers(0, len(options)))]


def _ctd_sentence(rng: np.random.Generator, tpl: ClassTemplate) -> AnnotatedSentence:
    """One picture-description sentence with controlled annotations."""
    toks: list[tuple[str, str, str, int, str]] = []  # form, lemma, upos, head(slot), deprel
    # slots are filled with final 1-based ids once the length is known
    filler = rng.random() < tpl.filler_rate
    pronoun_subject = rng.random() < tpl.pronoun_rate
    definite = rng.random() < tpl.definite_rate
    advcl = rng.random() < tpl.advcl_rate
    advmod = rng.random() < tpl.advmod_rate
    punct = rng.random() < tpl.punct_rate

    ids: dict[str, int] = {}

    def add(name: str, form: str, lemma: str, upos: str, head_name: str | None, deprel: str):
        toks.append((form, lemma, upos, head_name, deprel))
        ids[name] = len(toks)

    if filler:
        add("filler", _pick(rng, _FILLERS), _pick(rng, _FILLERS), "INTJ", "verb", "discourse")
    if pronoun_subject:
        form, lemma = _pick(rng, _SUBJ_PRONOUNS)
        add("subj", form, lemma, "PRON", "verb", "nsubj")
    else:
        det, det_l = ("the", "the") if definite else ("a", "a")
        add("det", det, det_l, "DET", "subj", "det")
        form, lemma = _pick(rng, _NOUNS)
        add("subj", form, lemma, "NOUN", "verb", "nsubj")
    vform, vlemma = _pick(rng, _VERBS)
    add("verb", vform, vlemma, "VERB", None, "root")
    if advmod:
        form, lemma = _pick(rng, _ADVERBS)
        add("advmod", form, lemma, "ADV", "verb", "advmod")
    # object NP, definite at the same class rate
    obj_definite = rng.random() < tpl.definite_rate
    add("odet", *(("the", "the") if obj_definite else ("a", "a")), "DET", "obj", "det")
    oform, olemma = _pick(rng, _NOUNS)
    add("obj", oform, olemma, "NOUN", "verb", "obj")
    if advcl:
        add("mark", "when", "when", "SCONJ", "advverb", "mark")
        sform, slemma = _pick(rng, _SUBJ_PRONOUNS)
        add("advsubj", sform, slemma, "PRON", "advverb", "nsubj")
        avform, avlemma = _pick(rng, _VERBS)
        add("advverb", avform, avlemma, "VERB", "verb", "advcl")
    if punct:
        add("punct", ".", ".", "PUNCT", "verb", "punct")

    tokens = []
    for i, (form, lemma, upos, head_name, deprel) in enumerate(toks, start=1):
        head = 0 if head_name is None else ids[head_name]
        tokens.append(
            AnnotatedToken(
                index=i, surface_form=form, lemma=lemma, upos=upos, head=head,
                deprel=deprel, is_filler=(upos == "INTJ"),
            )
        )
    return AnnotatedSentence(
        tokens=tuple(tokens), ends_with_terminal_punct=tokens[-1].surface_form in {".", "!", "?"}
    )


def _fluency_sentence(rng: np.random.Generator, tpl: ClassTemplate, words) -> AnnotatedSentence:
    toks: list[AnnotatedToken] = []
    filler = rng.random() < tpl.filler_rate
    definite = rng.random() < (tpl.definite_rate / 2)
    form, lemma = _pick(rng, words)
    n_before = (1 if filler else 0) + (1 if definite else 0)
    root_id = n_before + 1
    idx = 1
    if filler:
        f = _pick(rng, _FILLERS)
        toks.append(AnnotatedToken(idx, f, f, "INTJ", root_id, "discourse", True))
        idx += 1
    if definite:
        toks.append(AnnotatedToken(idx, "the", "the", "DET", root_id, "det", False))
        idx += 1
    toks.append(AnnotatedToken(idx, form, lemma, "NOUN", 0, "root", False))
    return AnnotatedSentence(tokens=tuple(toks), ends_with_terminal_punct=False)


def _make_transcript(
    pid: str, task: Task, class_name: str, rng: np.random.Generator, templates
) -> AnnotatedTranscript:
    tpl: ClassTemplate = templates[class_name]
    if task == Task.CTD:
        n = int(rng.integers(tpl.ctd_sentences[0], tpl.ctd_sentences[1] + 1))
        sentences = tuple(_ctd_sentence(rng, tpl) for _ in range(n))
        duration = float(rng.uniform(45.0, 90.0))
    else:
        words = _ANIMALS if task == Task.SF else _P_WORDS
        n = int(rng.integers(tpl.fluency_items[0], tpl.fluency_items[1] + 1))
        sentences = tuple(_fluency_sentence(rng, tpl, words) for _ in range(n))
        duration = float(rng.uniform(55.0, 65.0))
    return AnnotatedTranscript(
        participant_id=pid, task=task, duration_seconds=duration, sentences=sentences
    )


def class_embedding_means(spec: CohortSpec) -> np.ndarray:
    """(3, dim) matrix of class-conditional means for pooled embeddings."""
    means = np.zeros((len(CLASS_NAMES), spec.embedding_dim))
    k = spec.informative_dims_per_class
    if 3 * k > spec.embedding_dim:
        raise ValueError("informative_dims_per_class * 3 exceeds the embedding dim")
    for c in range(len(CLASS_NAMES)):
        means[c, c * k : (c + 1) * k] = spec.separation * spec.pooled_spread
    return means


def _participant_plan(spec: CohortSpec):
    """Deterministic (pid, class_name, split) list: train block then dev."""
    plan = []
    idx = 1
    for split, counts in (("train", spec.train_counts), ("dev", spec.dev_counts)):
        for class_name, count in zip(CLASS_NAMES, counts):
            for _ in range(count):
                plan.append((f"p{idx:03d}", class_name, split))
                idx += 1
    return plan


def gen_cohort(
    spec: CohortSpec,
    out_dir: str | Path,
    mmse_override: dict[str, int] | None = None,
) -> CohortManifest:
    """Write transcripts, CTD embeddings, and the three manifest files.

    Returns the combined manifest. mmse_override, when given, assigns the
    provided MMSE integers instead of the class-conditional draw (used by the
    regression-signal generator).
    """
    out = Path(out_dir)
    (out / "transcripts").mkdir(parents=True, exist_ok=True)
    (out / "embeddings").mkdir(parents=True, exist_ok=True)
    plan = _participant_plan(spec)
    n_total = len(plan)

    master = np.random.default_rng(spec.seed)
    if mmse_override is None:
        n_mmse = int(round(spec.mmse_fraction * n_total))
        with_mmse = set(
            master.choice(n_total, size=n_mmse, replace=False).tolist()
        )
    else:
        with_mmse = set()

    means = class_embedding_means(spec)
    rows_by_split: dict[str, list[ManifestRow]] = {"train": [], "dev": []}

    for p_idx, (pid, class_name, split) in enumerate(plan):
        rng = np.random.default_rng((spec.seed, p_idx))
        class_idx = CLASS_NAMES.index(class_name)

        if mmse_override is not None:
            mmse = mmse_override.get(pid)
        elif p_idx in with_mmse:
            lo, hi = spec.mmse_clamp
            raw = rng.normal(spec.mmse_class_means[class_idx], spec.mmse_sigma)
            mmse = int(round(float(np.clip(raw, lo, hi))))
        else:
            mmse = None

        emb_rel = None
        for task in TASK_ORDER:
            transcript = _make_transcript(pid, task, class_name, rng, spec.templates)
            rel = f"transcripts/{pid}_{task}.conllu"
            write_transcript(transcript, out / rel)
            if task == Task.CTD:
                frames = int(rng.integers(spec.frames[0], spec.frames[1] + 1))
                # per-frame noise scaled so the pooled vector has exactly
                # pooled_spread per-dimension standard deviation
                sigma_f = spec.pooled_spread * np.sqrt(frames)
                matrix = means[class_idx] + rng.normal(
                    0.0, sigma_f, size=(frames, spec.embedding_dim)
                )
                emb_rel = f"embeddings/{pid}_CTD.emb"
                write_embedding_binary(matrix, out / emb_rel)
            rows_by_split[split].append(
                ManifestRow(
                    participant_id=pid,
                    task=task,
                    transcript_path=rel,
                    embedding_path=emb_rel if task == Task.CTD else None,
                    duration_seconds=transcript.duration_seconds,
                    diagnosis=class_name,
                    mmse=mmse,
                )
            )

    train = CohortManifest(rows=tuple(rows_by_split["train"]))
    dev = CohortManifest(rows=tuple(rows_by_split["dev"]))
    combined = CohortManifest(rows=tuple(rows_by_split["train"] + rows_by_split["dev"]))
    write_manifest(train, out / "train_manifest.csv")
    write_manifest(dev, out / "dev_manifest.csv")
    write_manifest(combined, out / "manifest.csv")
    (out / "cohort_spec.json").write_text(spec.to_json(), encoding="utf-8")
    return combined


def gen_regression_signal(
    spec: CohortSpec,
    coefficients,
    noise_sigma: float,
    out_dir: str | Path,
    intercept: float = DEFAULT_SIGNAL_INTERCEPT,
) -> tuple[CohortManifest, dict]:
    """Cohort whose MMSE is clamp(intercept + w . features + noise, 0, 30).

    Every participant gets an MMSE value. The exact pre-rounding targets and
    the generating coefficients are recorded in ground_truth.json so oracle
    checks can recover the relation.
    """
    coef = np.asarray(coefficients, dtype=np.float64)
    if coef.shape != (42,):
        raise ValueError(f"coefficients must have shape (42,), got {coef.shape}")
    if not np.isfinite(coef).all():
        raise ValueError("coefficients must be finite")

    out = Path(out_dir)
    # First pass: write the corpus without MMSE, then recompute from the
    # actual extracted features so the recorded relation is exact.
    probe = replace(spec, mmse_fraction=0.0)
    manifest = gen_cohort(probe, out)

    rng = np.random.default_rng((spec.seed, 0xFEED))
    per_pid: dict[str, dict] = {}
    mmse_by_pid: dict[str, int] = {}
    for pid in manifest.participant_ids:
        per_task = {}
        for row in manifest.rows_for(pid):
            transcript = parse_transcript(
                out / row.transcript_path, pid, row.task, row.duration_seconds
            )
            per_task[row.task] = extract_task_features(transcript, DEFAULT_FEATURE_CONFIG)
        vec = assemble_participant_vector(pid, per_task)
        linear = float(intercept + coef @ np.asarray(vec.values))
        noisy = linear + float(rng.normal(0.0, noise_sigma)) if noise_sigma > 0 else linear
        clamped = float(np.clip(noisy, 0.0, 30.0))
        mmse_by_pid[pid] = int(round(clamped))
        per_pid[pid] = {"linear": linear, "target": clamped}

    manifest = gen_cohort(replace(spec, mmse_fraction=0.0), out, mmse_override=mmse_by_pid)
    truth = {
        "intercept": intercept,
        "coefficients": coef.tolist(),
        "noise_sigma": noise_sigma,
        "per_participant": {k: per_pid[k] for k in sorted(per_pid)},
    }
    (out / "ground_truth.json").write_text(
        json.dumps(truth, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    return manifest, truth
