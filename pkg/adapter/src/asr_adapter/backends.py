"""Pluggable processing backends, resolved by id before any file is touched.

Four roles with thin interfaces:
  VAD:     (samples, rate) -> list of voiced (start, end) sample spans
  ASR:     (audio path, samples, rate) -> list of sentences, each a token list
  parser:  sentence tokens -> annotated Token list (UPOS + head + deprel)
  encoder: (samples, rate) -> frame matrix (frames x 1280)

The built-in ids are deterministic reference implementations, so adapter
output is reproducible bit for bit; heavyweight neural backends can be
registered under new ids without touching the pipeline.
"""

from __future__ import annotations

from pathlib import Path
from typing import Callable

import numpy as np

from .errors import BackendFailure, UnknownBackend
from .formats import Token

EMBEDDING_DIM = 1280

FILLER_WORDS = frozenset({"um", "uh", "er", "ah", "erm", "hm", "hmm", "mm", "uhm"})

# --- voice activity -----------------------------------------------------------


def energy_vad(samples: np.ndarray, rate: int, frame_ms: float = 20.0, threshold: float = 0.02):
    """Non-overlapping RMS-gated frames; returns merged voiced sample spans."""
    frame = max(1, int(rate * frame_ms / 1000.0))
    spans: list[tuple[int, int]] = []
    for start in range(0, len(samples), frame):
        chunk = samples[start : start + frame]
        if chunk.size and float(np.sqrt(np.mean(np.square(chunk)))) >= threshold:
            end = start + chunk.size
            if spans and spans[-1][1] == start:
                spans[-1] = (spans[-1][0], end)
            else:
                spans.append((start, end))
    return spans


def full_vad(samples: np.ndarray, rate: int):
    """Treats the whole file as voiced (no trimming)."""
    return [(0, len(samples))] if len(samples) else []


VAD_BACKENDS: dict[str, Callable] = {"energy": energy_vad, "full": full_vad}

# --- transcription ------------------------------------------------------------


def scripted_asr(audio_path: Path, samples: np.ndarray, rate: int) -> list[list[str]]:
    """Verbatim transcription from a sidecar script: <audio stem>.txt next to
    the audio, one sentence per line, whitespace-tokenized, disfluencies kept.

    Models a verbatim-mode recognizer deterministically; raises
    BackendFailure when the script is missing.
    """
    script = audio_path.with_suffix(".txt")
    if not script.exists():
        raise BackendFailure(f"no transcript script next to {audio_path.name}")
    if len(samples) == 0:
        return []
    sentences = []
    for line in script.read_text(encoding="utf-8").splitlines():
        words = line.split()
        if words:
            sentences.append(words)
    return sentences


ASR_BACKENDS: dict[str, Callable] = {"scripted": scripted_asr}

# --- annotation -----------------------------------------------------------------

_DETS = frozenset({"the", "a", "an", "this", "that", "these", "those"})
_PRONOUNS = frozenset(
    {"i", "you", "he", "she", "it", "we", "they", "him", "her", "them", "me", "us", "there"}
)
_AUX = frozenset(
    {"is", "are", "was", "were", "be", "been", "being", "am",
     "has", "have", "had", "do", "does", "did", "will", "would", "can", "could"}
)
_SCONJ = frozenset({"when", "while", "because", "if", "since", "after", "before"})
_CCONJ = frozenset({"and", "or", "but"})
_ADP = frozenset({"in", "on", "at", "of", "with", "to", "from", "by", "into", "under"})
_IRREGULAR_VERBS = frozenset(
    {"fell", "ran", "went", "saw", "said", "stood", "took", "ate", "got", "came", "made",
     "falls", "runs", "goes", "sees", "says", "stands", "takes", "eats", "gets", "comes",
     "makes", "steals", "stole", "washes", "reaches", "spills", "laughs", "looks"}
)
_PUNCT = frozenset({".", "!", "?", ",", ";", ":"})


def _tag(word: str) -> str:
    lower = word.lower()
    if word in _PUNCT:
        return "PUNCT"
    if lower in FILLER_WORDS:
        return "INTJ"
    if lower in _DETS:
        return "DET"
    if lower in _PRONOUNS:
        return "PRON"
    if lower in _AUX:
        return "AUX"
    if lower in _SCONJ:
        return "SCONJ"
    if lower in _CCONJ:
        return "CCONJ"
    if lower in _ADP:
        return "ADP"
    if lower.isdigit():
        return "NUM"
    if lower.endswith("ly"):
        return "ADV"
    if lower in _IRREGULAR_VERBS or lower.endswith("ing") or lower.endswith("ed"):
        return "VERB"
    if word[:1].isupper():
        return "PROPN"
    return "NOUN"


def rule_parser(words: list[str]) -> list[Token]:
    """Deterministic shallow annotation producing a valid single-root tree.

    The root is the first verb (then first aux, then first content token);
    determiners attach rightward to the next nominal, nominals before the
    root become subjects and after it objects, everything else hangs off the
    root with its conventional relation.
    """
    n = len(words)
    upos = [_tag(w) for w in words]

    root = next((i for i, u in enumerate(upos) if u == "VERB"), None)
    if root is None:
        root = next((i for i, u in enumerate(upos) if u == "AUX"), None)
    if root is None:
        root = next(
            (i for i, u in enumerate(upos) if u not in ("PUNCT", "INTJ")), None
        )
    if root is None:
        root = 0

    heads = [root + 1] * n
    rels = ["dep"] * n
    heads[root] = 0
    rels[root] = "root"
    seen_subject = False
    seen_object = False

    for i, u in enumerate(upos):
        if i == root:
            continue
        if u == "DET":
            target = next(
                (j for j in range(i + 1, n) if upos[j] in ("NOUN", "PROPN") and j != i),
                None,
            )
            if target is not None:
                heads[i] = target + 1
                rels[i] = "det"
            else:
                rels[i] = "dep"
        elif u in ("NOUN", "PROPN", "PRON"):
            if i < root and not seen_subject:
                rels[i] = "nsubj"
                seen_subject = True
            elif i > root and not seen_object:
                rels[i] = "obj"
                seen_object = True
            else:
                rels[i] = "obl"
        elif u == "AUX":
            rels[i] = "aux"
        elif u == "INTJ":
            rels[i] = "discourse"
        elif u == "PUNCT":
            rels[i] = "punct"
        elif u == "ADV":
            rels[i] = "advmod"
        elif u == "ADP":
            target = next((j for j in range(i + 1, n) if upos[j] in ("NOUN", "PROPN")), None)
            if target is not None:
                heads[i] = target + 1
                rels[i] = "case"
            else:
                rels[i] = "dep"
        elif u == "SCONJ":
            rels[i] = "mark"
        elif u == "CCONJ":
            rels[i] = "cc"

    return [
        Token(form=w, lemma=w.lower(), upos=u, head=h, deprel=r)
        for w, u, h, r in zip(words, upos, heads, rels)
    ]


PARSER_BACKENDS: dict[str, Callable] = {"rule": rule_parser}

# --- encoding --------------------------------------------------------------------

# zero-padded FFT length whose one-sided spectrum has exactly 1280 bins
_FFT_LEN = (EMBEDDING_DIM - 1) * 2


def spectral_encoder(samples: np.ndarray, rate: int) -> np.ndarray:
    """Log-magnitude spectra over 25 ms windows with 10 ms hop, 1280 bins."""
    window = max(2, int(rate * 0.025))
    hop = max(1, int(rate * 0.010))
    if len(samples) == 0:
        return np.zeros((1, EMBEDDING_DIM))
    starts = range(0, max(1, len(samples) - window + 1), hop)
    frames = []
    for start in starts:
        chunk = samples[start : start + window]
        if chunk.size < window:
            chunk = np.pad(chunk, (0, window - chunk.size))
        spectrum = np.abs(np.fft.rfft(chunk, n=_FFT_LEN))
        frames.append(np.log1p(spectrum))
    return np.stack(frames)


ENCODER_BACKENDS: dict[str, Callable] = {"spectral": spectral_encoder}


def resolve(registry: dict[str, Callable], backend_id: str, role: str) -> Callable:
    try:
        return registry[backend_id]
    except KeyError as exc:
        raise UnknownBackend(
            f"unknown {role} backend {backend_id!r}; available: {sorted(registry)}"
        ) from exc
