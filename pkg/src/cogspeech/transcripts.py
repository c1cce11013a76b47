"""Annotated-transcript documents and their file format.

The on-disk format is a 6-column subset of the CoNLL-U layout:
tab-separated ID, FORM, LEMMA, UPOS, HEAD, DEPREL per token line, '#' comment
lines, one blank line between sentences. Extra trailing columns (up to 10
total) are ignored; a full 10-column CoNLL-U row is recognized as such, with
HEAD/DEPREL read from their standard positions and XPOS/FEATS/DEPS/MISC
dropped, so off-the-shelf parser output loads unmodified. Multi-word-token
ranges and empty nodes (decimal IDs) are rejected: the feature math is
defined over plain token counts.
"""

from __future__ import annotations

import io
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import IO, Iterable, Union

from .errors import (
    BadHeadReference,
    MalformedLine,
    NonPositiveDuration,
    UnknownUposTag,
)

UPOS_TAGS = frozenset(
    {
        "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
        "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X",
    }
)

# Filler flagging requires an interjection-like tag on top of the lexicon hit,
# so content words that happen to share a surface form never count as fillers.
FILLER_UPOS = frozenset({"INTJ", "X"})

TERMINAL_PUNCT = frozenset({".", "!", "?"})

DEFAULT_FILLER_LEXICON = frozenset(
    {"um", "uh", "er", "ah", "erm", "hm", "hmm", "mm", "uhm"}
)

_ID_RE = re.compile(r"^[1-9][0-9]*$")


class Task(str, Enum):
    """The three elicitation tasks."""

    CTD = "CTD"
    SF = "SF"
    PF = "PF"

    def __str__(self) -> str:  # manifest / column-name rendering
        return self.value


TASK_ORDER = (Task.CTD, Task.SF, Task.PF)


@dataclass(frozen=True)
class AnnotatedToken:
    index: int              # 1-based position within sentence
    surface_form: str
    lemma: str
    upos: str
    head: int               # 0 = syntactic root, else 1-based token index
    deprel: str
    is_filler: bool = False


@dataclass(frozen=True)
class AnnotatedSentence:
    tokens: tuple[AnnotatedToken, ...]
    ends_with_terminal_punct: bool

    @property
    def root_index(self) -> int:
        for tok in self.tokens:
            if tok.head == 0:
                return tok.index
        raise BadHeadReference("sentence has no root")

    def token(self, index: int) -> AnnotatedToken:
        return self.tokens[index - 1]


@dataclass(frozen=True)
class AnnotatedTranscript:
    participant_id: str
    task: Task
    duration_seconds: float
    sentences: tuple[AnnotatedSentence, ...]

    @property
    def n_tokens(self) -> int:
        return sum(len(s.tokens) for s in self.sentences)


Source = Union[str, Path, bytes, IO[bytes], IO[str]]


def _read_text(source: Source) -> str:
    if isinstance(source, (str, Path)):
        data = Path(source).read_bytes()
    elif isinstance(source, bytes):
        data = source
    else:
        data = source.read()
        if isinstance(data, str):
            return data
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise MalformedLine(f"not valid UTF-8: {exc}") from exc


def _validate_sentence(rows: list[tuple[int, str, str, str, int, str]], line_nos: list[int]) -> None:
    n = len(rows)
    seen_root = 0
    for pos, (idx, _form, _lemma, _upos, head, _rel) in enumerate(rows):
        line = line_nos[pos]
        if idx != pos + 1:
            raise MalformedLine(f"line {line}: token id {idx} breaks contiguous numbering from 1")
        if head == idx:
            raise BadHeadReference(f"line {line}: token {idx} heads itself")
        if head > n:
            raise BadHeadReference(f"line {line}: head {head} exceeds sentence length {n}")
        if head == 0:
            seen_root += 1
    if seen_root != 1:
        raise BadHeadReference(
            f"sentence ending at line {line_nos[-1]}: expected exactly one root, found {seen_root}"
        )
    # Cycle check: walking head links from any token must reach the root
    # within n steps. head != index alone does not exclude longer cycles.
    heads = [r[4] for r in rows]
    for start in range(1, n + 1):
        cur = start
        for _ in range(n):
            cur = heads[cur - 1]
            if cur == 0:
                break
        else:
            raise BadHeadReference(
                f"sentence ending at line {line_nos[-1]}: head links of token {start} form a cycle"
            )


def parse_transcript(
    source: Source,
    participant_id: str,
    task: Task | str,
    duration_seconds: float,
    filler_lexicon: frozenset[str] | set[str] = DEFAULT_FILLER_LEXICON,
) -> AnnotatedTranscript:
    """Parse one annotated transcript. An empty file yields zero sentences."""
    task = Task(task)
    try:
        dur = float(duration_seconds)
    except (TypeError, ValueError) as exc:
        raise NonPositiveDuration(f"duration {duration_seconds!r} is not a number") from exc
    if not dur > 0:
        raise NonPositiveDuration(f"duration must be > 0 seconds, got {dur}")

    text = _read_text(source)
    lexicon = {w.lower() for w in filler_lexicon}

    sentences: list[AnnotatedSentence] = []
    rows: list[tuple[int, str, str, str, int, str]] = []
    line_nos: list[int] = []

    def flush() -> None:
        if not rows:
            return
        _validate_sentence(rows, line_nos)
        tokens = tuple(
            AnnotatedToken(
                index=idx,
                surface_form=form,
                lemma=lemma,
                upos=upos,
                head=head,
                deprel=rel,
                is_filler=form.lower() in lexicon and upos in FILLER_UPOS,
            )
            for idx, form, lemma, upos, head, rel in rows
        )
        sentences.append(
            AnnotatedSentence(
                tokens=tokens,
                ends_with_terminal_punct=tokens[-1].surface_form in TERMINAL_PUNCT,
            )
        )
        rows.clear()
        line_nos.clear()

    for line_no, raw in enumerate(text.split("\n"), start=1):
        line = raw.rstrip("\r")
        if not line.strip():
            flush()
            continue
        if line.startswith("#"):
            continue
        cols = line.split("\t")
        if not 6 <= len(cols) <= 10:
            raise MalformedLine(f"line {line_no}: expected 6-10 tab-separated columns, got {len(cols)}")
        if len(cols) == 10:
            # full CoNLL-U row: HEAD and DEPREL sit at columns 7-8, and the
            # four extra columns (XPOS, FEATS, DEPS, MISC) are ignored
            tok_id, form, lemma, upos, head_s, rel = (
                cols[0], cols[1], cols[2], cols[3], cols[6], cols[7],
            )
        else:
            tok_id, form, lemma, upos, head_s, rel = cols[:6]
        if not _ID_RE.match(tok_id):
            raise MalformedLine(
                f"line {line_no}: token id {tok_id!r} is not a positive integer "
                "(ranges and empty nodes are not supported)"
            )
        if not form or not lemma or not rel:
            raise MalformedLine(f"line {line_no}: FORM, LEMMA and DEPREL must be non-empty")
        if upos not in UPOS_TAGS:
            raise UnknownUposTag(f"line {line_no}: {upos!r} is not a universal POS tag")
        if not re.match(r"^[0-9]+$", head_s):
            raise BadHeadReference(f"line {line_no}: head {head_s!r} is not a non-negative integer")
        rows.append((int(tok_id), form, lemma, upos, int(head_s), rel))
        line_nos.append(line_no)
    flush()

    return AnnotatedTranscript(
        participant_id=participant_id,
        task=task,
        duration_seconds=dur,
        sentences=tuple(sentences),
    )


def to_conllu(transcript: AnnotatedTranscript) -> str:
    """Serialize back to the 6-column file format (comments are not kept)."""
    blocks = []
    for sent in transcript.sentences:
        lines = [
            f"{t.index}\t{t.surface_form}\t{t.lemma}\t{t.upos}\t{t.head}\t{t.deprel}"
            for t in sent.tokens
        ]
        blocks.append("\n".join(lines))
    if not blocks:
        return ""
    return "\n\n".join(blocks) + "\n"


def write_transcript(transcript: AnnotatedTranscript, path: str | Path) -> None:
    Path(path).write_text(to_conllu(transcript), encoding="utf-8")
