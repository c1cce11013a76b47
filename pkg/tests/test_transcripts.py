import io

import pytest
from hypothesis import given, settings, strategies as st

from cogspeech.errors import (
    BadHeadReference,
    CogSpeechError,
    MalformedLine,
    NonPositiveDuration,
    UnknownUposTag,
)
from cogspeech.transcripts import (
    AnnotatedSentence,
    AnnotatedToken,
    AnnotatedTranscript,
    Task,
    UPOS_TAGS,
    parse_transcript,
    to_conllu,
)


def test_nine_token_fixture(fixture_dir):
    t = parse_transcript(fixture_dir / "nine_tokens.conllu", "p1", Task.CTD, 30.0)
    assert len(t.sentences) == 2
    assert t.n_tokens == 9
    assert t.sentences[0].ends_with_terminal_punct
    assert not t.sentences[1].ends_with_terminal_punct


def test_empty_file_yields_zero_sentences():
    t = parse_transcript(b"", "p1", Task.SF, 60.0)
    assert t.sentences == ()
    assert t.n_tokens == 0


def test_comment_only_file_yields_zero_sentences():
    t = parse_transcript(b"# nothing here\n", "p1", Task.SF, 60.0)
    assert t.sentences == ()


def test_self_loop_head_rejected():
    body = b"1\thi\thi\tINTJ\t1\tdiscourse\n"
    with pytest.raises(BadHeadReference):
        parse_transcript(body, "p1", Task.CTD, 10.0)


def test_head_out_of_range_rejected():
    body = b"1\thi\thi\tINTJ\t5\tdiscourse\n"
    with pytest.raises(BadHeadReference):
        parse_transcript(body, "p1", Task.CTD, 10.0)


def test_two_cycle_rejected():
    body = b"1\ta\ta\tNOUN\t2\tconj\n2\tb\tb\tNOUN\t1\tconj\n3\tc\tc\tNOUN\t0\troot\n"
    with pytest.raises(BadHeadReference):
        parse_transcript(body, "p1", Task.CTD, 10.0)


def test_multiple_roots_rejected():
    body = b"1\ta\ta\tNOUN\t0\troot\n2\tb\tb\tNOUN\t0\troot\n"
    with pytest.raises(BadHeadReference):
        parse_transcript(body, "p1", Task.CTD, 10.0)


def test_wrong_column_count_rejected():
    with pytest.raises(MalformedLine):
        parse_transcript(b"1\tword\tword\tNOUN\t0\n", "p1", Task.CTD, 10.0)


def test_ten_column_conllu_accepted():
    body = b"1\tword\tword\tNOUN\tNN\t_\t0\troot\t_\t_\n"
    t = parse_transcript(body, "p1", Task.CTD, 10.0)
    assert t.n_tokens == 1
    # column 4 is UPOS; columns 7-10 (here: real CoNLL-U extras) are ignored
    assert t.sentences[0].tokens[0].upos == "NOUN"
    assert t.sentences[0].tokens[0].head == 0


def test_mwt_range_rejected():
    body = b"1-2\tcannot\t_\t_\t_\t_\n1\tcan\tcan\tAUX\t0\troot\n"
    with pytest.raises(CogSpeechError):
        parse_transcript(body, "p1", Task.CTD, 10.0)


def test_decimal_id_rejected():
    body = b"1.1\tghost\tghost\tNOUN\t0\troot\n"
    with pytest.raises(MalformedLine):
        parse_transcript(body, "p1", Task.CTD, 10.0)


def test_noncontiguous_ids_rejected():
    body = b"1\ta\ta\tNOUN\t0\troot\n3\tb\tb\tNOUN\t1\tconj\n"
    with pytest.raises(MalformedLine):
        parse_transcript(body, "p1", Task.CTD, 10.0)


def test_unknown_upos_rejected():
    body = b"1\tword\tword\tNQ\t0\troot\n"
    with pytest.raises(UnknownUposTag):
        parse_transcript(body, "p1", Task.CTD, 10.0)


@pytest.mark.parametrize("duration", [0.0, -1.0])
def test_nonpositive_duration_rejected(duration):
    with pytest.raises(NonPositiveDuration):
        parse_transcript(b"", "p1", Task.CTD, duration)


def test_filler_requires_interjection_tag():
    body = b"1\tum\tum\tINTJ\t2\tdiscourse\n2\tum\tum\tNOUN\t0\troot\n"
    t = parse_transcript(body, "p1", Task.CTD, 10.0)
    flags = [tok.is_filler for tok in t.sentences[0].tokens]
    assert flags == [True, False]


def test_terminal_punct_detection():
    body = b"1\tok\tok\tINTJ\t0\troot\n2\t!\t!\tPUNCT\t1\tpunct\n"
    t = parse_transcript(body, "p1", Task.CTD, 10.0)
    assert t.sentences[0].ends_with_terminal_punct


# --- round-trip property ----------------------------------------------------

_FORM = st.text(
    alphabet=st.characters(
        min_codepoint=33, max_codepoint=0x17F, blacklist_characters="#\t"
    ),
    min_size=1,
    max_size=8,
)
_DEPRELS = st.sampled_from(
    ["nsubj", "obj", "det", "advmod", "advcl", "conj", "discourse", "punct", "dep"]
)


@st.composite
def sentences(draw):
    n = draw(st.integers(min_value=1, max_value=8))
    # attach token i to a previously-placed token in a random permutation,
    # which guarantees a single root and an acyclic head graph
    order = draw(st.permutations(list(range(1, n + 1))))
    heads = {order[0]: 0}
    for pos, idx in enumerate(order[1:], start=1):
        parent = order[draw(st.integers(min_value=0, max_value=pos - 1))]
        heads[idx] = parent
    tokens = []
    for i in range(1, n + 1):
        form = draw(_FORM)
        tokens.append(
            AnnotatedToken(
                index=i,
                surface_form=form,
                lemma=draw(_FORM),
                upos=draw(st.sampled_from(sorted(UPOS_TAGS))),
                head=heads[i],
                deprel="root" if heads[i] == 0 else draw(_DEPRELS),
            )
        )
    return AnnotatedSentence(
        tokens=tuple(tokens),
        ends_with_terminal_punct=tokens[-1].surface_form in {".", "!", "?"},
    )


@given(st.lists(sentences(), min_size=0, max_size=5), st.floats(min_value=0.1, max_value=600))
@settings(max_examples=120, deadline=None)
def test_roundtrip_serialize_parse(sents, duration):
    doc = AnnotatedTranscript(
        participant_id="p9", task=Task.PF, duration_seconds=duration, sentences=tuple(sents)
    )
    text = to_conllu(doc)
    parsed = parse_transcript(text.encode("utf-8"), "p9", Task.PF, duration)
    assert len(parsed.sentences) == len(doc.sentences)
    for orig, back in zip(doc.sentences, parsed.sentences):
        assert back.ends_with_terminal_punct == orig.ends_with_terminal_punct
        for a, b in zip(orig.tokens, back.tokens):
            assert (a.index, a.surface_form, a.lemma, a.upos, a.head, a.deprel) == (
                b.index, b.surface_form, b.lemma, b.upos, b.head, b.deprel
            )


@given(st.binary(max_size=400))
@settings(max_examples=300, deadline=None)
def test_parser_never_crashes_on_arbitrary_bytes(data):
    try:
        doc = parse_transcript(data, "pz", Task.CTD, 12.0)
    except CogSpeechError:
        return
    # success: every sentence must satisfy the root/acyclicity invariants
    for sent in doc.sentences:
        roots = [t for t in sent.tokens if t.head == 0]
        assert len(roots) == 1
        for tok in sent.tokens:
            cur, steps = tok.head, 0
            while cur != 0:
                cur = sent.token(cur).head
                steps += 1
                assert steps <= len(sent.tokens)
