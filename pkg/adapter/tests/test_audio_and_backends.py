import numpy as np
import pytest

from _waves import RATE, silence, tone
from asr_adapter.audio import read_wav, write_wav
from asr_adapter.backends import (
    EMBEDDING_DIM,
    energy_vad,
    rule_parser,
    scripted_asr,
    spectral_encoder,
    resolve,
    VAD_BACKENDS,
)
from asr_adapter.errors import BackendFailure, NoSpeechDetected, UnknownBackend, UnreadableAudio
from asr_adapter.jobs import preprocess_audio


def test_wav_roundtrip(tmp_path):
    samples = tone(0.5)
    path = tmp_path / "t.wav"
    write_wav(path, samples, RATE)
    back, rate = read_wav(path)
    assert rate == RATE
    assert back.shape == samples.shape
    np.testing.assert_allclose(back, samples, atol=1e-4)


def test_unreadable_audio(tmp_path):
    bad = tmp_path / "bad.wav"
    bad.write_bytes(b"this is not a wav file")
    with pytest.raises(UnreadableAudio):
        read_wav(bad)


def test_pure_silence_raises_no_speech():
    with pytest.raises(NoSpeechDetected):
        preprocess_audio(silence(2.0), RATE, energy_vad)


def test_known_voiced_duration_within_half_second():
    # 10 s of tone in four segments separated by silence
    audio = np.concatenate(
        [silence(0.7), tone(3.0), silence(1.0), tone(2.5), silence(0.8), tone(2.5), silence(0.5), tone(2.0), silence(0.6)]
    )
    voiced, duration = preprocess_audio(audio, RATE, energy_vad)
    assert abs(duration - 10.0) <= 0.5
    assert voiced.shape[0] <= audio.shape[0]


def test_trimmed_output_never_longer_than_input():
    audio = np.concatenate([tone(0.8), silence(0.2), tone(0.3)])
    voiced, _ = preprocess_audio(audio, RATE, energy_vad)
    assert voiced.shape[0] <= audio.shape[0]


def test_scripted_asr_reads_sidecar(tmp_path):
    wav = tmp_path / "x.wav"
    write_wav(wav, tone(0.3), RATE)
    wav.with_suffix(".txt").write_text("the boy um fell .\ncat\n")
    sentences = scripted_asr(wav, tone(0.3), RATE)
    assert sentences == [["the", "boy", "um", "fell", "."], ["cat"]]


def test_scripted_asr_missing_script_is_backend_failure(tmp_path):
    wav = tmp_path / "x.wav"
    write_wav(wav, tone(0.3), RATE)
    with pytest.raises(BackendFailure):
        scripted_asr(wav, tone(0.3), RATE)


def test_scripted_asr_empty_audio_gives_empty_transcript(tmp_path):
    wav = tmp_path / "x.wav"
    write_wav(wav, tone(0.3), RATE)
    wav.with_suffix(".txt").write_text("words here\n")
    assert scripted_asr(wav, np.zeros(0), RATE) == []


def test_rule_parser_single_root_acyclic():
    for words in (
        ["the", "boy", "um", "fell", "."],
        ["cat"],
        ["um", "uh"],
        ["the", "mother", "washes", "a", "plate", "quickly", "."],
        ["when", "he", "fell", "and", "she", "laughed"],
    ):
        tokens = rule_parser(words)
        roots = [t for t in tokens if t.head == 0]
        assert len(roots) == 1
        n = len(tokens)
        for tok in tokens:
            assert 0 <= tok.head <= n
        for start in range(n):
            cur, steps = tokens[start].head, 0
            while cur != 0:
                cur = tokens[cur - 1].head
                steps += 1
                assert steps <= n, f"cycle in parse of {words}"


def test_rule_parser_fillers_are_interjections():
    tokens = rule_parser(["the", "boy", "um", "fell"])
    assert [t.upos for t in tokens] == ["DET", "NOUN", "INTJ", "VERB"]
    assert tokens[2].deprel == "discourse"
    assert tokens[0].head == 2  # determiner attaches to its noun
    assert tokens[1].deprel == "nsubj"


def test_spectral_encoder_dim_and_determinism():
    audio = tone(1.0)
    a = spectral_encoder(audio, RATE)
    b = spectral_encoder(audio, RATE)
    assert a.shape[1] == EMBEDDING_DIM == 1280
    assert a.shape[0] > 1
    np.testing.assert_array_equal(a, b)


def test_spectral_encoder_short_audio_single_frame():
    out = spectral_encoder(tone(0.01), RATE)
    assert out.shape == (1, EMBEDDING_DIM)


def test_unknown_backend_resolved_before_processing():
    with pytest.raises(UnknownBackend):
        resolve(VAD_BACKENDS, "neural-magic", "VAD")
