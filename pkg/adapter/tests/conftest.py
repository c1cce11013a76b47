from __future__ import annotations

from pathlib import Path

import pytest

from _waves import RATE, scripted_recording, silence, tone  # noqa: F401


@pytest.fixture()

def fixture_cohort(tmp_path) -> Path:
    """One participant, three scripted recordings (a complete cohort row set);
    the CTD script carries a disfluency."""
    src = tmp_path / "audio"
    src.mkdir()
    scripted_recording(
        src / "p01_CTD.wav",
        [silence(0.4), tone(2.0), silence(0.6), tone(1.5), silence(0.3)],
        "the boy um fell .\nthe mother washes a plate .\n",
    )
    scripted_recording(
        src / "p01_SF.wav",
        [silence(0.2), tone(1.2), silence(0.4), tone(0.8)],
        "cat\ndog\nuh horse\n",
    )
    scripted_recording(
        src / "p01_PF.wav",
        [tone(1.0), silence(0.5), tone(1.0)],
        "pot\npan\npear\n",
    )
    (src / "labels.csv").write_text(
        "participant_id,diagnosis,mmse\np01,HC,28\n", encoding="utf-8"
    )
    return src
