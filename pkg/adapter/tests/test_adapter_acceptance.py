"""Adapter contract acceptance: the primary toolkit must consume adapter
output with zero manual edits. The check drives the primary's own CLI."""

import json
import struct
import subprocess

from asr_adapter.jobs import build_job, run_job


def report(text: str) -> None:
    print(f"\nPASS criterion 11: {text}")


def test_criterion_11_adapter_contract(fixture_cohort, tmp_path):
    out = tmp_path / "out"
    job_report = run_job(build_job(fixture_cohort, out))
    assert job_report["processed"] == 3

    # the 3-file scripted fixture must pass the primary validator cleanly
    res = subprocess.run(
        ["cogspeech", "validate", "--manifest", str(out / "manifest.csv")],
        capture_output=True, text=True,
    )
    assert res.returncode == 0, f"validate failed:\n{res.stdout}\n{res.stderr}"
    assert "BLOCKING" not in res.stdout

    # and the features pipeline runs end to end over it
    res = subprocess.run(
        ["cogspeech", "features", "--manifest", str(out / "manifest.csv"),
         "--out", str(tmp_path / "features.csv")],
        capture_output=True, text=True,
    )
    assert res.returncode == 0, res.stderr
    lines = (tmp_path / "features.csv").read_text().splitlines()
    assert len(lines) == 2 and len(lines[0].split(",")) == 43

    # embedding dim is 1280 in the written binary header
    data = (out / "embeddings" / "p01_CTD.emb").read_bytes()
    magic, rows, dim, _ = struct.unpack("<4sII4s", data[:16])
    assert magic == b"EMB1" and dim == 1280

    # the scripted-disfluency fixture keeps its filler token
    ctd = (out / "transcripts" / "p01_CTD.conllu").read_text()
    assert "\tum\tum\tINTJ\t" in ctd

    report(
        "adapter output passed the primary validator with zero blocking findings; "
        "embedding dim 1280; filler token present in the disfluency transcript"
    )
