import pytest

from cogspeech.errors import (
    CogSpeechError,
    DuplicateTaskRow,
    MissingColumn,
    MmseOutOfRange,
    NonPositiveDuration,
    UnknownDiagnosisLabel,
    UnknownTaskLabel,
)
from cogspeech.manifest import (
    MANIFEST_HEADER,
    parse_manifest,
    validate_cohort,
    write_manifest,
)

HEADER = ",".join(MANIFEST_HEADER)


def make(rows: list[str]) -> bytes:
    return ("\n".join([HEADER] + rows) + "\n").encode()


def test_minimal_complete_participant():
    m = parse_manifest(
        make(
            [
                "p1,CTD,p1_ctd.conllu,p1_ctd.emb,61.2,HC,29",
                "p1,SF,p1_sf.conllu,,60.0,HC,29",
                "p1,PF,p1_pf.conllu,,59.5,HC,29",
            ]
        )
    )
    assert len(m.rows) == 3
    assert m.participant_ids == ("p1",)
    assert m.rows[0].embedding_path == "p1_ctd.emb"
    assert m.rows[1].embedding_path is None
    assert m.rows[0].mmse == 29


def test_duplicate_task_row_rejected():
    with pytest.raises(DuplicateTaskRow):
        parse_manifest(
            make(["p1,CTD,a.conllu,,60,HC,", "p1,CTD,b.conllu,,61,HC,"])
        )


def test_mmse_31_rejected():
    with pytest.raises(MmseOutOfRange):
        parse_manifest(make(["p1,CTD,a.conllu,,60,HC,31"]))


def test_mmse_non_integer_rejected():
    with pytest.raises(MmseOutOfRange):
        parse_manifest(make(["p1,CTD,a.conllu,,60,HC,28.5"]))


def test_unknown_diagnosis_rejected():
    with pytest.raises(UnknownDiagnosisLabel):
        parse_manifest(make(["p1,CTD,a.conllu,,60,SICK,"]))


def test_unknown_task_rejected():
    with pytest.raises(UnknownTaskLabel):
        parse_manifest(make(["p1,XYZ,a.conllu,,60,HC,"]))


def test_wrong_header_rejected():
    body = b"id,task\np1,CTD\n"
    with pytest.raises(MissingColumn):
        parse_manifest(body)


def test_short_row_rejected():
    with pytest.raises(MissingColumn):
        parse_manifest(make(["p1,CTD,a.conllu,,60"]))


def test_nonpositive_duration_rejected():
    with pytest.raises(NonPositiveDuration):
        parse_manifest(make(["p1,CTD,a.conllu,,0,HC,"]))


def test_empty_optionals_become_absent():
    m = parse_manifest(make(["p1,CTD,a.conllu,,60,,"]))
    row = m.rows[0]
    assert row.diagnosis is None and row.mmse is None and row.embedding_path is None


def test_roundtrip_through_write(tmp_path):
    m = parse_manifest(
        make(["p1,CTD,a.conllu,e.emb,60.25,MCI,27", "p2,SF,b.conllu,,59.125,AD,"])
    )
    path = tmp_path / "m.csv"
    write_manifest(m, path)
    again = parse_manifest(path)
    assert again == m


def test_validate_missing_task_finding():
    m = parse_manifest(make(["p1,CTD,a.conllu,e.emb,60,HC,"]))
    report = validate_cohort(m, "classification")
    kinds = {f.kind for f in report.findings}
    assert "missing_task" in kinds
    missing = [f for f in report.findings if f.kind == "missing_task"]
    assert {f.message for f in missing} == {"missing task SF", "missing task PF"}


def test_validate_classification_all_labeled_zero_findings():
    rows = []
    for pid in ("p1", "p2"):
        rows += [
            f"{pid},CTD,{pid}_c.conllu,{pid}.emb,60,HC,",
            f"{pid},SF,{pid}_s.conllu,,60,HC,",
            f"{pid},PF,{pid}_p.conllu,,60,HC,",
        ]
    report = validate_cohort(parse_manifest(make(rows)), "classification")
    assert report.findings == ()


def test_validate_regression_retained_count():
    rows = []
    for i, mmse in enumerate(["28", "", "22", ""]):
        pid = f"p{i}"
        rows += [
            f"{pid},CTD,{pid}_c.conllu,{pid}.emb,60,HC,{mmse}",
            f"{pid},SF,{pid}_s.conllu,,60,HC,{mmse}",
            f"{pid},PF,{pid}_p.conllu,,60,HC,{mmse}",
        ]
    report = validate_cohort(parse_manifest(make(rows)), "regression")
    assert report.retained_participants == 2


def test_validate_missing_label_blocks_classification():
    m = parse_manifest(make(["p1,CTD,a.conllu,e.emb,60,,"]))
    report = validate_cohort(m, "classification")
    assert any(f.kind == "missing_label" and f.blocking for f in report.findings)


def test_validate_checks_files_on_disk(tmp_path):
    m = parse_manifest(make(["p1,CTD,missing.conllu,,60,HC,"]))
    report = validate_cohort(m, "classification", base_dir=tmp_path, check_files=True)
    assert any(f.kind == "missing_transcript_file" and f.blocking for f in report.findings)
