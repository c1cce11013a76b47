"""adapter --in <dir> --out <dir> [--vad id] [--asr id] [--encoder id]
[--parser id] [--pooled]

Exit codes: 0 when every file processed, 1 when some files failed (failures
listed in adapter_report.json), 2 on a fatal error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import AdapterError
from .jobs import build_job, run_job


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adapter", description="Audio-to-canonical-inputs adapter"
    )
    parser.add_argument("--in", dest="in_dir", required=True, help="directory of <pid>_<task>.wav files")
    parser.add_argument("--out", dest="out_dir", required=True, help="output directory")
    parser.add_argument("--vad", default="energy")
    parser.add_argument("--asr", default="scripted")
    parser.add_argument("--encoder", default="spectral")
    parser.add_argument("--parser", default="rule")
    parser.add_argument("--pooled", action="store_true", help="pool frames to one vector per file")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        job = build_job(
            args.in_dir,
            args.out_dir,
            vad_id=args.vad,
            asr_id=args.asr,
            parser_id=args.parser,
            encoder_id=args.encoder,
            pooled=args.pooled,
        )
        report = run_job(job)
    except AdapterError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 2
    print(
        f"processed {report['processed']} file(s), {report['failed']} failed; "
        f"manifest at {args.out_dir}/manifest.csv"
    )
    for failure in report["failures"]:
        print(json.dumps(failure), file=sys.stderr)
    return 0 if report["failed"] == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
