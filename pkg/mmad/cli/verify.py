"""
``verify``: numerical property suite; exit code 3 when any check fails.
"""
import argparse
import logging

from mmad.analysis.verification import run_verification_suite
from mmad.cli.common import run_directory, write_table
from mmad.core.config import OUTPUT_DIR
from mmad.core.errors import VerificationError

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("verify", help="run the property suite")
    parser.add_argument("--output-dir", default=OUTPUT_DIR)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    results = run_verification_suite()
    rows = [[r.name, "pass" if r.passed else "FAIL", float(r.value), float(r.threshold), r.detail] for r in results]
    header = ["name", "status", "value", "threshold", "detail"]
    write_table(run_directory(args.output_dir, "verify"), "checks.csv", header, rows)
    for row in rows:
        print(f"{row[1]:4s}  {row[0]:45s} {row[2]:.6g} (threshold {row[3]:.3g})")

    failed = [r.name for r in results if not r.passed]
    if failed:
        raise VerificationError(f"{len(failed)} of {len(results)} checks failed: {', '.join(failed)}")
    print(f"all {len(results)} checks passed")
    return 0
