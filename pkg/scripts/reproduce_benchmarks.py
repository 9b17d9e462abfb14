#!/usr/bin/env python
"""
Script to run every catalog case and sub-case with Galerkin and MMAD and
write one comparison table per case.
"""
import os
import sys
import logging
import argparse
from dotenv import load_dotenv

# Add the parent directory to the path so we can import from mmad
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

# Load environment variables from .env file
load_dotenv()

from mmad.benchmarks.catalog import catalog
from mmad.benchmarks.runner import compare_methods
from mmad.core.config import OUTPUT_DIR
from mmad.core.errors import MMADError
from mmad.repositories.field_repository import FieldRepository

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
)
logger = logging.getLogger(__name__)

COLUMNS = [
    "subcase", "method", "dofs", "dofs_per_node", "dof_ratio", "wall_time",
    "l2_error", "h1_semi_error", "max_overshoot", "max_undershoot", "total_variation",
]


def run_case_table(case, output_dir, repeats):
    """Compare both methods on every sub-case of one case."""
    rows = []
    for subcase in case.subcases:
        logger.info(f"Running {case.id} [{subcase.label}]")
        try:
            comparison = compare_methods(case.id, subcase.label, repeats)
        except MMADError as e:
            logger.error(f"{case.id} [{subcase.label}] failed: {e.detail}")
            continue
        for row in comparison:
            data = row.model_dump()
            data["method"] = row.method.value
            rows.append({"subcase": subcase.label, **data})

    table = [[row[column] for column in COLUMNS] for row in rows]
    record = FieldRepository(output_dir).emit_table(f"{case.id}_comparison.csv", COLUMNS, table)
    logger.info(f"Wrote {len(rows)} rows to {record.path}")
    return len(rows)


def main():
    parser = argparse.ArgumentParser(description="Reproduce the benchmark comparison tables")
    parser.add_argument("--cases", nargs="+", help="case ids (default: all)")
    parser.add_argument("--repeats", type=int, default=3, help="timing repeats per method")
    parser.add_argument("--output-dir", default=os.path.join(OUTPUT_DIR, "tables"), dest="output_dir")
    args = parser.parse_args()

    cases = [c for c in catalog() if not args.cases or c.id in args.cases]
    if not cases:
        logger.error(f"No catalog case matches {args.cases}")
        return 1

    total = 0
    for case in cases:
        total += run_case_table(case, args.output_dir, args.repeats)
    logger.info(f"Done: {total} rows for {len(cases)} cases")
    return 0


if __name__ == "__main__":
    sys.exit(main())
