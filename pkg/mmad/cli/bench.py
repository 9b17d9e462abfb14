"""
``bench``: run catalog cases, optionally comparing methods.
"""
import argparse
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Tuple

from mmad.benchmarks.catalog import catalog, get_case
from mmad.benchmarks.runner import compare_methods, run_case
from mmad.cli.common import (
    add_output_options,
    add_problem_options,
    overrides_from,
    parse_cut,
    run_directory,
    write_solution_bundle,
    write_table,
)
from mmad.core.errors import ConfigError
from mmad.schemas.schemas import Method

logger = logging.getLogger(__name__)

Task = Tuple[str, Optional[str], Method]

COMPARISON_HEADER = [
    "method", "dofs", "dofs_per_node", "dof_ratio", "wall_time",
    "l2_error", "h1_semi_error", "max_overshoot", "max_undershoot", "total_variation",
]


def register(subparsers) -> None:
    parser = subparsers.add_parser("bench", help="run catalog cases")
    parser.add_argument("ids", nargs="*", help="case ids (ex1..ex6); all cases when omitted")
    parser.add_argument("--subcase", help="sub-case label, e.g. 'pe=1e+06,da=0.01' (default: last)")
    parser.add_argument("--all-subcases", action="store_true", help="run every sub-case of each case")
    parser.add_argument("--both", action="store_true", help="run Galerkin and MMAD")
    parser.add_argument("--compare", action="store_true", help="write a Galerkin vs MMAD comparison table")
    parser.add_argument("--repeats", type=int, default=3, help="timing repeats for --compare")
    parser.add_argument("--reference", action="store_true",
                        help="measure 2D runs against a 4x refined reference solve")
    parser.add_argument("--jobs", type=int, default=1, help="cases run in parallel")
    add_problem_options(parser, method_default=Method.MMAD.value)
    add_output_options(parser)
    parser.set_defaults(handler=handle)


def _tasks(args: argparse.Namespace) -> List[Task]:
    ids = args.ids or [case.id for case in catalog()]
    methods = [Method.GALERKIN, Method.MMAD] if args.both else [Method(args.method)]
    tasks = []
    for case_id in ids:
        case = get_case(case_id)
        labels = [s.label for s in case.subcases] if args.all_subcases else [args.subcase]
        tasks.extend((case_id, label, method) for label in labels for method in methods)
    return tasks


def _run_task(task: Task, args: argparse.Namespace) -> str:
    case_id, label, method = task
    overrides = overrides_from(args)
    overrides.pop("method", None)
    cuts = [parse_cut(text, args.interpolate) for text in args.cut]
    result = run_case(case_id, method, overrides, label, with_reference=args.reference)
    directory = run_directory(args.output_dir, case_id, result.subcase.label, method.value)
    extra = {
        "case": case_id,
        "subcase": result.subcase.model_dump(),
        "reference": "yes" if result.has_reference else "none",
        "reference_total_variation": result.reference_total_variation,
        "physical": result.physical,
    }
    write_solution_bundle(directory, args.command_line, result.solution, result.errors, cuts, args.vtk, extra)
    errors = result.errors
    tv = f", tv {errors.total_variation:.4g}" if errors.total_variation is not None else ""
    return (f"{case_id} [{result.subcase.label}] {method.value}: {result.solution.dofmap.total_dofs} dofs, "
            f"overshoot {errors.max_overshoot:.3e}, undershoot {errors.max_undershoot:.3e}{tv} -> {directory}")


def _run_comparison(case_id: str, label: Optional[str], args: argparse.Namespace) -> str:
    overrides = overrides_from(args)
    overrides.pop("method", None)
    rows = compare_methods(case_id, label, args.repeats, overrides)
    subcase = label or get_case(case_id).subcases[-1].label
    directory = run_directory(args.output_dir, case_id, subcase, "compare")
    table = [[getattr(row, column).value if column == "method" else getattr(row, column)
              for column in COMPARISON_HEADER] for row in rows]
    write_table(directory, "comparison.csv", COMPARISON_HEADER, table)
    lines = [f"{case_id} [{subcase}] comparison -> {directory}"]
    for row in rows:
        lines.append(f"  {row.method.value:9s} dofs {row.dofs:6d} ratio {row.dof_ratio:.1f} time {row.wall_time:.4f}s")
    return "\n".join(lines)


def handle(args: argparse.Namespace) -> int:
    if args.jobs < 1:
        raise ConfigError("--jobs must be at least 1")
    if args.compare:
        ids = args.ids or [case.id for case in catalog()]
        for case_id in ids:
            case = get_case(case_id)
            labels = [s.label for s in case.subcases] if args.all_subcases else [args.subcase]
            for label in labels:
                print(_run_comparison(case_id, label, args))
        return 0

    tasks = _tasks(args)
    logger.info(f"Running {len(tasks)} benchmark tasks with {args.jobs} workers")
    if args.jobs == 1:
        lines = [_run_task(task, args) for task in tasks]
    else:
        with ThreadPoolExecutor(max_workers=args.jobs) as executor:
            lines = list(executor.map(lambda task: _run_task(task, args), tasks))
    for line in lines:
        print(line)
    return 0
