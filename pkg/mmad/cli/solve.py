"""
``solve``: run one configuration file (TOML, JSON or a run manifest).
"""
import argparse
import logging

from mmad.analysis.norms import error_norms
from mmad.benchmarks.runner import exact_reference
from mmad.cli.common import (
    add_output_options,
    add_problem_options,
    overrides_from,
    parse_cut,
    run_directory,
    write_solution_bundle,
)
from mmad.fem.assembly import solve_case
from mmad.fem.mesh import build_mesh
from mmad.repositories.manifest_repository import load_config_file

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("solve", help="solve one configuration")
    parser.add_argument("--config", required=True, help="TOML/JSON config or manifest.json")
    parser.add_argument("--name", help="run directory name (defaults to the config name and method)")
    add_problem_options(parser)
    add_output_options(parser)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    config = load_config_file(args.config).with_overrides(**overrides_from(args))
    cuts = [parse_cut(text, args.interpolate) for text in args.cut]
    mesh = build_mesh(config.dimension, config.nx, config.ny)
    solution = solve_case(mesh, config)

    reference, samples = exact_reference(config)
    bounds = (float(samples.min()), float(samples.max())) if samples is not None else None
    errors = error_norms(solution, reference, bounds)

    if args.name:
        directory = run_directory(args.output_dir, args.name)
    else:
        directory = run_directory(args.output_dir, config.name, config.method.value)
    records = write_solution_bundle(
        directory, args.command_line, solution, errors, cuts, args.vtk,
        extra={"reference": "exact" if reference is not None else "none"},
    )
    print(f"solved {config.name} ({config.method.value}): {solution.dofmap.total_dofs} dofs, "
          f"residual {solution.report.relative_residual:.2e}, {len(records)} files in {directory}")
    return 0
