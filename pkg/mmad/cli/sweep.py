"""
``sweep``: mesh-refinement series and the fitted convergence rate.
"""
import argparse
import logging

from mmad.analysis.convergence import manufactured_config, manufactured_sweep, reference_sweep
from mmad.benchmarks.runner import resolve_config
from mmad.cli.common import add_problem_options, overrides_from, parse_levels, run_directory
from mmad.core.config import OUTPUT_DIR, REFERENCE_REFINEMENT
from mmad.repositories.field_repository import FieldRepository
from mmad.repositories.manifest_repository import ManifestRepository
from mmad.schemas.schemas import ManufacturedSpec, Method, VelocitySpec

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("sweep", help="refinement series with convergence rate")
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--manufactured", action="store_true", help="smooth manufactured solution")
    source.add_argument("--case", help="catalog case measured against a refined reference")
    parser.add_argument("--subcase", help="sub-case label for --case")
    parser.add_argument("--refinement", type=int, default=REFERENCE_REFINEMENT,
                        help="reference mesh refinement of the finest level for --case")
    parser.add_argument("--levels", default="8,16,32,64,128", help="comma-separated n per direction")
    parser.add_argument("--dimension", type=int, choices=[1, 2], default=2)
    parser.add_argument("--angle", type=float, default=45.0, help="velocity angle in degrees (2D)")
    parser.add_argument("--solution", choices=["sine", "linear"], default="sine")
    parser.add_argument("--output-dir", default=OUTPUT_DIR)
    add_problem_options(parser, method_default=Method.MMAD.value)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    levels = parse_levels(args.levels)
    overrides = overrides_from(args)
    overrides.pop("nx", None)
    overrides.pop("ny", None)
    if args.manufactured:
        velocity = (VelocitySpec(kind="angle", angle_deg=args.angle) if args.dimension == 2
                    else VelocitySpec(components=[1.0]))
        base = manufactured_config(
            dimension=args.dimension,
            pe=overrides.pop("pe", 10.0),
            da=overrides.pop("da", 1.0),
            velocity=velocity,
            solution=ManufacturedSpec(kind=args.solution),
        )
        config = base.with_overrides(**overrides)
        report = manufactured_sweep(config, levels)
        name = f"sweep-{config.name}"
    else:
        method = overrides.pop("method", Method.MMAD.value)
        _, _, config = resolve_config(args.case, Method(method), overrides, args.subcase)
        report = reference_sweep(config, levels, args.refinement)
        name = f"sweep-{args.case}"

    directory = run_directory(args.output_dir, name, config.method.value)
    rows = [
        [n, h, l2, h1, combined if combined is not None else float("nan")]
        for n, h, l2, h1, combined in zip(report.levels, report.hs, report.l2_errors,
                                           report.h1_errors, report.combined_errors)
    ]
    tables = FieldRepository(directory)
    manifests = ManifestRepository(directory)
    with tables.transaction(), manifests.transaction():
        record = tables.emit_table("sweep.csv", ["n", "h", "l2_error", "h1_semi_error", "combined_norm"], rows)
        manifests.write_manifest(args.command_line, config, {}, [record])
    for row in rows:
        print(f"n={row[0]:5d} h={row[1]:.5f} l2={row[2]:.4e} h1={row[3]:.4e} combined={row[4]:.4e}")
    print(f"rate={report.rate:.4f} l2_rate={report.l2_rate:.4f}")
    return 0
