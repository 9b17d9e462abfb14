"""
Options and output helpers shared by the subcommands.
"""
import argparse
import json
import logging
import re
from pathlib import Path
from typing import Any, Dict, List, Optional

from mmad.core.config import OUTPUT_DIR
from mmad.core.errors import ConfigError
from mmad.models.models import SolutionField
from mmad.repositories.field_repository import FieldRepository
from mmad.repositories.manifest_repository import ManifestRepository
from mmad.schemas.schemas import CutSpec, ErrorReport, Method, OutputRecord

logger = logging.getLogger(__name__)

OVERRIDE_KEYS = ("pe", "da", "nx", "ny", "method", "mzad_p", "tol")


def add_problem_options(parser: argparse.ArgumentParser, method_default: Optional[str] = None) -> None:
    parser.add_argument("--pe", type=float, help="Peclet number")
    parser.add_argument("--da", type=float, help="Damkohler number")
    parser.add_argument("--nx", type=int, help="elements in x")
    parser.add_argument("--ny", type=int, help="elements in y (2D, defaults to nx)")
    parser.add_argument("--method", choices=[m.value for m in Method], default=method_default,
                        help="discretization")
    parser.add_argument("--mzad-p", type=float, dest="mzad_p", help="uniform H = p I for MZAD")
    parser.add_argument("--tol", type=float, help="relative residual tolerance")


def add_output_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--output-dir", default=OUTPUT_DIR, help="root directory for run bundles")
    parser.add_argument("--cut", action="append", default=[], metavar="KIND[:POSITION]",
                        help="line profile to write, e.g. horizontal:0.5 or diagonal (repeatable)")
    parser.add_argument("--interpolate", action="store_true", help="allow cuts between grid lines")
    parser.add_argument("--vtk", action="store_true", help="also write a legacy VTK file (2D)")


def overrides_from(args: argparse.Namespace) -> Dict[str, Any]:
    return {key: getattr(args, key, None) for key in OVERRIDE_KEYS if getattr(args, key, None) is not None}


def parse_cut(text: str, interpolate: bool) -> CutSpec:
    kind, _, position = text.partition(":")
    try:
        data = {"kind": kind, "interpolate": interpolate}
        if position:
            data["position"] = float(position)
        return CutSpec(**data)
    except (ValueError, TypeError) as e:
        raise ConfigError(f"invalid cut '{text}': {str(e)}") from e


def parse_levels(text: str) -> List[int]:
    try:
        levels = [int(item) for item in text.split(",") if item.strip()]
    except ValueError as e:
        raise ConfigError(f"levels must be comma-separated integers, got '{text}'") from e
    if len(levels) < 3 or min(levels) < 1:
        raise ConfigError("a sweep needs at least three positive mesh levels")
    return levels


def run_directory(output_dir: str, *parts: str) -> Path:
    name = "_".join(re.sub(r"[^A-Za-z0-9.+-]+", "-", part) for part in parts if part)
    return Path(output_dir) / name


def write_solution_bundle(
    directory: Path,
    command: str,
    solution: SolutionField,
    errors: Optional[ErrorReport] = None,
    cuts: Optional[List[CutSpec]] = None,
    vtk: bool = False,
    extra: Optional[Dict[str, Any]] = None,
) -> List[OutputRecord]:
    """
    Field CSV, optional VTK and cuts, error summary and the run manifest.
    All files are removed again if any write fails.
    """
    fields = FieldRepository(directory)
    manifests = ManifestRepository(directory)
    with fields.transaction(), manifests.transaction():
        fields.emit_field(solution)
        if vtk and solution.mesh.dimension == 2:
            fields.emit_vtk(solution)
        for cut in cuts or []:
            fields.emit_cut(solution, cut)
        summary = {"errors": errors.model_dump() if errors else None}
        summary.update(extra or {})
        fields.write_text("summary.json", json.dumps(summary, indent=2, sort_keys=True) + "\n")
        manifests.write_manifest(command, solution.config, solution.timings, list(fields.records))
    return fields.records + manifests.records


def write_table(directory: Path, name: str, header: List[str], rows: List[List[Any]]) -> OutputRecord:
    return FieldRepository(directory).emit_table(name, header, rows)
