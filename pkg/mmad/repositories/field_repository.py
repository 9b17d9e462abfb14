"""
Field repository module: CSV, cut and legacy VTK writers for solutions.
"""
import csv
import io
import logging
from typing import Any, Iterable, List, Sequence

import numpy as np

from mmad.analysis.cuts import extract_cut
from mmad.core.errors import InvalidArgumentError
from mmad.models.models import SolutionField, StructuredMesh
from mmad.repositories.artifact_repository import ArtifactRepository
from mmad.schemas.schemas import CutSpec, OutputRecord

logger = logging.getLogger(__name__)


def format_value(value: float) -> str:
    return f"{value:.17g}"


def csv_text(header: Sequence[str], columns: Iterable[np.ndarray]) -> str:
    table = np.column_stack(list(columns))
    lines = [",".join(header)]
    lines.extend(",".join(format_value(v) for v in row) for row in table)
    return "\n".join(lines) + "\n"


def table_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """Plain CSV table; floats with 17 significant digits."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) if isinstance(v, float) else v for v in row])
    return buffer.getvalue()


class FieldRepository(ArtifactRepository):
    """
    Repository for solution fields, line profiles and result tables.
    """

    def _check(self, solution: SolutionField, mesh: StructuredMesh) -> None:
        if mesh is not solution.mesh and (
            mesh.n_nodes != solution.mesh.n_nodes or mesh.dimension != solution.mesh.dimension
        ):
            raise InvalidArgumentError("solution does not match the mesh")

    def emit_field(self, solution: SolutionField, mesh: StructuredMesh = None, name: str = "solution.csv") -> OutputRecord:
        """
        One row per node in node order (2D: x fastest, then y):
        x[,y],phi[,g1[,g2]].
        """
        mesh = mesh or solution.mesh
        self._check(solution, mesh)
        axes = ["x", "y"][:mesh.dimension]
        header: List[str] = axes + ["phi"]
        columns = [mesh.node_coords[:, k] for k in range(mesh.dimension)] + [solution.phi]
        if solution.g is not None:
            header += [f"g{k + 1}" for k in range(mesh.dimension)]
            columns += [solution.g[:, k] for k in range(mesh.dimension)]
        return self.write_text(name, csv_text(header, columns))

    def emit_vtk(self, solution: SolutionField, mesh: StructuredMesh = None, name: str = "solution.vtk") -> OutputRecord:
        """
        Legacy ASCII structured-points file with phi (and g) as point data.
        """
        mesh = mesh or solution.mesh
        self._check(solution, mesh)
        if mesh.dimension != 2:
            raise InvalidArgumentError("structured-points output is written for 2D grids")
        hx, hy = mesh.h_dir
        lines = [
            "# vtk DataFile Version 3.0",
            f"{solution.config.name} {solution.config.method.value}",
            "ASCII",
            "DATASET STRUCTURED_POINTS",
            f"DIMENSIONS {mesh.nx + 1} {mesh.ny + 1} 1",
            "ORIGIN 0 0 0",
            f"SPACING {format_value(hx)} {format_value(hy)} 1",
            f"POINT_DATA {mesh.n_nodes}",
            "SCALARS phi double 1",
            "LOOKUP_TABLE default",
        ]
        lines.extend(format_value(v) for v in solution.phi)
        if solution.g is not None:
            lines.append("VECTORS g double")
            lines.extend(f"{format_value(g1)} {format_value(g2)} 0" for g1, g2 in solution.g)
        return self.write_text(name, "\n".join(lines) + "\n")

    def emit_cut(self, solution: SolutionField, cut: CutSpec, mesh: StructuredMesh = None, name: str = None) -> OutputRecord:
        mesh = mesh or solution.mesh
        self._check(solution, mesh)
        s, values = extract_cut(solution, cut)
        name = name or f"cut_{cut.kind}_{cut.position:g}.csv"
        logger.debug(f"Cut {cut.kind} at {cut.position}: {s.size} samples")
        return self.write_text(name, csv_text(["s", "phi"], [s, values]))

    def emit_table(self, name: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> OutputRecord:
        return self.write_text(name, table_text(header, rows))
