"""
Line profiles of a solution along grid lines and diagonals.
"""
from typing import Tuple

import numpy as np

from mmad.core.errors import InvalidArgumentError
from mmad.fem.element import evaluate_nodal_field
from mmad.models.models import SolutionField, StructuredMesh
from mmad.schemas.schemas import CutSpec

GRID_TOL = 1e-12


def _endpoints(cut: CutSpec) -> Tuple[np.ndarray, np.ndarray]:
    if cut.kind == "horizontal":
        return np.array([0.0, cut.position]), np.array([1.0, cut.position])
    if cut.kind == "vertical":
        return np.array([cut.position, 0.0]), np.array([cut.position, 1.0])
    if cut.kind == "diagonal":
        return np.array([0.0, 0.0]), np.array([1.0, 1.0])
    return np.array([0.0, 1.0]), np.array([1.0, 0.0])


def _grid_nodes(mesh: StructuredMesh, cut: CutSpec):
    """Node ids along the cut when it runs through grid points, else None."""
    if cut.kind in ("horizontal", "vertical"):
        count = mesh.ny if cut.kind == "horizontal" else mesh.nx
        index = cut.position * count
        if abs(index - round(index)) > GRID_TOL * max(1.0, count):
            return None
        line = int(round(index))
        if cut.kind == "horizontal":
            return np.array([mesh.node_index(i, line) for i in range(mesh.nx + 1)])
        return np.array([mesh.node_index(line, j) for j in range(mesh.ny + 1)])
    if mesh.nx != mesh.ny:
        return None
    if cut.kind == "diagonal":
        return np.array([mesh.node_index(i, i) for i in range(mesh.nx + 1)])
    return np.array([mesh.node_index(i, mesh.ny - i) for i in range(mesh.nx + 1)])


def extract_cut(solution: SolutionField, cut: CutSpec) -> Tuple[np.ndarray, np.ndarray]:
    """
    Arclength and phi along the cut. Grid-aligned cuts return node values
    unless ``cut.samples`` asks for a resampling; other cuts need
    ``cut.interpolate``.
    """
    mesh = solution.mesh
    if mesh.dimension == 1:
        return mesh.node_coords[:, 0].copy(), solution.phi.copy()

    start, end = _endpoints(cut)
    length = float(np.linalg.norm(end - start))
    nodes = _grid_nodes(mesh, cut)
    if nodes is not None and cut.samples is None:
        s = np.linalg.norm(mesh.node_coords[nodes] - start, axis=1)
        return s, solution.phi[nodes].copy()
    if nodes is None and not cut.interpolate:
        raise InvalidArgumentError(
            f"{cut.kind} cut at {cut.position} does not follow grid points; enable interpolation"
        )
    samples = cut.samples or max(mesh.nx, mesh.ny) + 1
    t = np.linspace(0.0, 1.0, samples)
    points = start + t[:, None] * (end - start)
    values, _ = evaluate_nodal_field(mesh, solution.phi, points)
    return t * length, values
