"""
Structured meshes of the unit interval and the unit square, node selection
and boundary tagging.
"""
import logging
from typing import List, Sequence, Tuple, Union

import numpy as np

from mmad.core.errors import InvalidArgumentError
from mmad.models.models import BoundaryRegion, RegionKind, StructuredMesh
from mmad.schemas.schemas import BoundarySpec

logger = logging.getLogger(__name__)

Segment = Tuple[Sequence[float], Sequence[float]]
Region = Union[str, Segment]

GRID_ALIGNMENT_TOL = 1e-12


def _check_count(name: str, value: int) -> int:
    if isinstance(value, bool) or int(value) != value or value < 1:
        raise InvalidArgumentError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def build_interval_mesh(n_elements: int) -> StructuredMesh:
    """
    Equispaced linear elements on [0, 1].
    """
    n = _check_count("n_elements", n_elements)
    coords = (np.arange(n + 1, dtype=float) / n).reshape(-1, 1)
    elements = np.column_stack([np.arange(n), np.arange(1, n + 1)]).astype(np.int64)
    mesh = StructuredMesh(
        dimension=1, node_coords=coords, elements=elements, nx=n, ny=0, h_dir=(1.0 / n,)
    )
    logger.debug(f"Built interval mesh: {mesh.n_nodes} nodes, {mesh.n_elements} elements")
    return mesh


def build_grid_mesh(nx: int, ny: int) -> StructuredMesh:
    """
    Bilinear quadrilateral grid on [0, 1]^2, nodes numbered row by row.
    """
    nx = _check_count("nx", nx)
    ny = _check_count("ny", ny)
    x = np.arange(nx + 1, dtype=float) / nx
    y = np.arange(ny + 1, dtype=float) / ny
    xx, yy = np.meshgrid(x, y)
    coords = np.column_stack([xx.ravel(), yy.ravel()])

    i, j = np.meshgrid(np.arange(nx), np.arange(ny))
    lower_left = (j * (nx + 1) + i).ravel()
    elements = np.column_stack([
        lower_left,
        lower_left + 1,
        lower_left + nx + 2,
        lower_left + nx + 1,
    ]).astype(np.int64)

    mesh = StructuredMesh(
        dimension=2, node_coords=coords, elements=elements, nx=nx, ny=ny, h_dir=(1.0 / nx, 1.0 / ny)
    )
    logger.debug(f"Built grid mesh: {mesh.n_nodes} nodes, {mesh.n_elements} elements")
    return mesh


def build_mesh(dimension: int, nx: int, ny: int = None) -> StructuredMesh:
    if dimension == 1:
        return build_interval_mesh(nx)
    return build_grid_mesh(nx, ny if ny is not None else nx)


def _edge_segment(mesh: StructuredMesh, edge: str) -> Tuple[np.ndarray, np.ndarray]:
    if mesh.dimension == 1:
        points = {"left": [0.0], "right": [1.0]}
    else:
        points = {
            "left": ([0.0, 0.0], [0.0, 1.0]),
            "right": ([1.0, 0.0], [1.0, 1.0]),
            "bottom": ([0.0, 0.0], [1.0, 0.0]),
            "top": ([0.0, 1.0], [1.0, 1.0]),
        }
    if edge not in points:
        raise InvalidArgumentError(f"unknown edge '{edge}' for a {mesh.dimension}D mesh")
    if mesh.dimension == 1:
        point = np.asarray(points[edge], dtype=float)
        return point, point
    start, end = points[edge]
    return np.asarray(start, dtype=float), np.asarray(end, dtype=float)


def _as_segment(mesh: StructuredMesh, region: Region) -> Tuple[np.ndarray, np.ndarray]:
    if isinstance(region, str):
        return _edge_segment(mesh, region)
    start, end = (np.asarray(p, dtype=float).reshape(-1) for p in region)
    if start.size != mesh.dimension or end.size != mesh.dimension:
        raise InvalidArgumentError("segment endpoints must match the mesh dimension")
    for point in (start, end):
        if np.any(point < 0.0) or np.any(point > 1.0):
            raise InvalidArgumentError(f"segment endpoint {point.tolist()} lies outside the unit domain")
    return start, end


def _segment_parameters(mesh: StructuredMesh, start: np.ndarray, end: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Distance of every node to the segment and its projection parameter."""
    coords = mesh.node_coords
    direction = end - start
    length_sq = float(direction @ direction)
    if length_sq == 0.0:
        t = np.zeros(coords.shape[0])
    else:
        t = np.clip((coords - start) @ direction / length_sq, 0.0, 1.0)
    closest = start + t[:, None] * direction
    return np.linalg.norm(coords - closest, axis=1), t


def select_nodes(mesh: StructuredMesh, region: Region, tolerance: float = 1e-12) -> List[int]:
    """
    Ids of all nodes within ``tolerance`` of an edge ("left", "right",
    "bottom", "top", or "boundary") or of a segment given by its endpoints.
    Ids come back in ascending order; an empty selection is not an error.
    """
    if tolerance < 0:
        raise InvalidArgumentError("tolerance must be nonnegative")
    if isinstance(region, str) and region == "boundary":
        return mesh.boundary_nodes().tolist()
    start, end = _as_segment(mesh, region)
    distance, _ = _segment_parameters(mesh, start, end)
    return np.flatnonzero(distance <= tolerance).tolist()


def _facets(mesh: StructuredMesh, region: Region, node_ids: np.ndarray) -> np.ndarray:
    if mesh.dimension == 1 or node_ids.size == 0:
        return node_ids.reshape(-1, 1)
    start, end = _as_segment(mesh, region)
    _, t = _segment_parameters(mesh, start, end)
    ordered = node_ids[np.argsort(t[node_ids], kind="stable")]
    return np.column_stack([ordered[:-1], ordered[1:]])


def check_grid_aligned(mesh: StructuredMesh, segment: Segment) -> None:
    """Interior constraint lines must run between grid points."""
    for point in segment:
        point = np.asarray(point, dtype=float)
        scaled = point / np.asarray(mesh.h_dir)
        if np.any(np.abs(scaled - np.round(scaled)) > GRID_ALIGNMENT_TOL * np.maximum(1.0, np.abs(scaled))):
            raise InvalidArgumentError(
                f"constraint endpoint {point.tolist()} is not on a grid line (h = {list(mesh.h_dir)})"
            )


def build_regions(mesh: StructuredMesh, specs: Sequence[BoundarySpec]) -> List[BoundaryRegion]:
    """
    Turn boundary specs into tagged node sets. Nodes shared between a
    Dirichlet (or interior constraint) region and a Neumann region stay
    with the Dirichlet side only.
    """
    regions = []
    for spec in specs:
        region = spec.edge if spec.edge is not None else spec.segment
        if spec.segment is not None:
            _as_segment(mesh, spec.segment)
            if spec.kind == "interior":
                check_grid_aligned(mesh, spec.segment)
        node_ids = np.asarray(select_nodes(mesh, region, spec.tolerance), dtype=np.int64)
        if node_ids.size == 0:
            raise InvalidArgumentError(f"boundary spec {region!r} selects no nodes")
        regions.append(BoundaryRegion(
            kind=RegionKind(spec.kind),
            node_ids=node_ids,
            value_profile=spec.profile.evaluate,
            facets=_facets(mesh, region, node_ids),
            name=str(region),
        ))

    essential = [r.node_ids for r in regions if r.kind != RegionKind.NEUMANN]
    if essential:
        essential_nodes = np.unique(np.concatenate(essential))
        regions = [
            r if r.kind != RegionKind.NEUMANN else BoundaryRegion(
                kind=r.kind,
                node_ids=np.setdiff1d(r.node_ids, essential_nodes),
                value_profile=r.value_profile,
                facets=r.facets,
                name=r.name,
            )
            for r in regions
        ]
    logger.debug(f"Tagged {len(regions)} boundary regions")
    return regions
