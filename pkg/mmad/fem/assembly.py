"""
Global assembly of the Galerkin and two-field (MMAD / MZAD) systems,
essential boundary conditions and the assemble-solve-scatter pipeline.
"""
import dataclasses
import logging
import time
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from mmad.analysis.oracles import ManufacturedSolution
from mmad.core.errors import ConfigError, InvalidArgumentError
from mmad.fem import linsolve
from mmad.fem.element import ElementGeometry, element_geometry
from mmad.fem.mesh import build_regions
from mmad.fem.stabilization import build_tensors, build_tensors_mzad
from mmad.models.models import (
    BoundaryRegion,
    DofMap,
    RegionKind,
    SolutionField,
    SparseSystem,
    StabilizationTensors,
    StructuredMesh,
)
from mmad.schemas.schemas import Method, ProblemConfig, VelocitySpec

logger = logging.getLogger(__name__)

_EDGE_GAUSS = np.array([-1.0, 1.0]) / np.sqrt(3.0)


def source_function(config: ProblemConfig) -> Callable[[np.ndarray], np.ndarray]:
    if config.source.kind == "constant":
        value = config.source.value
        return lambda points: np.full(np.asarray(points).reshape(-1, config.dimension).shape[0], value)
    solution = ManufacturedSolution(config.source.solution, config.dimension)
    return solution.source(config.pe, config.da, config.velocity)


def _scatter(mesh: StructuredMesh, local: np.ndarray, dofs_per_node: int) -> sp.csr_matrix:
    """Sum element matrices (ne, L, L) into a CSR matrix, in element order."""
    ne = mesh.n_elements
    dofs = (mesh.elements[:, :, None] * dofs_per_node + np.arange(dofs_per_node)).reshape(ne, -1)
    size = dofs.shape[1]
    rows = np.broadcast_to(dofs[:, :, None], (ne, size, size)).ravel()
    cols = np.broadcast_to(dofs[:, None, :], (ne, size, size)).ravel()
    n = mesh.n_nodes * dofs_per_node
    return sp.coo_matrix((local.ravel(), (rows, cols)), shape=(n, n)).tocsr()


def mass_local(geometry: ElementGeometry) -> np.ndarray:
    return np.einsum("eq,qa,qb->eab", geometry.weights, geometry.N, geometry.N)


def stiffness_local(geometry: ElementGeometry) -> np.ndarray:
    return np.einsum("eq,eqai,eqbi->eab", geometry.weights, geometry.gradN, geometry.gradN)


def convection_local(geometry: ElementGeometry, velocity: VelocitySpec) -> np.ndarray:
    ne, nq, d = geometry.points.shape
    uq = velocity.evaluate(geometry.points.reshape(-1, d)).reshape(ne, nq, d)
    return np.einsum("eq,qa,eqi,eqbi->eab", geometry.weights, geometry.N, uq, geometry.gradN)


def scalar_matrices(mesh: StructuredMesh) -> Tuple[sp.csr_matrix, sp.csr_matrix]:
    """Nodal mass and stiffness matrices."""
    geometry = element_geometry(mesh)
    return _scatter(mesh, mass_local(geometry), 1), _scatter(mesh, stiffness_local(geometry), 1)


def gradient_matrices(mesh: StructuredMesh) -> List[sp.csr_matrix]:
    """G_k with entries int N_a dN_b/dx_k, one per direction."""
    geometry = element_geometry(mesh)
    return [
        _scatter(mesh, np.einsum("eq,qa,eqb->eab", geometry.weights, geometry.N, geometry.gradN[..., k]), 1)
        for k in range(mesh.dimension)
    ]


def convection_matrix(mesh: StructuredMesh, velocity: VelocitySpec) -> sp.csr_matrix:
    """C_ab = int N_a (u . grad N_b), velocity sampled at quadrature points."""
    return _scatter(mesh, convection_local(element_geometry(mesh), velocity), 1)


def stabilization_sizes(mesh: StructuredMesh, config: ProblemConfig) -> Tuple[float, ...]:
    if config.stabilization_h is not None:
        return tuple(config.stabilization_h)
    return mesh.h_dir


def element_tensors(mesh: StructuredMesh, config: ProblemConfig) -> List[StabilizationTensors]:
    """
    Per-element tensors from the centroid velocity. Elements sharing a
    centroid velocity share one tensor object.
    """
    if config.method == Method.GALERKIN:
        return []
    h_dir = stabilization_sizes(mesh, config)
    velocities = config.velocity.evaluate(mesh.element_centroids())
    cache: Dict[Tuple[float, ...], StabilizationTensors] = {}
    tensors = []
    for u in velocities:
        key = tuple(u)
        if key not in cache:
            mmad = build_tensors(u, h_dir, config.pe, config.da)
            if config.method == Method.MMAD:
                cache[key] = mmad
            else:
                p = config.mzad_p if config.mzad_p is not None else mmad.kc + mmad.kr
                if not p > 0.0:
                    raise ConfigError("MZAD default p = kc + kr vanishes here; set mzad_p explicitly")
                cache[key] = build_tensors_mzad(p, mesh.dimension)
        tensors.append(cache[key])
    return tensors


def _stacked(tensors: Sequence[StabilizationTensors]) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    H = np.stack([t.H for t in tensors])
    K = np.stack([t.K for t in tensors])
    A = np.array([t.A_coeff for t in tensors])
    return H, K, A


def _neumann_rhs(mesh: StructuredMesh, regions: Sequence[BoundaryRegion]) -> np.ndarray:
    rhs = np.zeros(mesh.n_nodes)
    for region in regions:
        if region.kind != RegionKind.NEUMANN or region.facets.size == 0:
            continue
        if mesh.dimension == 1:
            nodes = region.facets[:, 0]
            rhs += np.bincount(nodes, weights=region.value_profile(mesh.node_coords[nodes]), minlength=mesh.n_nodes)
            continue
        start = mesh.node_coords[region.facets[:, 0]]
        end = mesh.node_coords[region.facets[:, 1]]
        half_length = 0.5 * np.linalg.norm(end - start, axis=1)
        for s in _EDGE_GAUSS:
            n0, n1 = 0.5 * (1.0 - s), 0.5 * (1.0 + s)
            flux = region.value_profile(n0 * start + n1 * end) * half_length
            rhs += np.bincount(region.facets[:, 0], weights=flux * n0, minlength=mesh.n_nodes)
            rhs += np.bincount(region.facets[:, 1], weights=flux * n1, minlength=mesh.n_nodes)
    return rhs


def assemble(mesh: StructuredMesh, config: ProblemConfig, regions: Optional[Sequence[BoundaryRegion]] = None) -> SparseSystem:
    """
    Assemble the unconstrained system. Per quadrature point: reaction mass,
    convection, diffusion, and for the two-field methods the H coupling
    blocks, the K mass on g and the A stiffness on grad g. Source and Neumann
    fluxes go to the phi rows of the right-hand side.
    """
    if config.dimension != mesh.dimension:
        raise ConfigError(f"config is {config.dimension}D but the mesh is {mesh.dimension}D")
    start_time = time.perf_counter()
    regions = build_regions(mesh, config.boundaries) if regions is None else regions
    dofmap = DofMap(method=config.method, dimension=mesh.dimension, n_nodes=mesh.n_nodes)
    dpn = dofmap.dofs_per_node
    d = mesh.dimension

    geometry = element_geometry(mesh)
    w, N, gradN = geometry.weights, geometry.N, geometry.gradN
    mass = mass_local(geometry)
    stiffness = stiffness_local(geometry)
    k_phiphi = config.da * mass + convection_local(geometry, config.velocity) + stiffness / config.pe

    tensors = element_tensors(mesh, config)
    ne, nen = mesh.n_elements, mesh.nodes_per_element
    if dofmap.has_g:
        H, K, A = _stacked(tensors)
        k_phiphi = k_phiphi + np.einsum("eq,eqai,eij,eqbj->eab", w, gradN, H, gradN)
        k_phig = -np.einsum("eq,eqai,eik,qb->eabk", w, gradN, H, N)
        k_gphi = -np.einsum("eq,qa,ekj,eqbj->eakb", w, N, H, gradN)
        k_gg = np.einsum("eab,ekl->eakbl", mass, H + K)
        k_gg += np.einsum("e,eab,kl->eakbl", A, stiffness, np.eye(d))
        local = np.zeros((ne, nen, dpn, nen, dpn))
        local[:, :, 0, :, 0] = k_phiphi
        local[:, :, 0, :, 1:] = k_phig
        local[:, :, 1:, :, 0] = k_gphi
        local[:, :, 1:, :, 1:] = k_gg
        local = local.reshape(ne, nen * dpn, nen * dpn)
    else:
        local = k_phiphi

    if not np.all(np.isfinite(local)):
        raise InvalidArgumentError("non-finite coefficient in the element matrices")
    matrix = _scatter(mesh, local, dpn)

    f_q = source_function(config)(geometry.points.reshape(-1, d)).reshape(ne, -1)
    if not np.all(np.isfinite(f_q)):
        raise InvalidArgumentError("non-finite source values")
    f_local = np.einsum("eq,eq,qa->ea", w, f_q, N)
    phi_rhs = np.bincount(mesh.elements.ravel(), weights=f_local.ravel(), minlength=mesh.n_nodes)
    phi_rhs += _neumann_rhs(mesh, regions)
    rhs = np.zeros(dofmap.total_dofs)
    rhs[dofmap.phi_dofs()] = phi_rhs

    elapsed = time.perf_counter() - start_time
    logger.info(
        f"Assembled {config.method.value} system: {dofmap.total_dofs} dofs, "
        f"{matrix.nnz} nonzeros in {elapsed:.3f}s"
    )
    return SparseSystem(
        matrix=matrix,
        rhs=rhs,
        dofmap=dofmap,
        mesh=mesh,
        tensors=tensors,
        timings={"assembly": elapsed},
    )


def essential_values(mesh: StructuredMesh, regions: Sequence[BoundaryRegion]) -> Tuple[np.ndarray, np.ndarray]:
    """
    Constrained node ids and values; when regions overlap the later one wins.
    """
    essential = [r for r in regions if r.kind in (RegionKind.DIRICHLET, RegionKind.INTERIOR)]
    if not essential:
        return np.zeros(0, dtype=np.int64), np.zeros(0)
    for region in essential:
        if region.node_ids.size and (region.node_ids.min() < 0 or region.node_ids.max() >= mesh.n_nodes):
            raise InvalidArgumentError(f"region '{region.name}' references a node outside the mesh")
    nodes = np.concatenate([r.node_ids for r in essential])
    values = np.concatenate([r.values(mesh) for r in essential])
    reversed_nodes = nodes[::-1]
    unique_nodes, first = np.unique(reversed_nodes, return_index=True)
    return unique_nodes, values[::-1][first]


def apply_dirichlet(system: SparseSystem, regions: Sequence[BoundaryRegion]) -> SparseSystem:
    """
    Impose phi = phi_p by row and column elimination with a rhs lift.
    Only phi dofs are constrained. Applying it again changes nothing.
    """
    mesh = system.mesh
    nodes, values = essential_values(mesh, regions)
    if nodes.size == 0:
        return dataclasses.replace(system, dirichlet_done=True)
    dofs = system.dofmap.phi_dofs(nodes)

    n = system.dofmap.total_dofs
    prescribed = np.zeros(n)
    prescribed[dofs] = values
    rhs = system.rhs - system.matrix @ prescribed

    keep = np.ones(n)
    keep[dofs] = 0.0
    free = sp.diags(keep)
    matrix = (free @ system.matrix @ free + sp.diags(1.0 - keep)).tocsr()
    matrix.eliminate_zeros()
    rhs[dofs] = values

    constrained = np.union1d(system.constrained_dofs, dofs)
    logger.debug(f"Applied {dofs.size} essential conditions")
    return dataclasses.replace(
        system, matrix=matrix, rhs=rhs, dirichlet_done=True, constrained_dofs=constrained
    )


def scatter_solution(system: SparseSystem, vector: np.ndarray, config: ProblemConfig) -> SolutionField:
    dofmap = system.dofmap
    phi = vector[dofmap.phi_dofs()].copy()
    g = None
    if dofmap.has_g:
        g = np.column_stack([vector[dofmap.g_dofs(k)] for k in range(dofmap.dimension)])
    return SolutionField(phi=phi, g=g, config=config, mesh=system.mesh, dofmap=dofmap)


def solve_case(mesh: StructuredMesh, config: ProblemConfig) -> SolutionField:
    """Assemble, constrain, solve and scatter one configuration."""
    start_time = time.perf_counter()
    regions = build_regions(mesh, config.boundaries)
    system = apply_dirichlet(assemble(mesh, config, regions), regions)
    report = linsolve.solve(system, tol=config.tol)
    solution = scatter_solution(system, report.solution, config)
    solution.report = report
    solution.timings = {
        "assembly": system.timings["assembly"],
        "solve": report.wall_time,
        "total": time.perf_counter() - start_time,
    }
    return solution


def generalized_strain(solution: SolutionField) -> np.ndarray:
    """e = grad phi - g at every quadrature point, shape (ne, nq, d)."""
    if solution.g is None:
        raise InvalidArgumentError("generalized strain needs a two-field solution")
    mesh = solution.mesh
    geometry = element_geometry(mesh)
    grad_phi = np.einsum("eqai,ea->eqi", geometry.gradN, solution.phi[mesh.elements])
    g_q = np.einsum("qa,eai->eqi", geometry.N, solution.g[mesh.elements])
    return grad_phi - g_q
