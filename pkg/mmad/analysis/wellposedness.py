"""
Coercivity and continuity constants of the two-field bilinear form and
numerical checks of the properties they rest on.
"""
import logging
from dataclasses import dataclass
from typing import Dict, Optional, Sequence

import numpy as np
from scipy.sparse.linalg import splu

from mmad.core.errors import InvalidArgumentError
from mmad.fem.assembly import (
    assemble,
    convection_matrix,
    element_tensors,
    gradient_matrices,
    scalar_matrices,
    solve_case,
)
from mmad.fem.mesh import build_mesh
from mmad.models.models import DofMap, SolutionField, StabilizationTensors, StructuredMesh
from mmad.schemas.schemas import CheckResult, Method, ProblemConfig, VelocitySpec

logger = logging.getLogger(__name__)

COERCIVITY_RTOL = 1e-9


@dataclass(frozen=True)
class TensorBounds:
    h0: float
    h_max: float
    k0: float
    k_max: float
    a0: float
    a_max: float
    u_max: float


def default_epsilon(h0: float, k0: float) -> float:
    """Midpoint of the admissible interval (H0 / (H0 + K0), 1)."""
    lower = h0 / (h0 + k0) if h0 + k0 > 0.0 else 0.0
    return 0.5 * (1.0 + lower)


def coercivity_constant(pe: float, h0: float, k0: float, a0: float, epsilon: Optional[float] = None) -> float:
    """
    M = min(1/Pe + H0 (1 - eps), min(K0 + H0 (1 - 1/eps), A0)).
    """
    if not pe > 0.0:
        raise InvalidArgumentError(f"Pe must be positive, got {pe}")
    if min(h0, k0, a0) < 0.0:
        raise InvalidArgumentError("H0, K0 and A0 must be nonnegative")
    epsilon = default_epsilon(h0, k0) if epsilon is None else epsilon
    if not 0.0 < epsilon < 1.0:
        raise InvalidArgumentError(f"epsilon must satisfy 0 < epsilon < 1, got {epsilon}")
    if h0 > 0.0 and not epsilon * (h0 + k0) > h0:
        raise InvalidArgumentError(
            f"K0 + H0 (1 - 1/epsilon) must be positive: epsilon = {epsilon} is not above H0/(H0 + K0) = {h0 / (h0 + k0)}"
        )
    phi_part = 1.0 / pe + h0 * (1.0 - epsilon)
    g_part = k0 + h0 * (1.0 - 1.0 / epsilon) if h0 > 0.0 else k0
    return min(phi_part, min(g_part, a0))


def continuity_constant(da: float, u_max: float, pe: float, h_max: float, k_max: float, a_max: float) -> float:
    """m = Da + u_max + 1/Pe + 2 H_max + K_max + A_max."""
    if not pe > 0.0:
        raise InvalidArgumentError(f"Pe must be positive, got {pe}")
    if min(da, u_max, h_max, k_max, a_max) < 0.0:
        raise InvalidArgumentError("continuity inputs must be nonnegative")
    return da + u_max + 1.0 / pe + 2.0 * h_max + k_max + a_max


def modelling_error_factor(h_max: float, pe: float) -> float:
    """Ratio of the perturbation bound to the Galerkin coercivity, H_max Pe."""
    return h_max * pe


def tensor_bounds(tensors: Sequence[StabilizationTensors], mesh: StructuredMesh, velocity: VelocitySpec) -> TensorBounds:
    """
    Extreme values over all elements: smallest eigenvalues (H0, K0, A0) and
    largest entry magnitudes (H_max, K_max, A_max), plus the largest velocity
    component magnitude at the nodes.
    """
    u_max = float(np.abs(velocity.evaluate(mesh.node_coords)).max())
    if not tensors:
        return TensorBounds(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, u_max)
    unique = {id(t): t for t in tensors}.values()
    return TensorBounds(
        h0=min(float(np.linalg.eigvalsh(t.H).min()) for t in unique),
        h_max=max(float(np.abs(t.H).max()) for t in unique),
        k0=min(float(np.linalg.eigvalsh(t.K).min()) for t in unique),
        k_max=max(float(np.abs(t.K).max()) for t in unique),
        a0=min(t.A_coeff for t in unique),
        a_max=max(abs(t.A_coeff) for t in unique),
        u_max=u_max,
    )


def _random_interior(mesh: StructuredMesh, rng: np.random.Generator) -> np.ndarray:
    v = np.zeros(mesh.n_nodes)
    interior = mesh.interior_nodes()
    v[interior] = rng.standard_normal(interior.size)
    return v


def check_skew_symmetry(mesh: StructuredMesh, velocity: VelocitySpec, trials: int = 100, seed: int = 0) -> float:
    """
    max |v^T C v| / (v^T M v) over random fields vanishing on the boundary.
    Close to round-off for divergence-free velocities.
    """
    if trials < 1:
        raise InvalidArgumentError("trials must be at least 1")
    if velocity.divergence() != 0.0:
        logger.warning(f"Velocity divergence is {velocity.divergence():g}; the convection form is not skew")
    convection = convection_matrix(mesh, velocity)
    mass, _ = scalar_matrices(mesh)
    rng = np.random.default_rng(seed)
    statistic = 0.0
    for _ in range(trials):
        v = _random_interior(mesh, rng)
        statistic = max(statistic, abs(v @ (convection @ v)) / (v @ (mass @ v)))
    logger.debug(f"Skew-symmetry statistic over {trials} trials: {statistic:.3e}")
    return float(statistic)


def product_norm_squared(mesh: StructuredMesh, dofmap: DofMap, vector: np.ndarray, mass=None, stiffness=None) -> float:
    """||grad phi||^2 + ||g||^2 + ||grad g||^2 of an interleaved dof vector."""
    if mass is None or stiffness is None:
        mass, stiffness = scalar_matrices(mesh)
    phi = vector[dofmap.phi_dofs()]
    total = phi @ (stiffness @ phi)
    if dofmap.has_g:
        for k in range(dofmap.dimension):
            g = vector[dofmap.g_dofs(k)]
            total += g @ (mass @ g) + g @ (stiffness @ g)
    return float(total)


def check_coercivity(
    mesh: StructuredMesh,
    config: ProblemConfig,
    trials: int = 100,
    seed: int = 0,
    epsilon: Optional[float] = None,
) -> CheckResult:
    """
    Sample B(v, v) / ||v||^2 over random two-field vectors with phi zero on
    the boundary and compare against the coercivity constant built from the
    assembled tensors.
    """
    if config.method == Method.GALERKIN:
        raise InvalidArgumentError("coercivity check needs a two-field method")
    system = assemble(mesh, config)
    bounds = tensor_bounds(system.tensors, mesh, config.velocity)
    M = coercivity_constant(config.pe, bounds.h0, bounds.k0, bounds.a0, epsilon)
    mass, stiffness = scalar_matrices(mesh)
    dofmap = system.dofmap
    rng = np.random.default_rng(seed)

    ratios = []
    for _ in range(trials):
        vector = rng.standard_normal(dofmap.total_dofs)
        vector[dofmap.phi_dofs()] = _random_interior(mesh, rng)
        energy = vector @ (system.matrix @ vector)
        ratios.append(energy / product_norm_squared(mesh, dofmap, vector, mass, stiffness))
    ratios = np.asarray(ratios)
    violations = int(np.sum(ratios < M * (1.0 - COERCIVITY_RTOL)))
    logger.info(f"Coercivity check: M = {M:.4e}, min ratio {ratios.min():.4e}, {violations} violations")
    return CheckResult(
        name="coercivity",
        passed=violations == 0,
        value=float(ratios.min()),
        threshold=M,
        detail=f"{violations} of {trials} samples below M",
    )


def l2_projection_of_gradient(solution: SolutionField) -> np.ndarray:
    """Nodal g solving M g_k = G_k phi, i.e. the L2 projection of grad phi."""
    mesh = solution.mesh
    mass, _ = scalar_matrices(mesh)
    factor = splu(mass.tocsc())
    return np.column_stack([factor.solve(G @ solution.phi) for G in gradient_matrices(mesh)])


def mzad_projection_gap(solution: SolutionField) -> float:
    """Largest nodal difference between the MZAD g and the projected gradient."""
    if solution.config.method != Method.MZAD or solution.g is None:
        raise InvalidArgumentError("projection gap is defined for MZAD solutions")
    return float(np.abs(solution.g - l2_projection_of_gradient(solution)).max())


def modelling_error_check(config: ProblemConfig, base_n: int = 16, refinement: int = 4) -> CheckResult:
    """
    Compare the two-field solution with H frozen at the ``base_n`` mesh to a
    Galerkin solution on the same refined mesh: the Phi-norm gap must stay
    below Pe H_max times the product norm of the two-field solution.
    """
    if config.source.kind != "manufactured":
        logger.warning("Modelling-error check is meant for smooth manufactured problems")
    fine_n = base_n * refinement
    frozen_h = [1.0 / base_n] * config.dimension
    two_field_config = config.with_overrides(method=Method.MMAD, nx=fine_n, stabilization_h=frozen_h)
    galerkin_config = config.with_overrides(method=Method.GALERKIN, nx=fine_n)
    mesh = build_mesh(config.dimension, fine_n)

    two_field = solve_case(mesh, two_field_config)
    galerkin = solve_case(mesh, galerkin_config)
    mass, stiffness = scalar_matrices(mesh)
    difference = two_field.phi - galerkin.phi
    gap = float(np.sqrt(difference @ (stiffness @ difference)))
    norm = float(np.sqrt(product_norm_squared(mesh, two_field.dofmap, two_field.as_vector(), mass, stiffness)))

    h_max = tensor_bounds(element_tensors(mesh, two_field_config), mesh, config.velocity).h_max
    bound = modelling_error_factor(h_max, config.pe) * norm
    logger.info(f"Modelling error: gap {gap:.4e}, bound {bound:.4e}")
    return CheckResult(
        name="modelling_error",
        passed=gap <= bound,
        value=gap,
        threshold=bound,
        detail=f"H_max = {h_max:.4e}, Pe = {config.pe:g}, base n = {base_n}, refined n = {fine_n}",
    )


def constants_report(mesh: StructuredMesh, config: ProblemConfig) -> Dict[str, float]:
    """Tensor bounds with the resulting M, m and modelling-error factor."""
    bounds = tensor_bounds(element_tensors(mesh, config), mesh, config.velocity)
    report = dict(vars(bounds))
    report["m"] = continuity_constant(config.da, bounds.u_max, config.pe, bounds.h_max, bounds.k_max, bounds.a_max)
    report["modelling_error_factor"] = modelling_error_factor(bounds.h_max, config.pe)
    if config.method == Method.MMAD:
        report["epsilon"] = default_epsilon(bounds.h0, bounds.k0)
        report["M"] = coercivity_constant(config.pe, bounds.h0, bounds.k0, bounds.a0)
    return report
