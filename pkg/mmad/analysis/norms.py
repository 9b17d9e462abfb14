"""
Quadrature error norms, oscillation metrics and convergence rates.
"""
import logging
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np

from mmad.analysis.oracles import ManufacturedSolution
from mmad.core.errors import InvalidArgumentError
from mmad.fem.element import element_geometry, evaluate_nodal_field, gauss_rule
from mmad.models.models import SolutionField
from mmad.schemas.schemas import ErrorReport, ProblemConfig

logger = logging.getLogger(__name__)

Reference = Union[ManufacturedSolution, SolutionField, Callable[[np.ndarray], np.ndarray], None]

NORM_QUADRATURE_POINTS = 3
FD_STEP = 1e-6


def _finite_difference_gradient(function: Callable, points: np.ndarray) -> np.ndarray:
    gradient = np.empty_like(points)
    for i in range(points.shape[1]):
        step = np.zeros(points.shape[1])
        step[i] = FD_STEP
        gradient[:, i] = (function(points + step) - function(points - step)) / (2.0 * FD_STEP)
    return gradient


def _reference_at(reference: Reference, points: np.ndarray, dimension: int):
    """phi, grad phi, g, grad g of the reference at the given points."""
    n = points.shape[0]
    zero_g = np.zeros((n, dimension))
    zero_dg = np.zeros((n, dimension, dimension))
    if reference is None:
        return np.zeros(n), np.zeros((n, dimension)), zero_g, zero_dg
    if isinstance(reference, ManufacturedSolution):
        return (
            reference.value(points),
            reference.gradient(points),
            reference.g(points),
            reference.g_gradient(points),
        )
    if isinstance(reference, SolutionField):
        phi, grad_phi = evaluate_nodal_field(reference.mesh, reference.phi, points)
        if reference.g is None:
            return phi, grad_phi, zero_g, zero_dg
        g, grad_g = evaluate_nodal_field(reference.mesh, reference.g, points)
        return phi, grad_phi, g, grad_g
    function = lambda x: np.asarray(reference(x), dtype=float).reshape(-1)
    return function(points), _finite_difference_gradient(function, points), zero_g, zero_dg


def solution_bounds(config: ProblemConfig) -> Tuple[float, float]:
    """
    Bounds a monotone solution must respect: the prescribed data range,
    widened by F/Da when reaction is present. Without reaction a nonzero
    source leaves the solution unbounded a priori.
    """
    data = [spec.profile.value_range() for spec in config.boundaries if spec.kind != "neumann"]
    low = min((r[0] for r in data), default=np.inf)
    high = max((r[1] for r in data), default=-np.inf)
    if config.source.kind == "manufactured":
        return -np.inf, np.inf
    source = config.source.value
    if config.da > 0.0:
        ratio = source / config.da
        return min(low, ratio), max(high, ratio)
    if source != 0.0 or not data:
        return -np.inf, np.inf
    return low, high


def total_variation(values: Sequence[float]) -> float:
    values = np.asarray(values, dtype=float).reshape(-1)
    return float(np.abs(np.diff(values)).sum())


def oscillation(phi: np.ndarray, bounds: Tuple[float, float]) -> Tuple[float, float]:
    """Overshoot above and undershoot below the bounds, both >= 0."""
    low, high = bounds
    overshoot = max(0.0, float(phi.max()) - high) if np.isfinite(high) else 0.0
    undershoot = max(0.0, low - float(phi.min())) if np.isfinite(low) else 0.0
    return overshoot, undershoot


def error_norms(
    solution: SolutionField,
    reference: Reference,
    bounds: Optional[Tuple[float, float]] = None,
) -> ErrorReport:
    """
    L2 and H1-seminorm errors of phi, G-norm error of g (L2 plus gradient)
    and the combined product-space norm, all by Gauss quadrature. ``reference``
    can be a manufactured solution, a (finer) solution field, a plain callable
    (gradient by central differences) or None to measure the solution itself.
    """
    mesh = solution.mesh
    d = mesh.dimension
    rule = gauss_rule(d, NORM_QUADRATURE_POINTS)
    geometry = element_geometry(mesh, rule)
    points = geometry.points.reshape(-1, d)
    weights = geometry.weights.reshape(-1)
    local_phi = solution.phi[mesh.elements]

    phi_h = np.einsum("qa,ea->eq", geometry.N, local_phi).reshape(-1)
    grad_h = np.einsum("eqai,ea->eqi", geometry.gradN, local_phi).reshape(-1, d)
    phi_ref, grad_ref, g_ref, dg_ref = _reference_at(reference, points, d)

    l2 = float(np.sqrt(weights @ (phi_h - phi_ref) ** 2))
    h1 = float(np.sqrt(weights @ np.sum((grad_h - grad_ref) ** 2, axis=1)))

    g_norm = None
    combined = None
    if solution.g is not None:
        local_g = solution.g[mesh.elements]
        g_h = np.einsum("qa,eak->eqk", geometry.N, local_g).reshape(-1, d)
        dg_h = np.einsum("eqai,eak->eqki", geometry.gradN, local_g).reshape(-1, d, d)
        g_sq = weights @ (np.sum((g_h - g_ref) ** 2, axis=1) + np.sum((dg_h - dg_ref) ** 2, axis=(1, 2)))
        g_norm = float(np.sqrt(g_sq))
        combined = float(np.sqrt(h1 ** 2 + g_sq))

    bounds = solution_bounds(solution.config) if bounds is None else bounds
    overshoot, undershoot = oscillation(solution.phi, bounds)
    return ErrorReport(
        l2_error=l2,
        h1_semi_error=h1,
        g_norm=g_norm,
        combined_norm=combined,
        max_overshoot=overshoot,
        max_undershoot=undershoot,
        total_variation=total_variation(solution.phi) if d == 1 else None,
    )


def convergence_rate(errors: Sequence[float], hs: Sequence[float]) -> float:
    """Least-squares slope of log(error) against log(h)."""
    errors = np.asarray(errors, dtype=float)
    hs = np.asarray(hs, dtype=float)
    if errors.size < 3 or errors.size != hs.size:
        raise InvalidArgumentError("convergence rate needs at least 3 matching (error, h) pairs")
    if np.any(hs <= 0.0) or np.any(np.diff(hs) >= 0.0):
        raise InvalidArgumentError("mesh sizes must be positive and strictly decreasing")
    if np.any(errors <= 0.0):
        raise InvalidArgumentError("errors must be positive to take logarithms")
    slope, _ = np.polyfit(np.log(hs), np.log(errors), 1)
    return float(slope)
