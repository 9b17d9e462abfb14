"""
Linear (2-node) and bilinear (4-node) Lagrange elements: Gauss rules,
shape functions and the isoparametric map.
"""
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from mmad.core.errors import DegenerateElementError, InvalidArgumentError
from mmad.models.models import QuadratureRule, ShapeEval, StructuredMesh

_GAUSS_1D = np.array([-1.0, 1.0]) / np.sqrt(3.0)

# Natural coordinates of the quad nodes, counterclockwise.
_QUAD_NODES = np.array([[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]])


def gauss_rule(dimension: int, points_per_direction: int = 2) -> QuadratureRule:
    """
    Gauss-Legendre rule per direction (tensor rule in 2D). Assembly uses the
    2-point rule; error norms use more points.
    """
    if points_per_direction == 2:
        points_1d, weights_1d = _GAUSS_1D, np.ones(2)
    else:
        points_1d, weights_1d = np.polynomial.legendre.leggauss(points_per_direction)
    if dimension == 1:
        return QuadratureRule(points=points_1d.reshape(-1, 1), weights=weights_1d)
    if dimension == 2:
        xi, eta = np.meshgrid(points_1d, points_1d)
        wx, wy = np.meshgrid(weights_1d, weights_1d)
        points = np.column_stack([xi.ravel(), eta.ravel()])
        return QuadratureRule(points=points, weights=(wx * wy).ravel())
    raise InvalidArgumentError(f"unsupported dimension {dimension}")


def reference_shape(natural_points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Shape values (n_points, n_nodes) and natural derivatives
    (n_points, n_nodes, d) at the given natural points.
    """
    natural_points = np.atleast_2d(np.asarray(natural_points, dtype=float))
    dimension = natural_points.shape[1]
    if dimension == 1:
        xi = natural_points[:, 0]
        N = np.column_stack([(1.0 - xi) / 2.0, (1.0 + xi) / 2.0])
        dN = np.tile(np.array([[-0.5], [0.5]]), (xi.size, 1, 1))
        return N, dN
    if dimension == 2:
        xi = natural_points[:, [0]]
        eta = natural_points[:, [1]]
        a, b = _QUAD_NODES[:, 0], _QUAD_NODES[:, 1]
        N = (1.0 + a * xi) * (1.0 + b * eta) / 4.0
        dN = np.stack([a * (1.0 + b * eta) / 4.0, b * (1.0 + a * xi) / 4.0], axis=-1)
        return N, dN
    raise InvalidArgumentError(f"unsupported dimension {dimension}")


def shape_eval(element_nodes: np.ndarray, natural_point) -> ShapeEval:
    """
    Shape values, physical gradients and Jacobian determinant of one element
    at one natural point.
    """
    element_nodes = np.asarray(element_nodes, dtype=float)
    if element_nodes.ndim == 1:
        element_nodes = element_nodes.reshape(-1, 1)
    point = np.atleast_1d(np.asarray(natural_point, dtype=float))
    if np.any(np.abs(point) > 1.0 + 1e-14):
        raise InvalidArgumentError(f"natural point {point.tolist()} outside the reference element")
    N, dN = reference_shape(point.reshape(1, -1))
    jacobian = element_nodes.T @ dN[0]
    detJ = float(np.linalg.det(jacobian))
    if detJ <= 0.0:
        raise DegenerateElementError(f"element Jacobian determinant {detJ:g} is not positive")
    gradN = dN[0] @ np.linalg.inv(jacobian)
    return ShapeEval(N=N[0], gradN=gradN, detJ=detJ)


@dataclass(frozen=True)
class ElementGeometry:
    """
    Quadrature data for every element at once.

    N: (nq, nen); gradN: (ne, nq, nen, d); weights: (ne, nq) including detJ;
    points: (ne, nq, d) physical quadrature points.
    """
    N: np.ndarray
    gradN: np.ndarray
    weights: np.ndarray
    points: np.ndarray
    detJ: np.ndarray


def element_geometry(mesh: StructuredMesh, rule: QuadratureRule = None) -> ElementGeometry:
    rule = rule if rule is not None else gauss_rule(mesh.dimension)
    coords = mesh.node_coords[mesh.elements]
    N, dN = reference_shape(rule.points)
    jacobian = np.einsum("eai,qaj->eqij", coords, dN)
    detJ = np.linalg.det(jacobian)
    if np.any(detJ <= 0.0):
        bad = int(np.argmin(detJ.min(axis=1)))
        raise DegenerateElementError(f"element {bad} has a nonpositive Jacobian determinant")
    inverse = np.linalg.inv(jacobian)
    gradN = np.einsum("qaj,eqji->eqai", dN, inverse)
    return ElementGeometry(
        N=N,
        gradN=gradN,
        weights=detJ * rule.weights,
        points=np.einsum("qa,eai->eqi", N, coords),
        detJ=detJ,
    )


def locate_points(mesh: StructuredMesh, points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Element id and natural coordinates of points inside the unit domain.
    Points on an interior grid line go to the element on the upper side.
    """
    points = np.asarray(points, dtype=float).reshape(-1, mesh.dimension)
    counts = np.array([mesh.nx, mesh.ny][:mesh.dimension])
    scaled = points * counts
    cell = np.clip(np.floor(scaled).astype(np.int64), 0, counts - 1)
    natural = 2.0 * (scaled - cell) - 1.0
    element = cell[:, 0] if mesh.dimension == 1 else cell[:, 1] * mesh.nx + cell[:, 0]
    return element, natural


def evaluate_nodal_field(mesh: StructuredMesh, nodal_values: np.ndarray, points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Interpolate a nodal field (n_nodes,) or (n_nodes, m) at arbitrary points.
    Returns values and physical gradients (last axis = direction).
    """
    points = np.asarray(points, dtype=float).reshape(-1, mesh.dimension)
    element, natural = locate_points(mesh, points)
    N, dN = reference_shape(natural)
    local = np.asarray(nodal_values, dtype=float)[mesh.elements[element]]
    values = np.einsum("pa,pa...->p...", N, local)
    scale = 2.0 / np.asarray(mesh.h_dir)
    gradients = np.einsum("pai,pa...->p...i", dN * scale, local)
    return values, gradients
