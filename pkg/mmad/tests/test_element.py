import numpy as np
import pytest

from mmad.core.errors import DegenerateElementError, InvalidArgumentError
from mmad.fem.element import (
    element_geometry,
    evaluate_nodal_field,
    gauss_rule,
    reference_shape,
    shape_eval,
)
from mmad.fem.mesh import build_grid_mesh, build_interval_mesh

UNIT_QUAD = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])


@pytest.mark.parametrize("dimension", [1, 2])
def test_partition_of_unity(dimension):
    points = np.random.default_rng(1).uniform(-1.0, 1.0, size=(20, dimension))
    N, dN = reference_shape(points)
    assert np.allclose(N.sum(axis=1), 1.0)
    assert np.allclose(dN.sum(axis=1), 0.0)


def test_physical_gradients_on_unit_square():
    shape = shape_eval(UNIT_QUAD, [0.0, 0.0])
    assert shape.detJ == pytest.approx(0.25)
    assert np.allclose(shape.N, 0.25)
    assert np.allclose(shape.gradN, [[-0.5, -0.5], [0.5, -0.5], [0.5, 0.5], [-0.5, 0.5]])


def test_interval_element():
    shape = shape_eval(np.array([0.0, 0.5]), [1.0])
    assert shape.detJ == pytest.approx(0.25)
    assert np.allclose(shape.N, [0.0, 1.0])
    assert np.allclose(shape.gradN[:, 0], [-2.0, 2.0])


def test_clockwise_element_is_degenerate():
    with pytest.raises(DegenerateElementError):
        shape_eval(UNIT_QUAD[::-1], [0.0, 0.0])


def test_point_outside_reference_element():
    with pytest.raises(InvalidArgumentError):
        shape_eval(UNIT_QUAD, [1.5, 0.0])


@pytest.mark.parametrize("dimension, points", [(1, 2), (1, 3), (2, 2), (2, 3)])
def test_gauss_weights(dimension, points):
    rule = gauss_rule(dimension, points)
    assert rule.n_points == points ** dimension
    assert rule.weights.sum() == pytest.approx(2.0 ** dimension)


def test_three_point_rule_is_exact_for_quintics():
    rule = gauss_rule(1, 3)
    x = rule.points[:, 0]
    assert rule.weights @ x ** 4 == pytest.approx(2.0 / 5.0)
    assert rule.weights @ x ** 5 == pytest.approx(0.0, abs=1e-15)


def test_element_geometry_integrates_area():
    mesh = build_grid_mesh(5, 3)
    geometry = element_geometry(mesh)
    assert geometry.weights.sum() == pytest.approx(1.0)
    assert np.allclose(geometry.detJ, 0.25 / 15.0)


def test_nodal_field_interpolation_is_exact_for_bilinear():
    mesh = build_grid_mesh(4, 4)
    x, y = mesh.node_coords[:, 0], mesh.node_coords[:, 1]
    field = 1.0 + 2.0 * x - y + 3.0 * x * y
    points = np.array([[0.1, 0.7], [0.5, 0.5], [0.99, 0.01], [1.0, 1.0]])
    values, gradients = evaluate_nodal_field(mesh, field, points)
    px, py = points[:, 0], points[:, 1]
    assert np.allclose(values, 1.0 + 2.0 * px - py + 3.0 * px * py)
    assert np.allclose(gradients[:, 0], 2.0 + 3.0 * py)
    assert np.allclose(gradients[:, 1], -1.0 + 3.0 * px)


def test_nodal_field_interpolation_in_one_dimension():
    mesh = build_interval_mesh(10)
    values, gradients = evaluate_nodal_field(mesh, 3.0 * mesh.node_coords[:, 0], np.array([0.05, 0.55]))
    assert np.allclose(values, [0.15, 1.65])
    assert np.allclose(gradients[:, 0], 3.0)
