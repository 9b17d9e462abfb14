import numpy as np
import pytest

from mmad.core.errors import InvalidArgumentError
from mmad.fem.mesh import (
    build_grid_mesh,
    build_interval_mesh,
    build_mesh,
    build_regions,
    select_nodes,
)
from mmad.models.models import RegionKind
from mmad.schemas.schemas import BoundarySpec, ProfileSpec


@pytest.fixture(scope="function")
def grid():
    return build_grid_mesh(4, 4)


def test_interval_mesh_counts():
    mesh = build_interval_mesh(100)
    assert mesh.n_nodes == 101
    assert mesh.n_elements == 100
    assert mesh.h_dir == (0.01,)


def test_single_element_interval():
    mesh = build_interval_mesh(1)
    assert mesh.node_coords[:, 0].tolist() == [0.0, 1.0]
    assert mesh.h_dir == (1.0,)


def test_interval_nodes_are_equispaced():
    mesh = build_interval_mesh(8)
    assert mesh.node_coords[3, 0] == 0.375


@pytest.mark.parametrize("count", [0, -3, 2.5])
def test_invalid_element_count(count):
    with pytest.raises(InvalidArgumentError):
        build_interval_mesh(count)


def test_grid_mesh_layout():
    mesh = build_grid_mesh(40, 40)
    assert mesh.n_nodes == 1681
    assert mesh.n_elements == 1600
    assert mesh.h_dir == (0.025, 0.025)
    # Node (i, j) sits at (i hx, j hy)
    node = mesh.node_index(7, 3)
    assert mesh.node_coords[node].tolist() == [7 / 40, 3 / 40]


def test_grid_corner_is_exactly_one():
    mesh = build_grid_mesh(3, 3)
    assert mesh.node_coords[-1].tolist() == [1.0, 1.0]
    assert np.all((mesh.node_coords >= 0.0) & (mesh.node_coords <= 1.0))


def test_quads_are_counterclockwise(grid):
    corners = grid.node_coords[grid.elements]
    # Shoelace area of every quad
    x, y = corners[..., 0], corners[..., 1]
    area = 0.5 * np.sum(x * np.roll(y, -1, axis=1) - np.roll(x, -1, axis=1) * y, axis=1)
    assert np.allclose(area, 1.0 / 16.0)


def test_rectangular_grid():
    mesh = build_mesh(2, 4, 2)
    assert mesh.shape == (5, 3)
    assert mesh.h_dir == (0.25, 0.5)


def test_select_edges(grid):
    assert select_nodes(grid, "left") == [0, 5, 10, 15, 20]
    assert select_nodes(grid, "bottom") == [0, 1, 2, 3, 4]
    assert len(select_nodes(grid, "boundary")) == 16


def test_select_segment(grid):
    nodes = select_nodes(grid, ((0.5, 0.0), (0.5, 0.5)))
    assert nodes == [grid.node_index(2, 0), grid.node_index(2, 1), grid.node_index(2, 2)]


def test_empty_selection_is_not_an_error():
    mesh = build_grid_mesh(3, 3)
    assert select_nodes(mesh, ((0.5, 0.5), (0.5, 0.5))) == []


def test_tolerance_widens_selection():
    mesh = build_grid_mesh(3, 3)
    assert select_nodes(mesh, ((0.3, 0.0), (0.3, 1.0)), tolerance=0.04) == [1, 5, 9, 13]


def test_unknown_edge(grid):
    with pytest.raises(InvalidArgumentError):
        select_nodes(grid, "front")


def test_segment_outside_domain(grid):
    with pytest.raises(InvalidArgumentError):
        select_nodes(grid, ((0.5, 0.0), (0.5, 1.5)))


def test_neumann_loses_shared_corners(grid):
    specs = [
        BoundarySpec(kind="dirichlet", edge="left", profile=ProfileSpec(value=1.0)),
        BoundarySpec(kind="neumann", edge="bottom"),
    ]
    dirichlet, neumann = build_regions(grid, specs)
    assert dirichlet.kind == RegionKind.DIRICHLET
    assert 0 in dirichlet.node_ids
    assert 0 not in neumann.node_ids
    assert neumann.node_ids.tolist() == [1, 2, 3, 4]
    # Facets still cover the whole edge for the flux integral
    assert neumann.facets.shape == (4, 2)


def test_interior_constraint_must_be_grid_aligned(grid):
    spec = BoundarySpec(kind="interior", segment=((0.3, 0.0), (0.3, 0.5)))
    with pytest.raises(InvalidArgumentError):
        build_regions(grid, [spec])


def test_region_values_follow_profile(grid):
    spec = BoundarySpec(
        kind="interior",
        segment=((0.5, 0.0), (0.5, 0.5)),
        profile=ProfileSpec(kind="sine", axis=1),
    )
    (region,) = build_regions(grid, [spec])
    assert region.kind == RegionKind.INTERIOR
    assert np.allclose(region.values(grid), np.sin(2.0 * np.pi * np.array([0.0, 0.25, 0.5])))
