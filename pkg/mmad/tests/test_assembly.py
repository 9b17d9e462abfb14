import numpy as np
import pytest

from mmad.analysis.convergence import manufactured_config
from mmad.core.errors import ConfigError, InvalidArgumentError
from mmad.fem.assembly import (
    apply_dirichlet,
    assemble,
    convection_matrix,
    element_tensors,
    essential_values,
    generalized_strain,
    gradient_matrices,
    scalar_matrices,
    solve_case,
)
from mmad.fem.mesh import build_grid_mesh, build_interval_mesh, build_mesh, build_regions
from mmad.models.models import BoundaryRegion, RegionKind
from mmad.schemas.schemas import (
    BoundarySpec,
    ManufacturedSpec,
    Method,
    ProblemConfig,
    ProfileSpec,
    SourceSpec,
    VelocitySpec,
)


def _config_2d(method=Method.MMAD, n=8, **fields):
    data = dict(
        name="square",
        dimension=2,
        pe=100.0,
        da=1.0,
        velocity=VelocitySpec(kind="angle", angle_deg=30.0),
        source=SourceSpec(value=1.0),
        boundaries=[BoundarySpec(kind="dirichlet", edge=e) for e in ("left", "right", "bottom", "top")],
        nx=n,
        method=method,
    )
    data.update(fields)
    return ProblemConfig(**data)


def _diffusion_1d(method=Method.GALERKIN, n=10, pe=4.0):
    return ProblemConfig(
        dimension=1,
        pe=pe,
        da=0.0,
        velocity=VelocitySpec(components=[0.0]),
        source=SourceSpec(value=1.0),
        boundaries=[BoundarySpec(kind="dirichlet", edge="left"), BoundarySpec(kind="dirichlet", edge="right")],
        nx=n,
        method=method,
    )


def test_dof_counts():
    one_d = _diffusion_1d(Method.MMAD, n=100).with_overrides(velocity=VelocitySpec(components=[1.0]))
    system = assemble(build_interval_mesh(100), one_d)
    assert system.shape == (202, 202)
    assert system.dofmap.dofs_per_node == 2

    system = assemble(build_grid_mesh(40, 40), _config_2d(n=40))
    assert system.shape == (5043, 5043)
    assert system.dofmap.dofs_per_node == 3

    system = assemble(build_grid_mesh(40, 40), _config_2d(Method.GALERKIN, n=40))
    assert system.shape == (1681, 1681)


def test_interleaved_layout():
    mesh = build_grid_mesh(2, 2)
    system = assemble(mesh, _config_2d(n=2))
    assert system.dofmap.phi_dofs([0, 4]).tolist() == [0, 12]
    assert system.dofmap.g_dofs(1, [4]).tolist() == [14]


def test_scalar_matrices():
    mesh = build_grid_mesh(4, 4)
    mass, stiffness = scalar_matrices(mesh)
    ones = np.ones(mesh.n_nodes)
    assert ones @ (mass @ ones) == pytest.approx(1.0)
    assert np.allclose(stiffness @ ones, 0.0)
    assert abs(mass - mass.T).max() == pytest.approx(0.0)


def test_gradient_matrices_reproduce_linear_gradients():
    mesh = build_grid_mesh(4, 4)
    mass, _ = scalar_matrices(mesh)
    phi = 2.0 * mesh.node_coords[:, 0] - 3.0 * mesh.node_coords[:, 1]
    G = gradient_matrices(mesh)
    ones = np.ones(mesh.n_nodes)
    assert np.allclose(G[0] @ phi, 2.0 * (mass @ ones))
    assert np.allclose(G[1] @ phi, -3.0 * (mass @ ones))


def test_convection_is_skew_on_interior_fields():
    mesh = build_grid_mesh(6, 6)
    C = convection_matrix(mesh, VelocitySpec(kind="angle", angle_deg=45.0)).toarray()
    interior = mesh.interior_nodes()
    block = C[np.ix_(interior, interior)]
    assert np.allclose(block, -block.T, atol=1e-14)


def test_pure_convection_stencil_is_central():
    config = _diffusion_1d(pe=1e12).with_overrides(velocity=VelocitySpec(components=[1.0]), source=SourceSpec(value=0.0))
    system = assemble(build_interval_mesh(10), config)
    row = system.matrix.tocsr()[5].toarray().ravel()
    assert np.allclose(row[4:7], [-0.5, 0.0, 0.5], atol=1e-9)
    assert np.allclose(np.delete(row, [4, 5, 6]), 0.0)


@pytest.mark.parametrize("mesh, config", [
    (build_interval_mesh(2), _diffusion_1d(Method.MMAD, n=2).with_overrides(velocity=VelocitySpec(components=[1.0]), da=1.0)),
    (build_grid_mesh(2, 1), _config_2d(n=2, ny=1)),
])
def test_auxiliary_block_is_positive_definite(mesh, config):
    system = assemble(mesh, config)
    dofmap = system.dofmap
    g = np.concatenate([dofmap.g_dofs(k) for k in range(dofmap.dimension)])
    block = system.matrix.toarray()[np.ix_(g, g)]
    assert np.allclose(block, block.T, atol=1e-14)
    assert np.linalg.eigvalsh(block).min() > 0.0


def test_homogeneous_data_gives_zero_fields():
    config = _config_2d(n=6, source=SourceSpec(value=0.0))
    solution = solve_case(build_grid_mesh(6, 6), config)
    assert np.all(solution.phi == 0.0)
    assert np.all(solution.g == 0.0)


def test_galerkin_diffusion_is_nodally_exact():
    config = _diffusion_1d(pe=4.0)
    mesh = build_interval_mesh(10)
    solution = solve_case(mesh, config)
    x = mesh.node_coords[:, 0]
    assert np.allclose(solution.phi, 4.0 * x * (1.0 - x) / 2.0, atol=1e-10)
    assert solution.g is None


def test_linear_patch_is_reproduced():
    spec = ManufacturedSpec(kind="linear", coefficients=[1.0, 1.0, 2.0])
    mesh = build_grid_mesh(5, 5)
    exact = 1.0 + mesh.node_coords[:, 0] + 2.0 * mesh.node_coords[:, 1]
    for method in (Method.GALERKIN, Method.MZAD):
        config = manufactured_config(solution=spec, method=method, n=5).with_overrides(mzad_p=0.1)
        solution = solve_case(mesh, config)
        assert np.allclose(solution.phi, exact, atol=1e-10)
    # MZAD recovers the exact gradient
    assert np.allclose(solution.g, [1.0, 2.0], atol=1e-10)


def test_constant_state_is_exact_for_mmad():
    boundaries = [BoundarySpec(kind="dirichlet", edge=e, profile=ProfileSpec(value=1.0))
                  for e in ("left", "right", "bottom", "top")]
    config = _config_2d(n=6, boundaries=boundaries)
    solution = solve_case(build_grid_mesh(6, 6), config)
    assert np.allclose(solution.phi, 1.0, atol=1e-12)
    assert np.allclose(solution.g, 0.0, atol=1e-12)
    assert np.allclose(generalized_strain(solution), 0.0, atol=1e-10)


def test_dirichlet_is_idempotent():
    mesh = build_grid_mesh(4, 4)
    config = _config_2d(n=4)
    regions = build_regions(mesh, config.boundaries)
    once = apply_dirichlet(assemble(mesh, config, regions), regions)
    twice = apply_dirichlet(once, regions)
    assert abs(once.matrix - twice.matrix).max() == 0.0
    assert np.array_equal(once.rhs, twice.rhs)
    assert once.dirichlet_done


def test_dirichlet_constrains_phi_only():
    mesh = build_grid_mesh(4, 4)
    config = _config_2d(n=4)
    regions = build_regions(mesh, config.boundaries)
    system = apply_dirichlet(assemble(mesh, config, regions), regions)
    matrix = system.matrix.tocsr()
    corner = 0
    phi_row = matrix[system.dofmap.phi_dofs([corner])[0]]
    assert phi_row.nnz == 1
    g_row = matrix[system.dofmap.g_dofs(0, [corner])[0]]
    assert g_row.nnz > 1
    assert system.constrained_dofs.size == mesh.boundary_nodes().size


def test_constraint_outside_the_mesh():
    mesh = build_grid_mesh(2, 2)
    config = _config_2d(n=2)
    outside = BoundaryRegion(
        kind=RegionKind.DIRICHLET,
        node_ids=np.array([mesh.n_nodes]),
        value_profile=lambda points: np.zeros(len(points)),
        facets=np.zeros((0, 2), dtype=np.int64),
        name="outside",
    )
    with pytest.raises(InvalidArgumentError):
        apply_dirichlet(assemble(mesh, config), [outside])


def test_later_essential_region_wins():
    mesh = build_grid_mesh(2, 2)
    specs = [
        BoundarySpec(kind="dirichlet", edge="left", profile=ProfileSpec(value=1.0)),
        BoundarySpec(kind="dirichlet", edge="bottom", profile=ProfileSpec(value=2.0)),
    ]
    nodes, values = essential_values(mesh, build_regions(mesh, specs))
    assert dict(zip(nodes.tolist(), values.tolist()))[0] == 2.0


def test_neumann_flux_enters_the_rhs():
    config = ProblemConfig(
        dimension=1,
        pe=1.0,
        velocity=VelocitySpec(components=[0.0]),
        da=1.0,
        boundaries=[
            BoundarySpec(kind="dirichlet", edge="left"),
            BoundarySpec(kind="neumann", edge="right", profile=ProfileSpec(value=0.5)),
        ],
        nx=4,
        method=Method.GALERKIN,
    )
    system = assemble(build_interval_mesh(4), config)
    assert system.rhs[-1] == pytest.approx(0.5)
    assert np.allclose(system.rhs[:-1], 0.0)


def test_dimension_mismatch():
    with pytest.raises(ConfigError):
        assemble(build_interval_mesh(4), _config_2d(n=4))


def test_tensors_are_shared_for_constant_velocity():
    mesh = build_grid_mesh(4, 4)
    tensors = element_tensors(mesh, _config_2d(n=4))
    assert len(tensors) == 16
    assert len({id(t) for t in tensors}) == 1


def test_mzad_needs_positive_default_parameter():
    config = _config_2d(Method.MZAD, n=4, da=0.0, velocity=VelocitySpec(components=[0.0, 0.0]))
    with pytest.raises(ConfigError):
        element_tensors(build_grid_mesh(4, 4), config)


def test_frozen_stabilization_size():
    mesh = build_mesh(2, 16)
    config = _config_2d(n=16)
    frozen = element_tensors(mesh, config.with_overrides(stabilization_h=[0.25, 0.25]))[0]
    default = element_tensors(mesh, config)[0]
    assert frozen.kc > default.kc
