import numpy as np
import pytest
import scipy.sparse as sp

from mmad.core.errors import InvalidArgumentError, SolverError
from mmad.fem import linsolve
from mmad.fem.assembly import apply_dirichlet, assemble
from mmad.fem.mesh import build_grid_mesh, build_interval_mesh, build_regions
from mmad.models.models import DofMap, SparseSystem
from mmad.schemas.schemas import BoundarySpec, Method, ProblemConfig, SourceSpec, VelocitySpec


def _system(matrix, rhs):
    mesh = build_interval_mesh(len(rhs) - 1)
    return SparseSystem(
        matrix=sp.csr_matrix(matrix),
        rhs=np.asarray(rhs, dtype=float),
        dofmap=DofMap(method=Method.GALERKIN, dimension=1, n_nodes=mesh.n_nodes),
        mesh=mesh,
        dirichlet_done=True,
    )


def test_identity_system():
    report = linsolve.solve(_system(np.eye(3), [1.0, 2.0, 3.0]))
    assert np.allclose(report.solution, [1.0, 2.0, 3.0])
    assert report.relative_residual <= 1e-15
    assert report.statistics["n"] == 3
    assert report.statistics["refinement_steps"] == 0


def test_nonsymmetric_system():
    matrix = np.array([[4.0, -1.0, 0.0], [2.0, 5.0, 1.0], [0.0, -3.0, 6.0]])
    rhs = np.array([1.0, -2.0, 0.5])
    report = linsolve.solve(_system(matrix, rhs))
    assert np.allclose(matrix @ report.solution, rhs)


def test_singular_system():
    with pytest.raises(SolverError) as exc_info:
        linsolve.solve(_system(np.zeros((2, 2)), [1.0, 1.0]))
    assert exc_info.value.exit_code == 2


def test_shape_mismatch():
    system = _system(np.eye(3), [1.0, 2.0, 3.0])
    system.rhs = np.ones(2)
    with pytest.raises(InvalidArgumentError):
        linsolve.solve(system)


def test_two_field_system_meets_tolerance():
    config = ProblemConfig(
        dimension=2,
        pe=1e3,
        da=10.0,
        velocity=VelocitySpec(kind="angle", angle_deg=45.0),
        source=SourceSpec(value=1.0),
        boundaries=[BoundarySpec(kind="dirichlet", edge=e) for e in ("left", "right", "bottom", "top")],
        nx=40,
        method=Method.MMAD,
    )
    mesh = build_grid_mesh(40, 40)
    regions = build_regions(mesh, config.boundaries)
    system = apply_dirichlet(assemble(mesh, config, regions), regions)
    report = linsolve.solve(system)
    assert report.relative_residual <= 1e-10
    assert report.statistics["n"] == 5043
    assert report.wall_time > 0.0


def test_residual_is_relative_to_a_small_right_hand_side():
    matrix = np.array([[4.0, -1.0, 0.0], [2.0, 5.0, 1.0], [0.0, -3.0, 6.0]])
    system = _system(matrix, 1e-6 * np.array([1.0, -2.0, 0.5]))
    report = linsolve.solve(system)
    residual = np.linalg.norm(system.matrix @ report.solution - system.rhs)
    assert report.relative_residual == pytest.approx(residual / np.linalg.norm(system.rhs))
    assert report.residual_history[-1] == report.relative_residual


def test_zero_right_hand_side():
    report = linsolve.solve(_system(np.eye(3), np.zeros(3)))
    assert np.all(report.solution == 0.0)
    assert report.relative_residual == 0.0
