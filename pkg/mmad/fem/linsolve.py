"""
Sparse direct solve with a backward-error check and bounded iterative
refinement.
"""
import logging
import time

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from mmad.core.config import DEFAULT_TOLERANCE, MAX_REFINEMENT_STEPS
from mmad.core.errors import InvalidArgumentError, SolverError
from mmad.models.models import SolveReport, SparseSystem

logger = logging.getLogger(__name__)


def _relative_residual(matrix: sp.spmatrix, x: np.ndarray, b: np.ndarray, b_norm: float) -> float:
    return float(np.linalg.norm(matrix @ x - b) / b_norm)


def solve(system: SparseSystem, tol: float = DEFAULT_TOLERANCE) -> SolveReport:
    """
    Solve A x = b by LU with partial pivoting.

    The residual is recomputed from the original matrix after the solve and
    after each refinement step. It is relative to ||b||; a zero right-hand
    side is measured in absolute terms.
    """
    matrix = system.matrix
    rhs = np.asarray(system.rhs, dtype=float)
    if matrix.shape[0] != matrix.shape[1]:
        raise InvalidArgumentError(f"system matrix is not square: {matrix.shape}")
    if rhs.shape[0] != matrix.shape[0]:
        raise InvalidArgumentError("right-hand side length does not match the matrix")
    if not system.dirichlet_done:
        logger.warning("Solving a system without essential conditions applied")

    start_time = time.perf_counter()
    b_norm = float(np.linalg.norm(rhs)) or 1.0
    try:
        factor = splu(sp.csc_matrix(matrix))
    except RuntimeError as e:
        logger.error(f"LU factorization failed: {str(e)}")
        raise SolverError(f"factorization failed: {str(e)}") from e
    factor_time = time.perf_counter() - start_time

    x = factor.solve(rhs)
    history = [_relative_residual(matrix, x, rhs, b_norm)]
    steps = 0
    while not history[-1] <= tol and steps < MAX_REFINEMENT_STEPS:
        if not np.isfinite(history[-1]):
            break
        x = x + factor.solve(rhs - matrix @ x)
        history.append(_relative_residual(matrix, x, rhs, b_norm))
        steps += 1

    wall_time = time.perf_counter() - start_time
    if not history[-1] <= tol:
        logger.error(f"Solve missed tolerance {tol:g}: residual history {history}")
        raise SolverError(
            f"relative residual {history[-1]:.3e} exceeds tolerance {tol:g} after {steps} refinement steps",
            residual_history=history,
        )

    statistics = {
        "n": float(matrix.shape[0]),
        "nnz": float(matrix.nnz),
        "factor_nnz": float(factor.L.nnz + factor.U.nnz),
        "factor_time": factor_time,
        "refinement_steps": float(steps),
    }
    logger.info(f"Solved {matrix.shape[0]} unknowns: residual {history[-1]:.2e} in {wall_time:.3f}s")
    return SolveReport(
        solution=x,
        relative_residual=history[-1],
        statistics=statistics,
        wall_time=wall_time,
        residual_history=history,
    )
