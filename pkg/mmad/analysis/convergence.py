"""
Mesh-refinement sweeps against manufactured or refined reference solutions.
"""
import logging
from typing import List, Optional, Sequence

from mmad.analysis.norms import convergence_rate, error_norms
from mmad.analysis.oracles import ManufacturedSolution
from mmad.core.config import REFERENCE_REFINEMENT
from mmad.core.errors import InvalidArgumentError
from mmad.fem.assembly import solve_case
from mmad.fem.mesh import build_mesh
from mmad.schemas.schemas import (
    EDGES_1D,
    EDGES_2D,
    BoundarySpec,
    ManufacturedSpec,
    Method,
    ProblemConfig,
    ProfileSpec,
    SourceSpec,
    SweepReport,
    VelocitySpec,
)

logger = logging.getLogger(__name__)


def manufactured_config(
    dimension: int = 2,
    pe: float = 10.0,
    da: float = 1.0,
    velocity: Optional[VelocitySpec] = None,
    solution: Optional[ManufacturedSpec] = None,
    method: Method = Method.MMAD,
    n: int = 8,
) -> ProblemConfig:
    """
    Problem whose exact solution is ``solution`` (sin(pi x) sin(pi y) by
    default): matching source and Dirichlet data on every edge.
    """
    solution = solution or ManufacturedSpec()
    if velocity is None:
        velocity = VelocitySpec(kind="angle", angle_deg=45.0) if dimension == 2 else VelocitySpec(components=[1.0])
    if solution.kind == "sine":
        profile = ProfileSpec(kind="constant", value=0.0)
    else:
        profile = ProfileSpec(kind="linear", coefficients=solution.coefficients[:dimension + 1])
    edges = EDGES_1D if dimension == 1 else EDGES_2D
    return ProblemConfig(
        name=f"manufactured-{solution.kind}",
        dimension=dimension,
        pe=pe,
        da=da,
        velocity=velocity,
        source=SourceSpec(kind="manufactured", solution=solution),
        boundaries=[BoundarySpec(kind="dirichlet", edge=edge, profile=profile) for edge in edges],
        nx=n,
        method=method,
    )


def _sweep(config: ProblemConfig, levels: Sequence[int], reference) -> SweepReport:
    hs: List[float] = []
    l2_errors: List[float] = []
    h1_errors: List[float] = []
    combined_errors: List[Optional[float]] = []
    for n in levels:
        solution = solve_case(build_mesh(config.dimension, n), config.with_overrides(nx=n))
        report = error_norms(solution, reference)
        hs.append(1.0 / n)
        l2_errors.append(report.l2_error)
        h1_errors.append(report.h1_semi_error)
        combined_errors.append(report.combined_norm)
        logger.info(f"Sweep level n={n}: l2 {report.l2_error:.4e}, h1 {report.h1_semi_error:.4e}")

    energy_errors = [c if c is not None else h for c, h in zip(combined_errors, h1_errors)]
    return SweepReport(
        method=config.method,
        levels=list(levels),
        hs=hs,
        l2_errors=l2_errors,
        h1_errors=h1_errors,
        combined_errors=combined_errors,
        rate=convergence_rate(energy_errors, hs),
        l2_rate=convergence_rate(l2_errors, hs),
    )


def manufactured_sweep(config: ProblemConfig, levels: Sequence[int]) -> SweepReport:
    """
    Solve ``config`` on each n x n mesh in ``levels`` and fit the rates of
    the combined norm (phi seminorm when there is no g) and the L2 norm.
    """
    if config.source.kind != "manufactured":
        raise InvalidArgumentError("manufactured sweep needs a manufactured source")
    levels = sorted(set(int(n) for n in levels))
    return _sweep(config, levels, ManufacturedSolution(config.source.solution, config.dimension))


def reference_sweep(
    config: ProblemConfig, levels: Sequence[int], refinement: int = REFERENCE_REFINEMENT
) -> SweepReport:
    """
    Refinement series for a problem without a closed form: every level is
    measured against one two-field solve on the finest level refined
    ``refinement`` times.
    """
    if refinement < 2:
        raise InvalidArgumentError(f"reference refinement must be at least 2, got {refinement}")
    levels = sorted(set(int(n) for n in levels))
    fine_n = levels[-1] * refinement
    reference_config = config.with_overrides(method=Method.MMAD, nx=fine_n)
    reference = solve_case(build_mesh(config.dimension, fine_n), reference_config)
    logger.info(f"Reference for sweep solved on n={fine_n}")
    return _sweep(config, levels, reference)
