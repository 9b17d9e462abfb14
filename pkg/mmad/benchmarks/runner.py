"""
Run catalog cases and compare the Galerkin and two-field methods.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from mmad.analysis.norms import error_norms, total_variation
from mmad.analysis.oracles import ManufacturedSolution, exact_1d
from mmad.benchmarks.catalog import get_case, get_subcase
from mmad.core.config import REFERENCE_REFINEMENT
from mmad.core.errors import ConfigError
from mmad.fem.assembly import solve_case
from mmad.fem.mesh import build_mesh
from mmad.models.models import SolutionField, SolveReport
from mmad.schemas.schemas import (
    BenchmarkCase,
    ComparisonRow,
    ErrorReport,
    Method,
    ProblemConfig,
    SubCase,
)

logger = logging.getLogger(__name__)

EXACT_SAMPLES = 20001


@dataclass
class CaseResult:
    case_id: str
    subcase: SubCase
    config: ProblemConfig
    solution: SolutionField
    errors: ErrorReport
    report: SolveReport
    has_reference: bool = False
    reference_total_variation: Optional[float] = None
    physical: Dict[str, float] = field(default_factory=dict)

    @property
    def timings(self) -> Dict[str, float]:
        return self.solution.timings


def _resolve_subcase(case: BenchmarkCase, subcase: Optional[str], overrides: Dict[str, Any]) -> SubCase:
    base = get_subcase(case, subcase)
    pe = overrides.get("pe", base.pe)
    da = overrides.get("da", base.da)
    if pe == base.pe and da == base.da:
        return base
    return SubCase(label=f"pe={pe:g},da={da:g}", pe=pe, da=da)


def resolve_config(case_id: str, method: Method, overrides: Optional[Dict[str, Any]] = None,
                   subcase: Optional[str] = None) -> Tuple[BenchmarkCase, SubCase, ProblemConfig]:
    """Catalog config for a sub-case with ``method`` and type-checked overrides."""
    case = get_case(case_id)
    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
    chosen = _resolve_subcase(case, subcase, overrides)
    overrides.pop("pe", None)
    overrides.pop("da", None)
    config = case.subcase_config(chosen, method=Method(method), **overrides)
    return case, chosen, config


def exact_reference(config: ProblemConfig):
    """Closed-form reference and its range, when the configuration has one."""
    if config.source.kind == "manufactured":
        return ManufacturedSolution(config.source.solution, config.dimension), None
    homogeneous = all(
        spec.kind == "dirichlet" and spec.profile.kind == "constant" and spec.profile.value == 0.0
        for spec in config.boundaries
    )
    if config.dimension == 1 and config.velocity.kind == "constant" and homogeneous and len(config.boundaries) == 2:
        u = config.velocity.components[0]
        args = (config.pe, config.da, u, config.source.value)
        samples = exact_1d(*args, np.linspace(0.0, 1.0, EXACT_SAMPLES))
        return (lambda points: exact_1d(*args, np.asarray(points)[:, 0])), samples
    return None, None


def reference_solution(config: ProblemConfig, refinement: int = REFERENCE_REFINEMENT) -> SolutionField:
    """Two-field solve on a mesh refined ``refinement`` times per direction."""
    fine = config.with_overrides(method=Method.MMAD, nx=config.nx * refinement)
    mesh = build_mesh(fine.dimension, fine.nx, fine.ny)
    logger.info(f"Computing {refinement}x refined reference for {config.name} ({mesh.n_nodes} nodes)")
    return solve_case(mesh, fine)


def run_case(
    case_id: str,
    method: Method = Method.MMAD,
    overrides: Optional[Dict[str, Any]] = None,
    subcase: Optional[str] = None,
    with_reference: bool = False,
) -> CaseResult:
    """
    Solve one catalog sub-case and measure it against the exact solution
    when one exists, else against a refined reference if requested.
    """
    case, chosen, config = resolve_config(case_id, method, overrides, subcase)
    mesh = build_mesh(config.dimension, config.nx, config.ny)
    solution = solve_case(mesh, config)

    reference, samples = exact_reference(config)
    bounds = None
    reference_tv = None
    if samples is not None:
        bounds = (float(samples.min()), float(samples.max()))
        reference_tv = total_variation(samples)
    elif reference is None and with_reference:
        reference = reference_solution(config)
    errors = error_norms(solution, reference, bounds)

    logger.info(
        f"{case_id} [{chosen.label}] {config.method.value}: "
        f"overshoot {errors.max_overshoot:.3e}, undershoot {errors.max_undershoot:.3e}"
    )
    return CaseResult(
        case_id=case_id,
        subcase=chosen,
        config=config,
        solution=solution,
        errors=errors,
        report=solution.report,
        has_reference=reference is not None,
        reference_total_variation=reference_tv,
        physical=case.physical_parameters(chosen),
    )


def compare_methods(
    case_id: str,
    subcase: Optional[str] = None,
    repeats: int = 3,
    overrides: Optional[Dict[str, Any]] = None,
    methods: Tuple[Method, ...] = (Method.GALERKIN, Method.MMAD),
) -> List[ComparisonRow]:
    """
    One row per method with norms, oscillation metrics, DOFs and the best
    assembly-plus-solve time over ``repeats`` runs. The DOF ratio is
    relative to the first method.
    """
    if repeats < 1:
        raise ConfigError("repeats must be at least 1")
    rows = []
    base_dofs = None
    for method in methods:
        latest = None
        wall_time = np.inf
        for _ in range(repeats):
            result = run_case(case_id, method, overrides, subcase)
            wall_time = min(wall_time, result.timings["total"])
            latest = result
        dofmap = latest.solution.dofmap
        base_dofs = base_dofs or dofmap.total_dofs
        rows.append(ComparisonRow(
            method=method,
            dofs=dofmap.total_dofs,
            dofs_per_node=dofmap.dofs_per_node,
            dof_ratio=dofmap.total_dofs / base_dofs,
            wall_time=float(wall_time),
            l2_error=latest.errors.l2_error if latest.has_reference else None,
            h1_semi_error=latest.errors.h1_semi_error if latest.has_reference else None,
            max_overshoot=latest.errors.max_overshoot,
            max_undershoot=latest.errors.max_undershoot,
            total_variation=latest.errors.total_variation,
        ))
    return rows
