"""
Property suite behind the ``verify`` command. Each check returns a
CheckResult; nothing here raises on a failed property.
"""
import logging
import math
from typing import Callable, List

import numpy as np

from mmad.analysis.convergence import manufactured_config
from mmad.analysis.norms import error_norms
from mmad.analysis.oracles import exact_1d, kr_bar_high_precision
from mmad.analysis.wellposedness import (
    check_coercivity,
    check_skew_symmetry,
    coercivity_constant,
    continuity_constant,
    modelling_error_check,
    mzad_projection_gap,
)
from mmad.benchmarks.catalog import get_case
from mmad.fem.assembly import solve_case
from mmad.fem.mesh import build_mesh
from mmad.fem.stabilization import gamma, kc_bar, kr_bar
from mmad.models.models import DofMap
from mmad.schemas.schemas import CheckResult, Method, SubCase, VelocitySpec

logger = logging.getLogger(__name__)

SKEW_TOL = 1e-12
SKEW_CONTROL_MIN = 1e-3
NODAL_TOL = 5e-3
MZAD_TOL = 1e-10


def _within(name: str, value: float, expected: float, tol: float, detail: str = "") -> CheckResult:
    error = abs(value - expected)
    return CheckResult(name=name, passed=error <= tol, value=value, threshold=tol,
                       detail=detail or f"expected {expected!r}, |difference| = {error:.3e}")


def check_parameter_formulas() -> List[CheckResult]:
    results = [
        _within("gamma(1)", gamma(1.0), 1.0 / math.tanh(1.0) - 1.0, 1e-6),
        _within("kr_bar(Pe=1e3, Da=10, h=0.025)", kr_bar(1e3, 10.0, 0.025), 6.5056e-4, 1e-8),
    ]

    # beta = 1e-3 with Pe = 1, h = 0.02 needs Da = 0.01
    series = kr_bar(1.0, 0.01, 0.02)
    reference = kr_bar_high_precision(1.0, 0.01, 0.02)
    results.append(CheckResult(
        name="kr_bar small-beta series", passed=abs(series / reference - 1.0) <= 1e-10,
        value=abs(series / reference - 1.0), threshold=1e-10, detail="relative to 60-digit evaluation",
    ))

    # beta = 30 with Pe = 1e3, h = 0.025 needs Da = 5760
    large = kr_bar(1e3, 5760.0, 0.025)
    asymptote = 5760.0 * 0.025 ** 2 / 6.0 - 1.0 / 1e3
    results.append(CheckResult(
        name="kr_bar large-beta asymptote", passed=abs(large / asymptote - 1.0) <= 1e-6,
        value=abs(large / asymptote - 1.0), threshold=1e-6,
    ))

    results.append(_within("gamma limit alpha -> inf", gamma(1e8), 1.0, 1e-7))
    results.append(_within("gamma limit alpha -> 0", gamma(1e-9), 0.0, 1e-9))
    results.append(_within("kc_bar high Pe", kc_bar([1.0, 0.0], [0.025, 0.025], 1e12), 0.0125, 1e-9))
    return results


def check_constants() -> List[CheckResult]:
    return [
        _within("coercivity constant", coercivity_constant(100.0, 0.1, 1.0, 1.0, 0.5), 0.06, 1e-14),
        _within("continuity constant", continuity_constant(1.0, 1.0, 10.0, 0.05, 1.0, 1.0), 4.2, 1e-12),
    ]


def check_skew() -> List[CheckResult]:
    mesh = build_mesh(2, 40)
    constant = check_skew_symmetry(mesh, VelocitySpec(kind="angle", angle_deg=45.0))
    rotational = check_skew_symmetry(mesh, VelocitySpec(kind="rotational"))
    control = check_skew_symmetry(
        mesh, VelocitySpec(kind="linear", components=[0.0, 0.0], matrix=[[1.0, 0.0], [0.0, 0.0]])
    )
    return [
        CheckResult(name="skew symmetry, constant u", passed=constant <= SKEW_TOL, value=constant, threshold=SKEW_TOL),
        CheckResult(name="skew symmetry, rotating u", passed=rotational <= SKEW_TOL, value=rotational, threshold=SKEW_TOL),
        CheckResult(name="skew symmetry control, u = (x1, 0)", passed=control > SKEW_CONTROL_MIN,
                    value=control, threshold=SKEW_CONTROL_MIN, detail="must exceed the threshold"),
    ]


def check_dof_layout() -> List[CheckResult]:
    results = []
    for dimension, expected in ((1, 2), (2, 3)):
        per_node = DofMap(method=Method.MMAD, dimension=dimension, n_nodes=4).dofs_per_node
        results.append(_within(f"dofs per node, {dimension}D", per_node, expected, 0.0))
    return results


def check_oracle_match() -> List[CheckResult]:
    case = get_case("ex1")
    subcase = SubCase(label="pe=1,da=1", pe=1.0, da=1.0)
    results = []
    combined = {}
    for method in (Method.GALERKIN, Method.MMAD):
        config = case.subcase_config(subcase, method=method)
        mesh = build_mesh(1, config.nx)
        solution = solve_case(mesh, config)
        exact = exact_1d(1.0, 1.0, 1.0, 1.0, mesh.node_coords[:, 0])
        nodal = float(np.abs(solution.phi - exact).max())
        results.append(CheckResult(name=f"ex1 nodal error, {method.value}", passed=nodal <= NODAL_TOL,
                                   value=nodal, threshold=NODAL_TOL))
        report = error_norms(solution, lambda x: exact_1d(1.0, 1.0, 1.0, 1.0, x[:, 0]))
        combined[method] = report.combined_norm if report.combined_norm is not None else report.h1_semi_error
    ratio = combined[Method.MMAD] / combined[Method.GALERKIN]
    results.append(CheckResult(name="ex1 combined error ratio", passed=ratio <= 2.0, value=ratio, threshold=2.0))
    return results


def check_coercivity_ex3() -> List[CheckResult]:
    case = get_case("ex3")
    config = case.subcase_config(SubCase(label="pe=1e3,da=10", pe=1e3, da=10.0), method=Method.MMAD)
    return [check_coercivity(build_mesh(2, config.nx), config)]


def check_mzad_reduction() -> List[CheckResult]:
    config = manufactured_config(dimension=2, method=Method.MZAD, n=20).with_overrides(mzad_p=0.01)
    solution = solve_case(build_mesh(2, 20), config)
    gap = mzad_projection_gap(solution)
    return [CheckResult(name="MZAD g equals projected gradient", passed=gap <= MZAD_TOL, value=gap, threshold=MZAD_TOL)]


def check_modelling_error() -> List[CheckResult]:
    return [modelling_error_check(manufactured_config(dimension=2, pe=10.0, da=1.0))]


SUITE: List[Callable[[], List[CheckResult]]] = [
    check_parameter_formulas,
    check_constants,
    check_dof_layout,
    check_skew,
    check_oracle_match,
    check_coercivity_ex3,
    check_mzad_reduction,
    check_modelling_error,
]


def run_verification_suite() -> List[CheckResult]:
    results = []
    for check in SUITE:
        for result in check():
            level = logging.INFO if result.passed else logging.ERROR
            logger.log(level, f"{'PASS' if result.passed else 'FAIL'} {result.name}: {result.value:.6g} (threshold {result.threshold:.3g})")
            results.append(result)
    return results
