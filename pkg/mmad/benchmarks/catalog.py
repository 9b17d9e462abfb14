"""
The six standard reaction-convection-diffusion test cases.

Boundary profiles and the (Pe, Da) grids not fixed by the problem
statements are defaults; every field can be overridden through config.
"""
import logging
from typing import Dict, List

from mmad.core.errors import InvalidArgumentError
from mmad.schemas.schemas import (
    BenchmarkCase,
    BoundarySpec,
    ProblemConfig,
    ProfileSpec,
    SourceSpec,
    SubCase,
    VelocitySpec,
)

logger = logging.getLogger(__name__)

GRID_2D = 40
GRID_1D = 100

ZERO = ProfileSpec(kind="constant", value=0.0)
ONE = ProfileSpec(kind="constant", value=1.0)


def _subcases(pairs) -> List[SubCase]:
    return [SubCase(label=f"pe={pe:g},da={da:g}", pe=pe, da=da) for pe, da in pairs]


def _dirichlet(edge: str, profile: ProfileSpec) -> BoundarySpec:
    return BoundarySpec(kind="dirichlet", edge=edge, profile=profile)


def _example_1() -> BenchmarkCase:
    config = ProblemConfig(
        name="ex1",
        dimension=1,
        velocity=VelocitySpec(components=[1.0]),
        source=SourceSpec(value=1.0),
        boundaries=[_dirichlet("left", ZERO), _dirichlet("right", ZERO)],
        nx=GRID_1D,
    )
    return BenchmarkCase(
        id="ex1",
        title="1D reaction-convection-diffusion with unit source",
        config=config,
        subcases=_subcases([(1.0, 1e4), (1e2, 1e2), (1e3, 1e2), (1e4, 1e2), (1e6, 1e-2)]),
        provenance="unit source, homogeneous ends, h = 0.01; closed-form reference available",
    )


def _skew_inflow(name: str, outflow_dirichlet: bool) -> ProblemConfig:
    step = ProfileSpec(kind="step", axis=0, threshold=0.25, below=1.0, above=0.0)
    boundaries = [_dirichlet("left", ONE), _dirichlet("bottom", step)]
    if outflow_dirichlet:
        boundaries += [_dirichlet("top", ZERO), _dirichlet("right", ZERO)]
    else:
        boundaries += [
            BoundarySpec(kind="neumann", edge="top", profile=ZERO),
            BoundarySpec(kind="neumann", edge="right", profile=ZERO),
        ]
    return ProblemConfig(
        name=name,
        dimension=2,
        velocity=VelocitySpec(kind="angle", angle_deg=45.0),
        source=SourceSpec(value=0.0),
        boundaries=boundaries,
        nx=GRID_2D,
    )


SKEW_PAIRS = [(1.0, 1e4), (1e2, 1e2), (1e3, 10.0), (1e4, 1.0), (1e6, 1e-2)]


def _example_2() -> BenchmarkCase:
    return BenchmarkCase(
        id="ex2",
        title="45-degree advection of a discontinuous inflow, free outflow",
        config=_skew_inflow("ex2", outflow_dirichlet=False),
        subcases=_subcases(SKEW_PAIRS),
        provenance="u = (sqrt(2)/2, sqrt(2)/2); unit inflow on the left and on the bottom up to x = 0.25; "
                   "zero flux on top and right",
    )


def _example_3() -> BenchmarkCase:
    return BenchmarkCase(
        id="ex3",
        title="45-degree advection of a discontinuous inflow, fixed outflow",
        config=_skew_inflow("ex3", outflow_dirichlet=True),
        subcases=_subcases(SKEW_PAIRS),
        provenance="as ex2 with phi = 0 on top and right, producing boundary layers",
    )


def _example_4() -> BenchmarkCase:
    hill = ProfileSpec(kind="sine", axis=1, amplitude=1.0, frequency=1.0)
    config = ProblemConfig(
        name="ex4",
        dimension=2,
        velocity=VelocitySpec(kind="rotational"),
        source=SourceSpec(value=0.0),
        boundaries=[_dirichlet(edge, ZERO) for edge in ("left", "right", "bottom", "top")]
        + [BoundarySpec(kind="interior", segment=((0.5, 0.0), (0.5, 0.5)), profile=hill)],
        nx=GRID_2D,
    )
    return BenchmarkCase(
        id="ex4",
        title="Rotating hill",
        config=config,
        subcases=_subcases([(1.0, 1e6), (1e3, 1.0), (1e6, 1e-2), (1e6, 1e-4)]),
        provenance="u = (-x2, x1); hill phi = sin(2 pi x2) imposed on the segment (0.5, 0)-(0.5, 0.5)",
    )


def _example_5() -> BenchmarkCase:
    left = ProfileSpec(kind="step", axis=1, threshold=0.5, below=1.0, above=0.0)
    config = ProblemConfig(
        name="ex5",
        dimension=2,
        velocity=VelocitySpec(kind="constant", components=[0.15, 0.1]),
        source=SourceSpec(value=0.0),
        boundaries=[
            _dirichlet("left", left),
            _dirichlet("bottom", ONE),
            _dirichlet("right", ZERO),
            _dirichlet("top", ZERO),
        ],
        nx=GRID_2D,
    )
    return BenchmarkCase(
        id="ex5",
        title="Slow oblique transport with interior and boundary layers",
        config=config,
        subcases=_subcases(SKEW_PAIRS),
        provenance="u = (0.15, 0.1); phi = 1 on the bottom and on the lower half of the left edge",
    )


def _example_6() -> BenchmarkCase:
    config = ProblemConfig(
        name="ex6",
        dimension=2,
        velocity=VelocitySpec(kind="angle", angle_deg=60.0),
        source=SourceSpec(value=1.0),
        boundaries=[_dirichlet(edge, ZERO) for edge in ("left", "right", "bottom", "top")],
        nx=GRID_2D,
    )
    return BenchmarkCase(
        id="ex6",
        title="Unit source with homogeneous boundaries, physical parameters",
        config=config,
        subcases=_subcases([(1e4, 1.0), (10.0, 1e4), (1e6, 1e-2)]),
        provenance="u = (1/2, sqrt(3)/2), F = 1; D = 1e-4 m^2/s with U and B back-solved from (Pe, Da)",
        diffusion_coefficient=1e-4,
        characteristic_length=1.0,
    )


_BUILDERS = [_example_1, _example_2, _example_3, _example_4, _example_5, _example_6]


def catalog() -> List[BenchmarkCase]:
    return [build() for build in _BUILDERS]


def catalog_by_id() -> Dict[str, BenchmarkCase]:
    return {case.id: case for case in catalog()}


def get_case(case_id: str) -> BenchmarkCase:
    cases = catalog_by_id()
    if case_id not in cases:
        logger.error(f"Unknown benchmark id: {case_id}")
        raise InvalidArgumentError(f"unknown benchmark '{case_id}', expected one of {sorted(cases)}")
    return cases[case_id]


def get_subcase(case: BenchmarkCase, label: str = None) -> SubCase:
    """Sub-case by label; the last (most convection-dominated) one by default."""
    if label is None:
        return case.subcases[-1]
    for subcase in case.subcases:
        if subcase.label == label:
            return subcase
    raise InvalidArgumentError(f"{case.id} has no sub-case '{label}'")
