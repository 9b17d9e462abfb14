from enum import Enum
from typing import Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from mmad.core.errors import ConfigError

EDGES_1D = ("left", "right")
EDGES_2D = ("left", "right", "bottom", "top")


class Method(str, Enum):
    GALERKIN = "galerkin"
    MMAD = "mmad"
    MZAD = "mzad"


# Boundary profile schemas
class ProfileSpec(BaseModel):
    """
    Scalar function of position used for Dirichlet values and Neumann fluxes.

    constant: ``value``
    sine:     ``amplitude * sin(2*pi*frequency*x[axis])``
    step:     ``below`` where ``x[axis] <= threshold``, ``above`` elsewhere
    linear:   ``coefficients[0] + sum_i coefficients[i+1] * x[i]``
    """
    kind: Literal["constant", "sine", "step", "linear"] = "constant"
    value: float = 0.0
    amplitude: float = 1.0
    frequency: float = 1.0
    axis: int = Field(default=1, ge=0, le=1)
    threshold: float = 0.5
    below: float = 1.0
    above: float = 0.0
    coefficients: List[float] = Field(default_factory=list)

    @model_validator(mode="after")
    def validate_linear(self):
        if self.kind == "linear" and not self.coefficients:
            raise ValueError("linear profile needs coefficients [a0, a1, (a2)]")
        return self

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        axis = min(self.axis, points.shape[1] - 1)
        if self.kind == "constant":
            return np.full(points.shape[0], self.value)
        if self.kind == "sine":
            return self.amplitude * np.sin(2.0 * np.pi * self.frequency * points[:, axis])
        if self.kind == "step":
            return np.where(points[:, axis] <= self.threshold, self.below, self.above)
        coefficients = np.asarray(self.coefficients, dtype=float)
        slopes = coefficients[1:1 + points.shape[1]]
        return coefficients[0] + points[:, :slopes.size] @ slopes

    def value_range(self) -> Tuple[float, float]:
        """Range of the profile over the unit domain (exact for these kinds)."""
        if self.kind == "constant":
            return self.value, self.value
        if self.kind == "sine":
            return -abs(self.amplitude), abs(self.amplitude)
        if self.kind == "step":
            return min(self.below, self.above), max(self.below, self.above)
        coefficients = np.asarray(self.coefficients, dtype=float)
        corners = [coefficients[0] + sum(c for c in combo) for combo in _corner_sums(coefficients[1:])]
        return min(corners), max(corners)


def _corner_sums(slopes: np.ndarray):
    combos = [[]]
    for slope in slopes:
        combos = [c + [0.0] for c in combos] + [c + [slope] for c in combos]
    return combos


# Velocity schemas
class VelocitySpec(BaseModel):
    """
    Prescribed dimensionless velocity field.

    constant:   ``components``
    angle:      ``magnitude * (cos(angle_deg), sin(angle_deg))`` (2D)
    rotational: ``magnitude * (-(x2 - c2), x1 - c1)`` about ``center`` (2D)
    linear:     ``components + matrix @ x``
    """
    kind: Literal["constant", "angle", "rotational", "linear"] = "constant"
    components: List[float] = Field(default_factory=lambda: [1.0])
    magnitude: float = 1.0
    angle_deg: float = 0.0
    center: List[float] = Field(default_factory=lambda: [0.0, 0.0])
    matrix: List[List[float]] = Field(default_factory=list)

    @property
    def dimension(self) -> int:
        if self.kind in ("angle", "rotational"):
            return 2
        if self.kind == "linear" and self.matrix:
            return len(self.matrix)
        return len(self.components)

    @model_validator(mode="after")
    def validate_shape(self):
        if self.kind in ("constant", "linear") and len(self.components) not in (1, 2):
            raise ValueError("velocity components must have length 1 or 2")
        if self.kind == "linear":
            n = len(self.components)
            if len(self.matrix) != n or any(len(row) != n for row in self.matrix):
                raise ValueError("linear velocity matrix must be square and match components")
        return self

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        n = points.shape[0]
        if self.kind == "constant":
            return np.tile(np.asarray(self.components, dtype=float), (n, 1))
        if self.kind == "angle":
            theta = np.deg2rad(self.angle_deg)
            direction = self.magnitude * np.array([np.cos(theta), np.sin(theta)])
            return np.tile(direction, (n, 1))
        if self.kind == "rotational":
            shifted = points - np.asarray(self.center, dtype=float)
            return self.magnitude * np.column_stack([-shifted[:, 1], shifted[:, 0]])
        return np.asarray(self.components, dtype=float) + points @ np.asarray(self.matrix, dtype=float).T

    def divergence(self) -> float:
        """Divergence of the field (constant for every supported kind)."""
        if self.kind == "linear":
            return float(np.trace(np.asarray(self.matrix, dtype=float)))
        return 0.0


# Source schemas
class ManufacturedSpec(BaseModel):
    """
    sine:   ``prod_i sin(pi x_i)`` (vanishes on the boundary of the unit domain)
    linear: ``coefficients[0] + sum_i coefficients[i+1] x_i``
    """
    kind: Literal["sine", "linear"] = "sine"
    coefficients: List[float] = Field(default_factory=lambda: [0.0, 1.0, 1.0])


class SourceSpec(BaseModel):
    kind: Literal["constant", "manufactured"] = "constant"
    value: float = 0.0
    solution: Optional[ManufacturedSpec] = None

    @model_validator(mode="after")
    def validate_solution(self):
        if self.kind == "manufactured" and self.solution is None:
            self.solution = ManufacturedSpec()
        return self


class BoundarySpec(BaseModel):
    kind: Literal["dirichlet", "neumann", "interior"] = "dirichlet"
    edge: Optional[str] = None
    segment: Optional[Tuple[Tuple[float, float], Tuple[float, float]]] = None
    profile: ProfileSpec = Field(default_factory=ProfileSpec)
    tolerance: float = Field(default=1e-12, ge=0.0)

    @model_validator(mode="after")
    def validate_region(self):
        if (self.edge is None) == (self.segment is None):
            raise ValueError("boundary spec needs exactly one of edge or segment")
        if self.edge is not None and self.edge not in EDGES_2D:
            raise ValueError(f"edge must be one of {list(EDGES_2D)}")
        if self.kind == "interior" and self.segment is None:
            raise ValueError("interior constraints are defined by a segment")
        return self


# Problem schema
class ProblemConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str = "custom"
    dimension: Literal[1, 2] = 1
    pe: float = Field(default=1.0, gt=0.0)
    da: float = Field(default=0.0, ge=0.0)
    velocity: VelocitySpec = Field(default_factory=VelocitySpec)
    source: SourceSpec = Field(default_factory=SourceSpec)
    boundaries: List[BoundarySpec] = Field(default_factory=list)
    nx: int = Field(default=100, ge=1)
    ny: Optional[int] = Field(default=None, ge=1)
    method: Method = Method.MMAD
    mzad_p: Optional[float] = Field(default=None, gt=0.0)
    stabilization_h: Optional[List[float]] = None
    tol: float = Field(default=1e-10, gt=0.0)

    @field_validator("pe", "da", "tol")
    @classmethod
    def validate_finite(cls, v):
        if not np.isfinite(v):
            raise ValueError("must be finite")
        return v

    @model_validator(mode="after")
    def validate_consistency(self):
        if self.velocity.dimension != self.dimension:
            raise ValueError(
                f"velocity has dimension {self.velocity.dimension}, problem has {self.dimension}"
            )
        if self.dimension == 2 and self.ny is None:
            self.ny = self.nx
        if self.dimension == 1:
            self.ny = None
        valid_edges = EDGES_1D if self.dimension == 1 else EDGES_2D
        for spec in self.boundaries:
            if spec.edge is not None and spec.edge not in valid_edges:
                raise ValueError(f"edge '{spec.edge}' does not exist in {self.dimension}D")
            if spec.segment is not None and self.dimension == 1:
                raise ValueError("segments are only supported in 2D")
        if self.stabilization_h is not None:
            if len(self.stabilization_h) != self.dimension or min(self.stabilization_h) <= 0:
                raise ValueError("stabilization_h needs one positive size per direction")
        return self

    def with_overrides(self, **overrides) -> "ProblemConfig":
        """Merge overrides into a copy and re-validate it."""
        data = self.model_dump()
        overrides = {key: value for key, value in overrides.items() if value is not None}
        if "nx" in overrides and "ny" not in overrides:
            data["ny"] = None
        data.update(overrides)
        return load_config(data)


def load_config(data: Dict) -> ProblemConfig:
    """Validate raw data into a ProblemConfig, raising ConfigError on failure."""
    try:
        return ProblemConfig.model_validate(data)
    except ValidationError as e:
        messages = "; ".join(
            f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors()
        )
        raise ConfigError(f"invalid configuration: {messages}") from e


# Cut schema
class CutSpec(BaseModel):
    kind: Literal["horizontal", "vertical", "diagonal", "anti_diagonal"] = "horizontal"
    position: float = Field(default=0.5, ge=0.0, le=1.0)
    samples: Optional[int] = Field(default=None, ge=2)
    interpolate: bool = False


# Benchmark schemas
class SubCase(BaseModel):
    label: str
    pe: float = Field(gt=0.0)
    da: float = Field(ge=0.0)


class BenchmarkCase(BaseModel):
    id: str
    title: str
    config: ProblemConfig
    subcases: List[SubCase]
    provenance: str
    diffusion_coefficient: Optional[float] = None
    characteristic_length: float = 1.0

    def subcase_config(self, subcase: SubCase, **overrides) -> ProblemConfig:
        return self.config.with_overrides(pe=subcase.pe, da=subcase.da, **overrides)

    def physical_parameters(self, subcase: SubCase) -> Dict[str, float]:
        """
        Back-solve velocity and reaction coefficient from (Pe, Da) for a given
        diffusion coefficient: U = Pe D / L, B = Da U / L.
        """
        if self.diffusion_coefficient is None:
            return {}
        length = self.characteristic_length
        velocity = subcase.pe * self.diffusion_coefficient / length
        return {
            "diffusion": self.diffusion_coefficient,
            "length": length,
            "velocity": velocity,
            "reaction": subcase.da * velocity / length,
        }


# Report schemas
class ErrorReport(BaseModel):
    l2_error: Optional[float] = None
    h1_semi_error: Optional[float] = None
    g_norm: Optional[float] = None
    combined_norm: Optional[float] = None
    max_overshoot: float = 0.0
    max_undershoot: float = 0.0
    total_variation: Optional[float] = None


class ComparisonRow(BaseModel):
    method: Method
    dofs: int
    dofs_per_node: int
    dof_ratio: float
    wall_time: float
    l2_error: Optional[float] = None
    h1_semi_error: Optional[float] = None
    max_overshoot: float = 0.0
    max_undershoot: float = 0.0
    total_variation: Optional[float] = None


class CheckResult(BaseModel):
    name: str
    passed: bool
    value: float
    threshold: float
    detail: str = ""


class OutputRecord(BaseModel):
    path: str
    sha256: str
    bytes: int


class RunManifest(BaseModel):
    command: str
    config: ProblemConfig
    versions: Dict[str, str] = Field(default_factory=dict)
    timings: Dict[str, float] = Field(default_factory=dict)
    outputs: List[OutputRecord] = Field(default_factory=list)


class SweepReport(BaseModel):
    method: Method
    levels: List[int]
    hs: List[float]
    l2_errors: List[float]
    h1_errors: List[float]
    combined_errors: List[Optional[float]]
    rate: float
    l2_rate: float
