from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
import scipy.sparse as sp

from mmad.schemas.schemas import Method, ProblemConfig


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.ascontiguousarray(array)
    array.flags.writeable = False
    return array


@dataclass(frozen=True)
class StructuredMesh:
    """
    Uniform tensor-product mesh of the unit interval or unit square.

    Node (i, j) has id ``j * (nx + 1) + i`` and sits at ``(i * hx, j * hy)``.
    Quads are listed counterclockwise starting at their lower-left node.
    """
    dimension: int
    node_coords: np.ndarray
    elements: np.ndarray
    nx: int
    ny: int
    h_dir: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "node_coords", _frozen(self.node_coords))
        object.__setattr__(self, "elements", _frozen(self.elements))

    @property
    def n_nodes(self) -> int:
        return self.node_coords.shape[0]

    @property
    def n_elements(self) -> int:
        return self.elements.shape[0]

    @property
    def nodes_per_element(self) -> int:
        return self.elements.shape[1]

    @property
    def shape(self) -> Tuple[int, ...]:
        """Number of nodes per direction."""
        if self.dimension == 1:
            return (self.nx + 1,)
        return (self.nx + 1, self.ny + 1)

    def node_index(self, i: int, j: int = 0) -> int:
        return j * (self.nx + 1) + i

    def element_centroids(self) -> np.ndarray:
        return self.node_coords[self.elements].mean(axis=1)

    def grid_indices(self) -> np.ndarray:
        """(i, j) index pair of every node (j = 0 in 1D)."""
        ids = np.arange(self.n_nodes)
        return np.column_stack([ids % (self.nx + 1), ids // (self.nx + 1)])

    def boundary_nodes(self) -> np.ndarray:
        ij = self.grid_indices()
        on_boundary = (ij[:, 0] == 0) | (ij[:, 0] == self.nx)
        if self.dimension == 2:
            on_boundary |= (ij[:, 1] == 0) | (ij[:, 1] == self.ny)
        return np.flatnonzero(on_boundary)

    def interior_nodes(self) -> np.ndarray:
        mask = np.ones(self.n_nodes, dtype=bool)
        mask[self.boundary_nodes()] = False
        return np.flatnonzero(mask)


class RegionKind(str, Enum):
    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"
    INTERIOR = "interior"


@dataclass(frozen=True)
class BoundaryRegion:
    """
    Tagged node set with its value profile.

    ``facets`` lists the boundary entities the region covers: node pairs
    (edges) in 2D, single nodes in 1D. Neumann terms integrate over them.
    """
    kind: RegionKind
    node_ids: np.ndarray
    value_profile: Callable[[np.ndarray], np.ndarray]
    facets: np.ndarray
    name: str = ""

    def values(self, mesh: StructuredMesh) -> np.ndarray:
        return np.asarray(self.value_profile(mesh.node_coords[self.node_ids]), dtype=float)


@dataclass(frozen=True)
class QuadratureRule:
    points: np.ndarray
    weights: np.ndarray

    @property
    def dimension(self) -> int:
        return self.points.shape[1]

    @property
    def n_points(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True)
class ShapeEval:
    N: np.ndarray
    gradN: np.ndarray
    detJ: float


@dataclass(frozen=True)
class StabilizationTensors:
    """
    Element tensors of the micromorphic terms: coupling H, mass K and the
    scalar coefficient of the gradient stiffness (A = A_coeff times identity).
    """
    kc: float
    kr: float
    H: np.ndarray
    K: np.ndarray
    A_coeff: float

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.H)


@dataclass(frozen=True)
class DofMap:
    """
    Node-interleaved numbering: dof ``node * dofs_per_node + c`` with c = 0
    for phi and c = 1..d for the components of g.
    """
    method: Method
    dimension: int
    n_nodes: int

    @property
    def dofs_per_node(self) -> int:
        if self.method == Method.GALERKIN:
            return 1
        return 1 + self.dimension

    @property
    def total_dofs(self) -> int:
        return self.n_nodes * self.dofs_per_node

    @property
    def has_g(self) -> bool:
        return self.dofs_per_node > 1

    def phi_dofs(self, nodes: Optional[np.ndarray] = None) -> np.ndarray:
        nodes = np.arange(self.n_nodes) if nodes is None else np.asarray(nodes, dtype=np.int64)
        return nodes * self.dofs_per_node

    def g_dofs(self, component: int, nodes: Optional[np.ndarray] = None) -> np.ndarray:
        if not self.has_g or not 0 <= component < self.dimension:
            raise IndexError(f"no g component {component} for method {self.method.value}")
        return self.phi_dofs(nodes) + 1 + component


@dataclass
class SparseSystem:
    matrix: sp.csr_matrix
    rhs: np.ndarray
    dofmap: DofMap
    mesh: StructuredMesh
    dirichlet_done: bool = False
    tensors: List[StabilizationTensors] = field(default_factory=list)
    constrained_dofs: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    timings: Dict[str, float] = field(default_factory=dict)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.matrix.shape


@dataclass
class SolveReport:
    solution: np.ndarray
    relative_residual: float
    statistics: Dict[str, float]
    wall_time: float
    residual_history: List[float] = field(default_factory=list)


@dataclass
class SolutionField:
    """
    Nodal phi and, for the two-field methods, nodal g (n_nodes x d).
    """
    phi: np.ndarray
    g: Optional[np.ndarray]
    config: ProblemConfig
    mesh: StructuredMesh
    dofmap: DofMap
    report: Optional[SolveReport] = None
    timings: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.phi.shape[0] != self.mesh.n_nodes:
            raise ValueError("phi length does not match the mesh node count")
        if self.g is not None and self.g.shape != (self.mesh.n_nodes, self.mesh.dimension):
            raise ValueError("g shape does not match the mesh")
        if self.dofmap.method == Method.GALERKIN and self.g is not None:
            raise ValueError("Galerkin solutions carry no g field")

    def as_vector(self) -> np.ndarray:
        """Pack into the interleaved dof vector of ``dofmap``."""
        vector = np.zeros(self.dofmap.total_dofs)
        vector[self.dofmap.phi_dofs()] = self.phi
        if self.g is not None:
            for k in range(self.mesh.dimension):
                vector[self.dofmap.g_dofs(k)] = self.g[:, k]
        return vector
