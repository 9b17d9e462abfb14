"""
Closed-form reference solutions.
"""
import math
from decimal import Decimal, localcontext
from typing import Callable, Union

import numpy as np

from mmad.core.errors import InvalidArgumentError
from mmad.schemas.schemas import ManufacturedSpec, VelocitySpec

ArrayLike = Union[float, np.ndarray]


def exact_1d(pe: float, da: float, u: float, f: float, x: ArrayLike) -> ArrayLike:
    """
    Solution of Da phi + u phi' - phi'' / Pe = F on [0, 1] with
    phi(0) = phi(1) = 0.

    The homogeneous modes are written as exp(l1 (x - 1)) and exp(l2 x) with
    l1 >= 0 >= l2, so no exponential ever exceeds one.
    """
    if not pe > 0.0:
        raise InvalidArgumentError(f"Pe must be positive, got {pe}")
    if da < 0.0:
        raise InvalidArgumentError(f"Da must be nonnegative, got {da}")
    if u == 0.0 and da == 0.0:
        raise InvalidArgumentError("pure diffusion without reaction or convection is not covered (u = 0, Da = 0)")

    x_arr = np.asarray(x, dtype=float)
    disc = math.sqrt((pe * u) ** 2 + 4.0 * pe * da)
    if u >= 0.0:
        l1 = 0.5 * (pe * u + disc)
        l2 = -pe * da / l1
    else:
        l2 = 0.5 * (pe * u - disc)
        l1 = -pe * da / l2

    if da > 0.0:
        particular = lambda s: np.full_like(s, f / da, dtype=float)
    else:
        particular = lambda s: f * s / u
    p0 = float(particular(np.array(0.0)))
    p1 = float(particular(np.array(1.0)))

    e1 = math.exp(-l1)
    e2 = math.exp(l2)
    det = e1 * e2 - 1.0
    a = (p1 - p0 * e2) / det
    b = (p0 - p1 * e1) / det
    result = particular(x_arr) + a * np.exp(l1 * (x_arr - 1.0)) + b * np.exp(l2 * x_arr)
    return float(result) if np.ndim(x) == 0 else result


class ManufacturedSolution:
    """
    Smooth exact field with analytic gradient and Laplacian. The reference
    micromorphic field is g = 0 (the limit of vanishing stabilization).
    """

    def __init__(self, spec: ManufacturedSpec, dimension: int):
        self.spec = spec
        self.dimension = dimension
        self.coefficients = np.zeros(dimension + 1)
        given = np.asarray(spec.coefficients, dtype=float)[:dimension + 1]
        self.coefficients[:given.size] = given

    def _points(self, points) -> np.ndarray:
        return np.asarray(points, dtype=float).reshape(-1, self.dimension)

    def value(self, points) -> np.ndarray:
        x = self._points(points)
        if self.spec.kind == "sine":
            return np.prod(np.sin(np.pi * x), axis=1)
        return self.coefficients[0] + x @ self.coefficients[1:]

    def gradient(self, points) -> np.ndarray:
        x = self._points(points)
        if self.spec.kind == "linear":
            return np.tile(self.coefficients[1:], (x.shape[0], 1))
        sines = np.sin(np.pi * x)
        grad = np.empty_like(x)
        for i in range(self.dimension):
            others = np.prod(np.delete(sines, i, axis=1), axis=1) if self.dimension > 1 else 1.0
            grad[:, i] = np.pi * np.cos(np.pi * x[:, i]) * others
        return grad

    def laplacian(self, points) -> np.ndarray:
        if self.spec.kind == "linear":
            return np.zeros(self._points(points).shape[0])
        return -self.dimension * np.pi ** 2 * self.value(points)

    def g(self, points) -> np.ndarray:
        return np.zeros((self._points(points).shape[0], self.dimension))

    def g_gradient(self, points) -> np.ndarray:
        return np.zeros((self._points(points).shape[0], self.dimension, self.dimension))

    def source(self, pe: float, da: float, velocity: VelocitySpec) -> Callable[[np.ndarray], np.ndarray]:
        """F = Da phi + u . grad phi - lap phi / Pe."""
        def evaluate(points: np.ndarray) -> np.ndarray:
            x = self._points(points)
            convection = np.einsum("pi,pi->p", velocity.evaluate(x), self.gradient(x))
            return da * self.value(x) + convection - self.laplacian(x) / pe
        return evaluate


def kr_bar_high_precision(pe: float, da: float, h: float, digits: int = 60) -> float:
    """
    Reaction parameter from the unexpanded formula in decimal arithmetic,
    free of the cancellation that affects it in double precision at small beta.
    """
    with localcontext() as ctx:
        ctx.prec = digits
        beta = Decimal(h) / 2 * (Decimal(da) * Decimal(pe)).sqrt()
        if beta == 0:
            return 0.0
        b2 = beta * beta
        sinh = (beta.exp() - (-beta).exp()) / 2
        value = (Decimal(2) / 3 * b2 + b2 / (sinh * sinh) - 1) / Decimal(pe)
        return float(value)
