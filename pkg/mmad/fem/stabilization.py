"""
Micromorphic tensors H, K, A and the upwind/reaction parameters that set them.
"""
import math
from typing import Sequence

import numpy as np

from mmad.core.errors import InvalidArgumentError
from mmad.models.models import StabilizationTensors

SERIES_SWITCH = 1e-2
SINH_UNDERFLOW = 30.0
ZERO_VELOCITY = 1e-14


def _check_pe(pe: float) -> None:
    if not pe > 0.0:
        raise InvalidArgumentError(f"Pe must be positive, got {pe}")


def gamma(alpha: float) -> float:
    """
    Optimal 1D upwind factor coth(alpha) - 1/alpha, with its odd Taylor
    series near zero.
    """
    if alpha < 0.0 or math.isnan(alpha):
        raise InvalidArgumentError(f"alpha must be nonnegative, got {alpha}")
    if alpha < SERIES_SWITCH:
        a2 = alpha * alpha
        return alpha * (1.0 / 3.0 - a2 * (1.0 / 45.0 - a2 * (2.0 / 945.0 - a2 / 4725.0)))
    return 1.0 / math.tanh(alpha) - 1.0 / alpha


def kc_bar(u: Sequence[float], h_dir: Sequence[float], pe: float) -> float:
    """Convective parameter: sum_i |u_i| h_i gamma(Pe h_i / 2) / 2."""
    _check_pe(pe)
    return float(sum(abs(ui) * hi * gamma(pe * hi / 2.0) / 2.0 for ui, hi in zip(u, h_dir)))


def reaction_beta(pe: float, da: float, h: float) -> float:
    """beta = (h / 2) sqrt(Da Pe), the dimensionless form of sqrt(B h^2 / 4D)."""
    return 0.5 * h * math.sqrt(da * pe)


def kr_bar(pe: float, da: float, h: float) -> float:
    """
    Reaction parameter (1/Pe) [2/3 beta^2 + beta^2 / sinh^2(beta) - 1].
    """
    _check_pe(pe)
    if da < 0.0:
        raise InvalidArgumentError(f"Da must be nonnegative, got {da}")
    beta = reaction_beta(pe, da, h)
    b2 = beta * beta
    if beta < SERIES_SWITCH:
        return b2 * (1.0 / 3.0 + b2 * (1.0 / 15.0 - b2 * 2.0 / 189.0)) / pe
    ratio = 0.0 if beta > SINH_UNDERFLOW else b2 / math.sinh(beta) ** 2
    return (2.0 / 3.0 * b2 + ratio - 1.0) / pe


def build_tensors(u: Sequence[float], h_dir: Sequence[float], pe: float, da: float) -> StabilizationTensors:
    """
    H = kc u_hat (x) u_hat + kr I, K = I, A = identity (coefficient 1).
    The reaction parameter uses the smallest element size.
    """
    u = np.asarray(u, dtype=float).reshape(-1)
    d = u.size
    speed = float(np.linalg.norm(u))
    kr = kr_bar(pe, da, min(h_dir))
    if speed < ZERO_VELOCITY:
        kc = 0.0
        H = kr * np.eye(d)
    else:
        kc = kc_bar(u, h_dir, pe)
        u_hat = u / speed
        H = kc * np.outer(u_hat, u_hat) + kr * np.eye(d)
    return StabilizationTensors(kc=kc, kr=kr, H=H, K=np.eye(d), A_coeff=1.0)


def build_tensors_mzad(p: float, dimension: int) -> StabilizationTensors:
    """Degenerate choice A = 0, K = 0, H = p I."""
    if not p > 0.0:
        raise InvalidArgumentError(f"MZAD parameter p must be positive, got {p}")
    return StabilizationTensors(
        kc=0.0, kr=0.0, H=p * np.eye(dimension), K=np.zeros((dimension, dimension)), A_coeff=0.0
    )
