import math

import numpy as np
import pytest

from mmad.analysis.oracles import kr_bar_high_precision
from mmad.core.errors import InvalidArgumentError
from mmad.fem.stabilization import (
    build_tensors,
    build_tensors_mzad,
    gamma,
    kc_bar,
    kr_bar,
    reaction_beta,
)


def test_gamma_at_one():
    assert gamma(1.0) == pytest.approx(0.313035, abs=1e-6)


@pytest.mark.parametrize("alpha", [1e-4, 5e-3, 9.99e-3, 1.01e-2])
def test_gamma_series_matches_closed_form(alpha):
    # coth(a) = 1 + 2 / expm1(2a)
    closed = 1.0 + 2.0 / math.expm1(2.0 * alpha) - 1.0 / alpha
    assert gamma(alpha) == pytest.approx(closed, rel=1e-6)


def test_gamma_limits():
    assert gamma(0.0) == 0.0
    assert gamma(1e9) == pytest.approx(1.0)


def test_gamma_rejects_negative():
    with pytest.raises(InvalidArgumentError):
        gamma(-1.0)


def test_kc_bar_sums_directions():
    expected = 0.6 * 0.1 * gamma(5.0) / 2.0 + 0.8 * 0.05 * gamma(2.5) / 2.0
    assert kc_bar([0.6, -0.8], [0.1, 0.05], 100.0) == pytest.approx(expected)


def test_kc_bar_one_dimensional_value():
    # alpha = 50
    assert kc_bar([1.0], [0.01], 1e4) == pytest.approx(4.9e-3, rel=1e-12)


def test_kc_bar_diagonal_flow_value():
    half = np.sqrt(2.0) / 2.0
    assert gamma(12.5) == pytest.approx(0.92, abs=1e-9)
    assert kc_bar([half, half], [0.025, 0.025], 1e3) == pytest.approx(1.6264e-2, abs=1e-6)


def test_kc_bar_scales_with_speed():
    u = np.array([0.3, -0.7])
    h = [0.05, 0.025]
    assert kc_bar(2.0 * u, h, 1e3) == pytest.approx(2.0 * kc_bar(u, h, 1e3))
    assert kc_bar([0.0, 0.0], h, 1e3) == 0.0


def test_kr_bar_reference_value():
    assert kr_bar(1e3, 10.0, 0.025) == pytest.approx(6.5056e-4, abs=1e-8)


def test_kr_bar_small_beta_branch():
    # Pe = 1, Da = 0.01, h = 0.02 gives beta = 1e-3
    assert reaction_beta(1.0, 0.01, 0.02) == pytest.approx(1e-3)
    series = kr_bar(1.0, 0.01, 0.02)
    assert series == pytest.approx(kr_bar_high_precision(1.0, 0.01, 0.02), rel=1e-10)


def test_kr_bar_large_beta_asymptote():
    # Pe = 1e3, Da = 5760, h = 0.025 gives beta = 30
    assert reaction_beta(1e3, 5760.0, 0.025) == pytest.approx(30.0)
    assert kr_bar(1e3, 5760.0, 0.025) == pytest.approx(5760.0 * 0.025 ** 2 / 6.0 - 1e-3, rel=1e-6)


def test_kr_bar_reaction_dominated_value():
    # beta = 12.5
    assert reaction_beta(1.0, 1e6, 0.025) == pytest.approx(12.5)
    assert kr_bar(1.0, 1e6, 0.025) == pytest.approx(103.167, abs=1e-3)


def test_kr_bar_grows_with_damkohler():
    values = [kr_bar(10.0, da, 0.025) for da in np.logspace(-4, 8, 60)]
    assert np.all(np.diff(values) >= 0.0)


def test_kr_bar_without_reaction():
    assert kr_bar(1e3, 0.0, 0.025) == 0.0


def test_kr_bar_branches_agree_at_switch():
    h = 0.02
    below = kr_bar(1.0, (2 * 0.0099999 / h) ** 2, h)
    above = kr_bar(1.0, (2 * 0.0100001 / h) ** 2, h)
    assert below == pytest.approx(above, rel=1e-4)


@pytest.mark.parametrize("pe, da", [(0.0, 1.0), (-1.0, 1.0), (1.0, -1.0)])
def test_kr_bar_invalid(pe, da):
    with pytest.raises(InvalidArgumentError):
        kr_bar(pe, da, 0.1)


def test_tensors_follow_the_flow_direction():
    tensors = build_tensors([3.0, 4.0], [0.05, 0.05], 1e3, 10.0)
    u_hat = np.array([0.6, 0.8])
    assert tensors.kc == pytest.approx(kc_bar([3.0, 4.0], [0.05, 0.05], 1e3))
    assert np.allclose(tensors.H, tensors.kc * np.outer(u_hat, u_hat) + tensors.kr * np.eye(2))
    assert np.allclose(tensors.K, np.eye(2))
    assert tensors.A_coeff == 1.0
    assert np.allclose(tensors.H, tensors.H.T)
    assert tensors.eigenvalues().min() == pytest.approx(tensors.kr)


def test_flow_direction_is_an_eigenvector():
    tensors = build_tensors([3.0, 4.0], [0.05, 0.05], 1e3, 10.0)
    u_hat = np.array([0.6, 0.8])
    normal = np.array([-0.8, 0.6])
    assert np.allclose(tensors.H @ u_hat, (tensors.kc + tensors.kr) * u_hat, rtol=0.0, atol=1e-12)
    assert np.allclose(tensors.H @ normal, tensors.kr * normal, rtol=0.0, atol=1e-12)


def test_tensors_for_zero_velocity():
    tensors = build_tensors([0.0, 0.0], [0.1, 0.1], 10.0, 1.0)
    assert tensors.kc == 0.0
    assert np.allclose(tensors.H, kr_bar(10.0, 1.0, 0.1) * np.eye(2))


def test_reaction_only_tensor():
    tensors = build_tensors([0.0, 0.0], [0.025, 0.025], 1.0, 1e6)
    assert np.allclose(tensors.H, 103.167 * np.eye(2), atol=1e-3)


def test_reaction_uses_smallest_element_size():
    tensors = build_tensors([1.0, 0.0], [0.1, 0.02], 10.0, 100.0)
    assert tensors.kr == pytest.approx(kr_bar(10.0, 100.0, 0.02))


def test_mzad_tensors():
    tensors = build_tensors_mzad(0.25, 2)
    assert np.allclose(tensors.H, 0.25 * np.eye(2))
    assert np.allclose(tensors.K, 0.0)
    assert tensors.A_coeff == 0.0


@pytest.mark.parametrize("p", [0.0, -1.0])
def test_mzad_requires_positive_parameter(p):
    with pytest.raises(InvalidArgumentError):
        build_tensors_mzad(p, 2)
