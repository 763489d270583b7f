import math

import numpy as np
import pytest

from helmholtz_cubature.basis.de_rule import QuadratureRule, trapezoid_de
from helmholtz_cubature.basis.kernels import (
    ScaledPoint,
    big_f,
    freespace_integrand,
    halfspace_integrand,
    p_poly,
    phi_k_closed,
    phi_k_oracle,
    q_poly,
)
from helmholtz_cubature.basis.specfun import erfc
from helmholtz_cubature.utils.exception import ConfigError
from oracles import halfplane_potential, heat_kernel_2d, kernel_2d


def printed_p(M, rsq, t):
    s = 1.0 + t
    p1 = 1.0 / s
    p2 = (1.0 + 1.0 / s - rsq / s ** 2) / s
    p3 = p2 + (1.0 / s ** 2 - 2.0 * rsq / s ** 3 + rsq ** 2 / (2.0 * s ** 4)) / s
    return {1: p1, 2: p2, 3: p3}[M]


def printed_q(M, x1, x2, t, a):
    s = 1.0 + t
    lead = math.sqrt(t) / s ** 1.5
    if M == 1:
        return 0.0
    if M == 2:
        return -lead * (a + x2 / s)
    rsq = x1 * x1 + x2 * x2
    bracket = (4.0 * rsq - 2.0 * x2 * x2) / s ** 2 - 7.0 / s + 2.0 * a * a - 5.0
    return 0.25 * lead * (-2.0 * a * t / s + (a + x2 / s) * bracket)


def test_big_f_examples():
    assert float(big_f(1.0, 0.0, 0.7)) == pytest.approx(0.7 * math.sqrt(2.0), rel=1e-15)
    assert float(big_f(0.3, 0.9, 0.9 / 1.3)) == pytest.approx(0.0, abs=1e-15)
    assert float(big_f(0.25, 1.0, 0.5)) == pytest.approx(-0.6708203932499369, rel=1e-14)


@pytest.mark.parametrize("t", [0.0, -1.0])
def test_big_f_rejects_non_positive_t(t):
    with pytest.raises(ConfigError):
        big_f(t, 0.0, 0.0)


def test_p_poly_examples():
    t = np.array([0.0, 0.5, 3.0])
    np.testing.assert_allclose(p_poly(1, 2, 2.7, t), 1.0 / (1.0 + t), rtol=1e-15)
    assert float(p_poly(2, 2, 1.0, 1.0)) == pytest.approx(0.625, rel=1e-15)
    assert float(p_poly(3, 2, 0.0, 0.0)) == pytest.approx(3.0, rel=1e-15)


def test_q_poly_examples():
    assert float(q_poly(1, 2, 0.4, 0.3, 0.7, 0.2)) == 0.0
    assert float(q_poly(2, 2, 0.0, 0.25, 1.0, 0.5)) == pytest.approx(-0.625 / 2 ** 1.5, rel=1e-14)
    assert float(q_poly(3, 2, 0.0, 0.25, 1.0, 0.5)) == pytest.approx(-0.68505859375 / math.sqrt(2.0), rel=1e-13)


def test_q_poly_rejects_non_positive_t():
    with pytest.raises(ConfigError):
        q_poly(2, 2, 0.0, 0.1, 0.0, 0.3)


def test_general_sums_match_planar_closed_forms():
    rng = np.random.default_rng(2024)
    for _ in range(2000):
        x1, x2 = rng.uniform(-2.0, 2.0, size=2)
        t = rng.uniform(0.2, 5.0)
        a = rng.uniform(-2.0, 2.0)
        rsq = x1 * x1 + x2 * x2
        for M in (1, 2, 3):
            assert float(p_poly(M, 2, rsq, t)) == pytest.approx(printed_p(M, rsq, t), rel=1e-12, abs=1e-13)
            assert float(q_poly(M, 2, x1 * x1, x2, t, a)) == pytest.approx(
                printed_q(M, x1, x2, t, a), rel=1e-12, abs=1e-13
            )


def test_q_poly_where_the_terms_cancel():
    # 50-digit reference value
    x1, x2, t, a = -1.508254, -1.929011, 0.385519, 0.756668
    assert float(q_poly(3, 2, x1 * x1, x2, t, a)) == pytest.approx(-0.022516816035626823, rel=1e-12)


@pytest.mark.parametrize("t", [1e-12, 1e-8, 1e-4])
def test_q_poly_small_t(t):
    for M in (2, 3):
        assert float(q_poly(M, 2, 0.09, 0.25, t, 0.5)) == pytest.approx(printed_q(M, 0.3, 0.25, t, 0.5), rel=1e-11)


def test_phi_zero_closed_form():
    x, t, p = 0.4, 0.8, -0.3
    s = 1.0 + t
    expected = 0.5 * math.sqrt(math.pi) * math.sqrt(t / s) * math.exp(-x * x / s) * float(erfc(big_f(t, x, p)))
    assert float(phi_k_closed(0, x, t, p)) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("k", [0, 1, 2])
@pytest.mark.parametrize("t", [0.1, 1.0, 10.0])
@pytest.mark.parametrize("p", [-1.0, 0.0, 0.7])
@pytest.mark.parametrize("x", [-0.5, 0.0, 1.3])
def test_phi_closed_matches_oracle(k, t, p, x):
    closed = float(phi_k_closed(k, x, t, p))
    oracle = phi_k_oracle(k, x, t, p)
    assert closed == pytest.approx(oracle, rel=1e-10, abs=1e-13)


def test_phi_oracle_limits():
    assert phi_k_oracle(0, 0.0, 1.0, -12.0) == pytest.approx(math.sqrt(math.pi / 2.0), rel=1e-12)
    assert abs(phi_k_oracle(0, 0.0, 1.0, 12.0)) <= 1e-60
    for k in (1, 2):
        assert float(phi_k_closed(k, 0.0, 1.0, -12.0)) == pytest.approx(phi_k_oracle(k, 0.0, 1.0, -12.0), abs=1e-11)


def test_halfspace_integrand_trivial_case():
    value = halfspace_integrand(1, 2, np.zeros((1, 2)), 1.0, 0.0, 0.0)
    assert float(value[0]) == pytest.approx(0.5, rel=1e-15)


@pytest.mark.parametrize("M", [1, 2, 3])
@pytest.mark.parametrize("t", [1e-6, 0.1, 1.0, 10.0, 1e3])
def test_deep_offset_doubles_free_space(M, t):
    xs = np.array([[0.3, -0.4], [1.1, 0.8], [-0.6, 1.2]])
    inner = halfspace_integrand(M, 2, xs, t, -6.0, 0.05)
    free = freespace_integrand(M, 2, xs, t, 0.05)
    np.testing.assert_allclose(inner, 2.0 * free, rtol=0.0, atol=1e-14)


@pytest.mark.parametrize("M", [1, 2, 3])
def test_far_offset_vanishes(M):
    xs = np.array([[0.3, -0.4], [1.1, 0.8]])
    for t in (1e-6, 0.1, 1.0, 10.0, 1e3):
        assert np.all(np.abs(halfspace_integrand(M, 2, xs, t, 12.0, 0.05)) <= 1e-50)


def test_halfspace_smoke_in_other_dimensions():
    for n in (1, 3):
        xs = np.full((2, n), 0.2)
        for M in (1, 2, 3):
            for t in (0.01, 1.0, 50.0):
                inner = halfspace_integrand(M, n, xs, t, -7.0, 0.1)
                np.testing.assert_allclose(inner, 2.0 * freespace_integrand(M, n, xs, t, 0.1), atol=1e-14)
                assert np.all(np.isfinite(halfspace_integrand(M, n, xs, t, 0.1, 0.1)))


def test_freespace_integrand_examples():
    origin = np.zeros((1, 2))
    assert float(freespace_integrand(1, 2, origin, 0.0, 0.0)[0]) == 1.0
    for t in (0.5, 2.0, 40.0):
        assert float(freespace_integrand(1, 2, origin, t, 0.8)[0]) == pytest.approx(
            math.exp(-0.2 * t) / (1.0 + t), rel=1e-15
        )
    assert float(freespace_integrand(1, 2, origin, 1e4, 1.0)[0]) == 0.0


def test_scaled_point_accessors():
    point = ScaledPoint(np.array([[3.0, 4.0]]))
    assert float(point.normsq[0]) == 25.0
    assert float(point.xprime_normsq[0]) == 9.0
    assert float(point.x_n[0]) == 4.0
    with pytest.raises(ConfigError):
        ScaledPoint(np.array([np.nan, 0.0]))


@pytest.mark.parametrize("z", [0.05, 0.7, 2.5])
def test_heat_kernel_representation_matches_bessel(z):
    assert heat_kernel_2d(z, 1.0) == pytest.approx(kernel_2d(z, 1.0), rel=1e-10)


@pytest.mark.parametrize("a", [-0.5, 0.0, 0.5])
@pytest.mark.parametrize("x", [(0.3, -0.2), (-0.4, 0.6)])
def test_halfspace_integral_matches_planar_integral(a, x, fine_rule):
    lam = 1.0
    rule = fine_rule.trimmed(0.25 * lam * lam)
    xs = np.array([x])
    integral = trapezoid_de(lambda t: halfspace_integrand(1, 2, xs, t, a, lam * lam), rule)
    value = float(np.asarray(integral)[0]) / (8.0 * math.pi)
    assert value == pytest.approx(halfplane_potential(1, x, a, lam), abs=1e-8)
