import math

import numpy as np
import pytest

from helmholtz_cubature.basis.de_rule import QuadratureRule, de_transform, log_phi, trapezoid_de
from helmholtz_cubature.utils.exception import ConfigError, NumericalError
from oracles import e1_scaled


def test_transform_at_zero():
    phi, dphi = de_transform(0.0, 4.0, 2.0)
    expected = math.exp(-8.0 + 4.0 * math.exp(-2.0))
    assert float(phi) == pytest.approx(expected, rel=1e-14)
    assert float(dphi) == pytest.approx(expected * 8.0 * 2.0 * (1.0 + math.exp(-2.0)), rel=1e-14)


def test_transform_is_increasing():
    u = np.linspace(-1.5, 1.5, 301)
    phi, dphi = de_transform(u, 4.0, 2.0)
    assert np.all(dphi > 0.0)
    assert np.all(np.diff(phi) > 0.0)
    assert float(de_transform(-3.0, 4.0, 2.0)[0]) < 1e-70


def test_transform_derivative_by_finite_differences():
    step = 1e-6
    for u in (-0.6, -0.1, 0.3, 0.9):
        hi = float(de_transform(u + step, 4.0, 2.0)[0])
        lo = float(de_transform(u - step, 4.0, 2.0)[0])
        assert (hi - lo) / (2 * step) == pytest.approx(float(de_transform(u, 4.0, 2.0)[1]), rel=1e-7)


def test_transform_saturation_is_reported():
    with pytest.raises(NumericalError):
        de_transform(5.0, 4.0, 2.0)


def test_presets_cover_the_half_line(coarse_rule, fine_rule):
    for rule in (coarse_rule, fine_rule):
        t, w = rule.nodes()
        assert t[0] <= 1e-10
        assert t[-1] >= 1e8
        assert np.all(w > 0.0)
    assert coarse_rule.size == 181
    assert fine_rule.size == 361


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(tau=0.0),
        dict(alpha=-1.0),
        dict(s_min=5),
        dict(s_max=-3),
        dict(s_min=-1),
        dict(s_max=10),
        dict(s_min=-80.5),
    ],
)
def test_rule_validation(kwargs):
    with pytest.raises(ConfigError):
        QuadratureRule(**kwargs)


def test_unknown_preset():
    with pytest.raises(ConfigError):
        QuadratureRule.preset("medium")


def test_zero_integrand(coarse_rule):
    assert trapezoid_de(lambda t: 0.0, coarse_rule) == 0.0


def test_exponential_integral(coarse_rule, fine_rule):
    assert trapezoid_de(lambda t: math.exp(-t), fine_rule) == pytest.approx(1.0, abs=1e-12)
    # the coarse rule starts at t = 3.1e-11, which bounds its accuracy
    assert trapezoid_de(lambda t: math.exp(-t), coarse_rule) == pytest.approx(1.0, abs=1e-10)


def test_exponential_integral_identity(coarse_rule, fine_rule):
    expected = e1_scaled(1.0)
    assert expected == pytest.approx(0.596347362323194, rel=1e-14)
    assert trapezoid_de(lambda t: math.exp(-t) / (1.0 + t), fine_rule) == pytest.approx(expected, abs=1e-12)
    assert trapezoid_de(lambda t: math.exp(-t) / (1.0 + t), coarse_rule) == pytest.approx(expected, abs=1e-10)


def test_vector_integrand_matches_scalar_runs(fine_rule):
    rates = np.array([0.5, 1.0, 3.0])
    vector = trapezoid_de(lambda t: np.exp(-rates * t), fine_rule)
    for rate, value in zip(rates, vector):
        scalar = trapezoid_de(lambda t: math.exp(-rate * t), fine_rule)
        assert value == pytest.approx(scalar, rel=1e-15)
        assert value == pytest.approx(1.0 / rate, rel=1e-11)


def test_non_finite_integrand_names_the_abscissa(coarse_rule):
    with pytest.raises(NumericalError, match="s=-80"):
        trapezoid_de(lambda t: float("nan"), coarse_rule)


def test_trimming_drops_underflowed_nodes(fine_rule):
    trimmed = fine_rule.trimmed(1.0)
    assert trimmed.s_max < fine_rule.s_max
    assert trimmed.trimmed_from == fine_rule.s_max
    assert float(np.exp(log_phi(trimmed.s_max * trimmed.tau, 4.0, 2.0))) > 745.0
    full = trapezoid_de(lambda t: math.exp(-t), fine_rule)
    assert trapezoid_de(lambda t: math.exp(-t), trimmed) == full


def test_trimming_without_decay_is_identity(fine_rule):
    assert fine_rule.trimmed(0.0) is fine_rule
    assert fine_rule.trimmed(1e-20) == fine_rule


def test_refined_rule_halves_the_step(coarse_rule):
    refined = coarse_rule.refined()
    assert refined.tau == pytest.approx(0.005)
    assert (refined.s_min, refined.s_max) == (-160, 200)
