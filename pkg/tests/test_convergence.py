import math

import numpy as np
import pytest

from helmholtz_cubature.params import RunParams
from helmholtz_cubature.pipeline.convergence import convergence_study, point_label
from helmholtz_cubature.pipeline.densities import density_f, density_oscill
from helmholtz_cubature.utils.exception import ConfigError


def test_point_label():
    assert point_label((0.5, 0.0)) == "(0.5, 0)"
    assert point_label(np.array([-0.25, 1.0])) == "(-0.25, 1)"


def test_off_grid_point_is_rejected(circle, small_params, coarse_rule):
    density = density_f(circle, small_params.lambda2)
    with pytest.raises(ConfigError, match=r"\(0.3, 0\).*h=0.25"):
        convergence_study(circle, density, [(0.3, 0.0)], [0.25], small_params, coarse_rule)


def test_exact_reference_needs_exact_potential(circle, small_params, coarse_rule):
    with pytest.raises(ConfigError):
        convergence_study(circle, density_oscill(1.0), [(0.0, 0.0)], [0.25], small_params, coarse_rule)


def test_unknown_reference_and_empty_steps(circle, small_params, coarse_rule):
    density = density_f(circle, 1.0)
    with pytest.raises(ConfigError):
        convergence_study(circle, density, [(0.0, 0.0)], [0.25], small_params, coarse_rule, reference="best")
    with pytest.raises(ConfigError):
        convergence_study(circle, density, [(0.0, 0.0)], [], small_params, coarse_rule)


def test_single_step_has_no_rates(circle, small_params, coarse_rule):
    density = density_f(circle, small_params.lambda2)
    df = convergence_study(circle, density, [(0.0, 0.0), (0.5, 0.0)], [0.25], small_params, coarse_rule)
    assert list(df.columns) == ["h_inv", "point", "value", "error", "rate"]
    assert len(df) == 2
    assert df["rate"].isna().all()
    assert (df["error"] > 0).all()


def test_levels_are_ordered_coarse_to_fine(circle, small_params, coarse_rule):
    density = density_f(circle, small_params.lambda2)
    df = convergence_study(circle, density, [(0.0, 0.0)], [0.125, 0.25], small_params, coarse_rule)
    assert df["h_inv"].tolist() == [4.0, 8.0]
    assert math.isnan(df["rate"].iloc[0])
    expected = math.log(df["error"].iloc[0] / df["error"].iloc[1]) / math.log(2.0)
    assert df["rate"].iloc[1] == pytest.approx(expected, rel=1e-14)
    exact = math.sin(1.0)
    assert df["error"].iloc[1] == pytest.approx(abs(df["value"].iloc[1] - exact) / exact, rel=1e-14)


def test_finest_level_reference(circle, small_params, coarse_rule):
    density = density_oscill(small_params.lambda2)
    steps = [0.25, 0.125, 0.0625]
    df = convergence_study(circle, density, [(0.0, 0.0)], steps, small_params, coarse_rule, reference="finest")
    assert len(df) == 3
    finest = df["value"].iloc[-1]
    assert math.isnan(df["error"].iloc[-1])
    assert df["error"].iloc[0] == pytest.approx(abs(df["value"].iloc[0] - finest), rel=1e-14)
    assert math.isnan(df["rate"].iloc[0]) and math.isnan(df["rate"].iloc[-1])
    assert np.isfinite(df["rate"].iloc[1])


@pytest.mark.slow
def test_second_order_rates_for_gaussian_basis(circle, fine_rule):
    params = RunParams(h=2.0 ** -4, D=4.0, M=1, r=6.0, lambda2=1.0)
    density = density_f(circle, params.lambda2)
    steps = [2.0 ** -4, 2.0 ** -5, 2.0 ** -6]
    df = convergence_study(circle, density, [(0.5, 0.0)], steps, params, fine_rule)
    for rate in df["rate"].iloc[1:]:
        assert rate == pytest.approx(2.0, abs=0.1)
