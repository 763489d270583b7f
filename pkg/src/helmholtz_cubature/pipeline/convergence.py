"""
Error and observed-order tables over a sequence of grid steps.

Responsibilities:
- run the cubature at every step for a fixed set of grid points
- measure errors against the exact potential, or against the finest level
  when no exact potential exists
- report rate = log(e(h_prev)/e(h)) / log(h_prev/h) on every level but the coarsest
"""

import math
import sys

import numpy as np
import pandas as pd

from helmholtz_cubature.basis.de_rule import QuadratureRule
from helmholtz_cubature.params import RunParams
from helmholtz_cubature.pipeline.cubature import VolumePotential, grid_index
from helmholtz_cubature.pipeline.densities import Density
from helmholtz_cubature.pipeline.geometry import Domain
from helmholtz_cubature.utils.exception import ConfigError
from helmholtz_cubature.utils.logger import logger

REFERENCES = ("exact", "finest")


def point_label(x) -> str:
    return "(" + ", ".join(f"{float(v):g}" for v in x) + ")"


def _observed_rate(err_coarse, err_fine, h_coarse, h_fine):
    if err_coarse is None or err_fine is None or err_coarse <= 0 or err_fine <= 0:
        return np.nan
    return math.log(err_coarse / err_fine) / math.log(h_coarse / h_fine)


def convergence_study(domain: Domain, density: Density, points, h_list, params_base: RunParams,
                      rule: QuadratureRule, reference: str = "exact", threads: int = 1) -> pd.DataFrame:
    """
    Columns h_inv, point, value, error, rate; one row per (step, point), coarsest step first.

    With reference="exact" the error is relative to the exact potential (absolute where
    it vanishes). With reference="finest" the finest step's values stand in for the
    exact ones and the finest rows carry no error.
    """
    if reference not in REFERENCES:
        raise ConfigError(f"unknown error reference '{reference}', expected one of {REFERENCES}", sys)
    if reference == "exact":
        density.require_exact()
    steps = sorted((float(h) for h in h_list), reverse=True)
    if not steps:
        raise ConfigError("convergence study needs at least one step", sys)
    points = [np.asarray(p, dtype=float) for p in points]
    for h in steps:
        for x in points:
            if grid_index(x, h) is None:
                raise ConfigError(f"point {point_label(x)} is not a grid point for h={h:g}", sys)

    values = {}
    for h in steps:
        solver = VolumePotential(domain, density, params_base.with_step(h), rule, threads=threads)
        for x, result in zip(points, solver.evaluate_many(points)):
            values[(h, point_label(x))] = result.value
        logger.info(f"Level h=1/{1.0 / h:g} done for {len(points)} points")

    rows = []
    for x in points:
        label = point_label(x)
        if reference == "exact":
            target = float(density.exact_potential(x))
        else:
            target = values[(steps[-1], label)]
        previous = None
        for i, h in enumerate(steps):
            value = values[(h, label)]
            error = None
            if reference == "exact" or i < len(steps) - 1:
                error = abs(value - target)
                if reference == "exact" and target != 0.0:
                    error /= abs(target)
            rate = np.nan if previous is None else _observed_rate(previous[1], error, previous[0], h)
            rows.append({
                "h_inv": 1.0 / h,
                "point": label,
                "value": value,
                "error": np.nan if error is None else error,
                "rate": rate,
            })
            previous = (h, error)
    return pd.DataFrame(rows, columns=["h_inv", "point", "value", "error", "rate"])
