"""
High-level workflows behind the command line.

Provides a small wrapper around:
- run_eval()      cubature values (and errors) at a list of points
- run_converge()  error / observed-order table over several grid steps
- run_coeffs()    individual a- and b-coefficients for inspection
"""

import sys
import time

import numpy as np
import pandas as pd

from helmholtz_cubature import __version__
from helmholtz_cubature.pipeline.coefficients import a_coeff, b_coeff
from helmholtz_cubature.pipeline.convergence import convergence_study
from helmholtz_cubature.pipeline.cubature import VolumePotential
from helmholtz_cubature.pipeline.densities import make_density
from helmholtz_cubature.pipeline.geometry import local_frame
from helmholtz_cubature.utils.config import RunConfig
from helmholtz_cubature.utils.exception import ConfigError
from helmholtz_cubature.utils.logger import logger

EVAL_COLUMNS = ["x1", "x2", "exact", "approx", "abs_error", "rel_error"]
CONVERGE_COLUMNS = ["h_inv", "point", "error", "rate"]
COEFF_COLUMNS = ["kind", "key", "scaled_offset", "value"]


class CubatureRunner:
    """
    Orchestrates one command-line run.

    Typical usage:
        runner = CubatureRunner(RunConfig.resolve(flags))
        df = runner.run_all("eval")
    """

    def __init__(self, config: RunConfig):
        self.config = config.validate()
        self.domain = config.to_domain()
        self.rule = config.to_rule()
        self.density = make_density(config.density, self.domain, config.lambda2)

    def header(self, command: str) -> dict:
        return {"helmholtz-cubature": __version__, "command": command, **self.config.describe()}

    def run_eval(self) -> pd.DataFrame:
        """Values at config.points for the first grid step."""
        if self.config.exact:
            self.density.require_exact()
        params = self.config.to_params()
        logger.info(f"Evaluating {len(self.config.points)} points at h={params.h:g}")
        solver = VolumePotential(self.domain, self.density, params, self.rule, threads=self.config.threads)
        rows = []
        for result in solver.evaluate_many(self.config.points):
            rows.append({
                "x1": result.x[0],
                "x2": result.x[1],
                "exact": np.nan if result.exact is None else result.exact,
                "approx": result.value,
                "abs_error": np.nan if result.abs_error is None else result.abs_error,
                "rel_error": np.nan if result.rel_error is None else result.rel_error,
            })
        return pd.DataFrame(rows, columns=EVAL_COLUMNS)

    def run_converge(self) -> pd.DataFrame:
        """Errors and rates over every configured grid step."""
        df = convergence_study(
            self.domain,
            self.density,
            self.config.points,
            self.config.h,
            self.config.to_params(),
            self.rule,
            reference=self.config.reference,
            threads=self.config.threads,
        )
        return df[CONVERGE_COLUMNS]

    def run_coeffs(self) -> pd.DataFrame:
        """a(ksq) for every configured ksq and b(k, m) for every configured node pair."""
        params = self.config.to_params()
        rows = []
        for ksq in self.config.ksq:
            if ksq < 0:
                raise ConfigError(f"ksq must be non-negative, got {ksq}", sys)
            value = a_coeff(params.M, params.n, ksq, params, self.rule)
            rows.append({"kind": "a", "key": f"ksq={ksq}", "scaled_offset": np.nan, "value": value})
        for k, m in self.config.pair:
            frame = local_frame(self.domain, params.h * np.asarray(m, dtype=float))
            value = b_coeff(params.M, params.n, k, m, frame, params, self.rule)
            rows.append({
                "kind": "b",
                "key": f"k={k[0]},{k[1]}:m={m[0]},{m[1]}",
                "scaled_offset": frame.rho / params.scale,
                "value": value,
            })
        return pd.DataFrame(rows, columns=COEFF_COLUMNS)

    def run_all(self, command: str) -> pd.DataFrame:
        workflows = {"eval": self.run_eval, "converge": self.run_converge, "coeffs": self.run_coeffs}
        if command not in workflows:
            raise ConfigError(f"unknown command '{command}', expected one of {sorted(workflows)}", sys)
        start = time.perf_counter()
        logger.info(f"Running '{command}' ...")
        df = workflows[command]()
        logger.info(f"'{command}' finished in {time.perf_counter() - start:.1f}s with {len(df)} rows")
        return df
