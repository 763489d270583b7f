"""
Boundary-corrected cubature for the volume potential of -Lap + lambda^2.

Responsibilities:
- sample the density on the interior and boundary-strip nodes
- assemble  C * (sum_interior f(hm) a(|k-m|^2) + sum_strip f(hm) b(k, m))
  at grid indices (cached coefficients) and at arbitrary points
- evaluate many points on a worker pool and compare with exact potentials
"""

import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from helmholtz_cubature.basis.de_rule import QuadratureRule
from helmholtz_cubature.params import RunParams
from helmholtz_cubature.pipeline.coefficients import (
    CoefficientCache,
    a_coeffs_from_normsq,
    b_coeffs_scaled,
    local_offsets,
)
from helmholtz_cubature.pipeline.densities import Density
from helmholtz_cubature.pipeline.geometry import Domain, NodeSet, classify_nodes
from helmholtz_cubature.utils.exception import ConfigError
from helmholtz_cubature.utils.logger import logger

GRID_TOL = 1e-12


@dataclass(frozen=True)
class PotentialResult:
    """Approximate value, with exact value and errors when the density provides them."""

    x: tuple
    value: float
    exact: Optional[float] = None
    abs_error: Optional[float] = None
    rel_error: Optional[float] = None

    @classmethod
    def build(cls, x, value, density: Density):
        x = tuple(float(v) for v in x)
        if not density.has_exact:
            return cls(x=x, value=value)
        exact = float(density.exact_potential(np.asarray(x)))
        abs_error = abs(value - exact)
        rel_error = abs_error / abs(exact) if exact != 0.0 else None
        return cls(x=x, value=value, exact=exact, abs_error=abs_error, rel_error=rel_error)


def _ordered_sum(values, weights) -> float:
    # exactly rounded, so the result does not depend on summation order
    return math.fsum((np.asarray(values) * np.asarray(weights)).tolist())


def grid_index(x, h):
    """Integer index k with hk = x, or None when x is off the grid."""
    x = np.asarray(x, dtype=float)
    k = np.rint(x / h)
    if np.all(np.abs(x - h * k) <= GRID_TOL * max(1.0, float(np.max(np.abs(x))))):
        return k.astype(np.int64)
    return None


def _strip_row(point_units, nodes: NodeSet, params: RunParams, rule: QuadratureRule):
    """b-coefficients of all strip nodes for an evaluation point given in grid units."""
    if not len(nodes.strip):
        return np.empty(0)
    xs = local_offsets(point_units, nodes.strip, nodes.strip_omega, math.sqrt(params.D))
    return b_coeffs_scaled(xs, nodes.strip_rho / params.scale, params, rule)


def potential_at_grid(k, nodes: NodeSet, density: Density, params: RunParams, rule: QuadratureRule,
                      cache: Optional[CoefficientCache] = None, samples=None) -> float:
    """
    Cubature value at the grid point hk as a bare float; VolumePotential.evaluate
    wraps it in a PotentialResult with the exact value and errors.
    """
    k = np.asarray(k, dtype=np.int64)
    if samples is None:
        samples = sample_density(nodes, density, params)
    f_interior, f_strip = samples

    diff = nodes.interior - k
    ksq = np.sum(diff * diff, axis=-1)
    if cache is None:
        a = a_coeffs_from_normsq(ksq / params.D, params, rule)
        b = _strip_row(k.astype(float), nodes, params, rule)
    else:
        a = cache.interior(ksq)
        b = cache.strip(k, lambda: _strip_row(k.astype(float), nodes, params, rule))

    return params.prefactor * (_ordered_sum(f_interior, a) + _ordered_sum(f_strip, b))


def potential_at_point(x, nodes: NodeSet, density: Density, params: RunParams, rule: QuadratureRule,
                       samples=None) -> float:
    """Cubature value (bare float) at an arbitrary point x; coefficients are not cached."""
    x = np.asarray(x, dtype=float)
    if samples is None:
        samples = sample_density(nodes, density, params)
    f_interior, f_strip = samples

    units = x / params.h
    diff = nodes.interior - units
    rsq = np.sum(diff * diff, axis=-1) / params.D
    a = a_coeffs_from_normsq(rsq, params, rule)
    b = _strip_row(units, nodes, params, rule)
    return params.prefactor * (_ordered_sum(f_interior, a) + _ordered_sum(f_strip, b))


def sample_density(nodes: NodeSet, density: Density, params: RunParams):
    """Density values at the interior and strip nodes (the strip uses the extension)."""
    f_interior = np.asarray(density.value(params.h * nodes.interior), dtype=float)
    f_strip = np.asarray(density.value(params.h * nodes.strip), dtype=float)
    return f_interior, f_strip


class VolumePotential:
    """
    Cubature of one density over one domain at a fixed step h.

    Node classification, density samples and the coefficient cache are built
    once and shared by every evaluation point.
    """

    def __init__(self, domain: Domain, density: Density, params: RunParams, rule: QuadratureRule,
                 threads: int = 1, use_cache: bool = True):
        if params.n != 2:
            raise ConfigError(f"cubature assembly is planar, got n={params.n}", sys)
        if threads < 1:
            raise ConfigError(f"thread count must be >= 1, got {threads}", sys)
        self.domain = domain
        self.density = density
        self.params = params
        self.rule = rule
        self.threads = threads
        self.cache = CoefficientCache(params, rule) if use_cache else None
        self._nodes = None
        self._samples = None

    @property
    def nodes(self) -> NodeSet:
        if self._nodes is None:
            self._nodes = classify_nodes(self.domain, self.params)
        return self._nodes

    @property
    def samples(self):
        if self._samples is None:
            self._samples = sample_density(self.nodes, self.density, self.params)
        return self._samples

    def prepare(self):
        """Build nodes and samples before workers share them."""
        return self.samples

    def value_at(self, x) -> float:
        """Grid points use the cached path; other points the direct one."""
        k = grid_index(x, self.params.h)
        if k is not None:
            return potential_at_grid(k, self.nodes, self.density, self.params, self.rule,
                                     cache=self.cache, samples=self.samples)
        return potential_at_point(x, self.nodes, self.density, self.params, self.rule, samples=self.samples)

    def evaluate(self, x) -> PotentialResult:
        start = time.perf_counter()
        value = self.value_at(x)
        logger.debug(f"u_h{tuple(np.asarray(x).tolist())} = {value:.15e} in {time.perf_counter() - start:.2f}s")
        return PotentialResult.build(x, value, self.density)

    def evaluate_many(self, points):
        """Results in the order of points; evaluated on the worker pool."""
        points = [np.asarray(p, dtype=float) for p in points]
        if not points:
            return []
        self.prepare()
        if self.threads == 1:
            results = [self.evaluate(p) for p in points]
        else:
            with ThreadPoolExecutor(max_workers=self.threads) as pool:
                results = list(pool.map(self.evaluate, points))
        if self.cache is not None:
            logger.info(f"Coefficient cache: {len(self.cache)} a-keys, {self.cache.strip_rows} strip rows")
        return results
