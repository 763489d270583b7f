"""
Cubature coefficients: potentials of one scaled basis function.

Responsibilities:
- a-coefficients (free space), depending on the node offset only through |k-m|^2
- b-coefficients (tangential half-plane of a boundary-strip node)
- the free-space potential of a single unscaled basis function
- a thread-safe cache shared by all evaluation points of a run

    a(ksq)       = 1/4 * int_0^inf exp(-c t) exp(-ksq/(D(1+t))) P_M(ksq/D, t) dt
    b(k, m, fr)  = 1/8 * int_0^inf halfspace integrand at xi = omega^T (k-m)/sqrt(D),
                   offset rho/(h sqrt(D))

with c = lambda^2 h^2 D / 4.
"""

import math
import sys
import threading

import numpy as np

from helmholtz_cubature.basis.de_rule import QuadratureRule, trapezoid_de
from helmholtz_cubature.basis.kernels import ScaledPoint, freespace_integrand, halfspace_integrand
from helmholtz_cubature.params import RunParams
from helmholtz_cubature.pipeline.geometry import LocalFrame
from helmholtz_cubature.utils.exception import ConfigError
from helmholtz_cubature.utils.logger import logger


def _radial_points(rsq, n):
    rsq = np.atleast_1d(np.asarray(rsq, dtype=float))
    coords = np.zeros(rsq.shape + (n,))
    coords[..., 0] = np.sqrt(rsq)
    return ScaledPoint(coords)


def a_coeffs_from_normsq(rsq, params: RunParams, rule: QuadratureRule):
    """a-coefficients for scaled squared distances rsq = |x - hm|^2 / (h^2 D) (array)."""
    rsq = np.asarray(rsq, dtype=float)
    if np.any(rsq < 0):
        raise ConfigError("squared offsets must be non-negative", sys)
    points = _radial_points(rsq.ravel(), params.n)
    lam2h2D = params.lam2h2D
    rule = rule.trimmed(0.25 * lam2h2D)
    values = trapezoid_de(lambda t: freespace_integrand(params.M, params.n, points, t, lam2h2D), rule)
    return 0.25 * np.asarray(values).reshape(rsq.shape)


def a_coeff(M, n, ksq, params: RunParams, rule: QuadratureRule) -> float:
    """Free-space coefficient for the integer squared offset ksq = |k - m|^2."""
    if int(ksq) != ksq or ksq < 0:
        raise ConfigError(f"ksq must be a non-negative integer, got {ksq}", sys)
    if (M, n) != (params.M, params.n):
        params = RunParams(h=params.h, D=params.D, M=M, r=params.r, lambda2=params.lambda2, n=n)
    return float(a_coeffs_from_normsq(np.array([ksq / params.D]), params, rule)[0])


def b_coeffs_scaled(xs, offset, params: RunParams, rule: QuadratureRule):
    """b-coefficients for local scaled points xs (N, n) and scaled plane offsets (N,)."""
    points = ScaledPoint(xs)
    offset = np.asarray(offset, dtype=float)
    lam2h2D = params.lam2h2D
    rule = rule.trimmed(0.25 * lam2h2D)
    values = trapezoid_de(
        lambda t: halfspace_integrand(params.M, params.n, points, t, offset, lam2h2D), rule
    )
    return 0.125 * np.asarray(values)


def local_offsets(x_scaled, nodes, omega, scale_d):
    """omega^T (x - m) / sqrt(D) for every strip node; x and nodes in grid units."""
    diff = np.asarray(x_scaled, dtype=float) - np.asarray(nodes, dtype=float)
    return np.einsum("nij,ni->nj", omega, diff) / scale_d


def b_coeff(M, n, k, m, frame: LocalFrame, params: RunParams, rule: QuadratureRule) -> float:
    """Half-plane coefficient of strip node m seen from grid index k."""
    if (M, n) != (params.M, params.n):
        params = RunParams(h=params.h, D=params.D, M=M, r=params.r, lambda2=params.lambda2, n=n)
    xs = local_offsets(np.asarray(k, dtype=float), np.asarray([m]), frame.omega[None], math.sqrt(params.D))
    offset = np.array([frame.rho / params.scale])
    return float(b_coeffs_scaled(xs, offset, params, rule)[0])


def freespace_potential(M, n, x, lambda2, rule: QuadratureRule = None) -> float:
    """
    Potential of the unscaled basis function eta_2M under the kernel of
    -Lap + lambda^2 at x:

        1/(4 pi^(n/2)) int_0^inf exp(-lambda2 t/4) exp(-|x|^2/(1+t)) P_M(|x|^2, t) dt
    """
    if not lambda2 > 0:
        raise ConfigError(f"lambda2 must be positive, got {lambda2}", sys)
    rule = (rule or QuadratureRule.preset("fine")).trimmed(0.25 * lambda2)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (n,):
        raise ConfigError(f"point {x.tolist()} does not match dimension {n}", sys)
    point = ScaledPoint(x[None])
    value = trapezoid_de(lambda t: freespace_integrand(M, n, point, t, lambda2), rule)
    return float(np.asarray(value)[0]) / (4.0 * math.pi ** (n / 2.0))


class CoefficientCache:
    """
    a-coefficients keyed by integer |k-m|^2 and b-coefficient rows keyed by
    the evaluation index k. Values are deterministic, so concurrent writers
    of the same key store identical numbers.
    """

    def __init__(self, params: RunParams, rule: QuadratureRule):
        self.params = params
        self.rule = rule
        self._keys = np.empty(0, dtype=np.int64)
        self._values = np.empty(0)
        self._strip = {}
        self._lock = threading.Lock()

    def __len__(self):
        return len(self._keys)

    @property
    def strip_rows(self) -> int:
        return len(self._strip)

    def interior(self, ksq):
        """a(ksq) for an integer array ksq; missing keys are computed and stored."""
        ksq = np.asarray(ksq, dtype=np.int64)
        wanted = np.unique(ksq)
        with self._lock:
            keys = self._keys
        missing = np.setdiff1d(wanted, keys, assume_unique=True)
        if missing.size:
            fresh = a_coeffs_from_normsq(missing / self.params.D, self.params, self.rule)
            with self._lock:
                new = np.setdiff1d(missing, self._keys, assume_unique=True)
                if new.size:
                    pick = np.searchsorted(missing, new)
                    keys = np.concatenate([self._keys, new])
                    values = np.concatenate([self._values, fresh[pick]])
                    order = np.argsort(keys, kind="stable")
                    self._keys, self._values = keys[order], values[order]
                    logger.debug(f"a-coefficient cache grew by {new.size} to {self._keys.size} keys")
        with self._lock:
            keys, values = self._keys, self._values
        return values[np.searchsorted(keys, ksq)]

    def strip(self, k, compute):
        """Row of b-coefficients for evaluation index k; compute() builds it on a miss."""
        key = tuple(int(v) for v in k)
        with self._lock:
            row = self._strip.get(key)
        if row is None:
            row = compute()
            with self._lock:
                self._strip[key] = row
        return row
