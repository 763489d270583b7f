"""
Radial generating functions eta_2M and the truncated quasi-interpolant.

eta_2M(x) = pi^(-n/2) L_{M-1}^(n/2)(|x|^2) exp(-|x|^2) satisfies the moment
conditions of order 2M; the quasi-interpolant

    M f(x) = D^(-n/2) sum_m f(hm) eta_2M((x - hm) / (h sqrt(D)))

is truncated to the nodes with |x - hm| <= r h sqrt(D).
"""

import math
import sys
from dataclasses import dataclass
from itertools import product

import numpy as np
from numpy.polynomial.legendre import leggauss

from helmholtz_cubature.basis.specfun import laguerre, laguerre_all
from helmholtz_cubature.utils.exception import ConfigError, NumericalError

MOMENT_BOX = 12.0
MOMENT_NODES = 160


@dataclass(frozen=True)
class GeneratingOrder:
    """Order M (approximation order N = 2M) in dimension n."""

    M: int
    n: int = 2

    def __post_init__(self):
        if int(self.M) != self.M or self.M < 1:
            raise ConfigError(f"generating order M must be a positive integer, got {self.M}", sys)
        if int(self.n) != self.n or self.n < 1:
            raise ConfigError(f"dimension n must be a positive integer, got {self.n}", sys)


@dataclass(frozen=True)
class QuasiInterpParams:
    """Grid step h, shape parameter D and truncation radius r (units of h sqrt(D))."""

    h: float
    D: float = 3.0
    r: float = 6.0

    def __post_init__(self):
        if not self.h > 0:
            raise ConfigError(f"grid step h must be positive, got {self.h}", sys)
        if not self.D >= 1:
            raise ConfigError(f"shape parameter D must be >= 1, got {self.D}", sys)
        if not self.r >= 1:
            raise ConfigError(f"truncation radius r must be >= 1, got {self.r}", sys)


@dataclass
class GridSamples:
    """
    Samples f(hm) on a rectangular block of grid indices.
    values[i_1, ..., i_n] holds f(h * (origin + i)).
    """

    values: np.ndarray
    origin: tuple
    h: float

    @classmethod
    def from_function(cls, func, lower, upper, h):
        """Sample func on every grid node of the box [lower, upper] (indices rounded outward)."""
        lo = np.floor(np.asarray(lower, dtype=float) / h).astype(int)
        hi = np.ceil(np.asarray(upper, dtype=float) / h).astype(int)
        axes = [np.arange(a, b + 1) for a, b in zip(lo, hi)]
        mesh = np.meshgrid(*axes, indexing="ij")
        nodes = h * np.stack(mesh, axis=-1)
        values = np.asarray(func(nodes), dtype=float)
        return cls(values=values, origin=tuple(int(v) for v in lo), h=h)

    def lookup(self, indices):
        """Values at integer node indices of shape (N, n); missing nodes raise."""
        local = np.asarray(indices) - np.asarray(self.origin)
        shape = np.asarray(self.values.shape)
        outside = np.any((local < 0) | (local >= shape), axis=-1)
        if np.any(outside):
            first = tuple(int(v) for v in np.asarray(indices)[outside][0])
            raise NumericalError(
                f"quasi-interpolant needs samples at {int(outside.sum())} missing nodes, e.g. m={first}",
                sys,
            )
        return self.values[tuple(local.T)]


def eta_2m(order: GeneratingOrder, x):
    """eta_2M at points x of shape (..., n)."""
    x = np.asarray(x, dtype=float)
    rsq = np.sum(x * x, axis=-1)
    return laguerre(order.M - 1, order.n / 2.0, rsq) * np.exp(-rsq) / math.pi ** (order.n / 2.0)


def eta_2m_laplacian_form(order: GeneratingOrder, x):
    """
    eta_2M as pi^(-n/2) sum_j (-1)^j / (j! 4^j) Lap^j exp(-|x|^2), with
    Lap^j exp(-|x|^2) = (-1)^j j! 4^j L_j^(n/2-1)(|x|^2) exp(-|x|^2).
    """
    x = np.asarray(x, dtype=float)
    rsq = np.sum(x * x, axis=-1)
    gauss = np.exp(-rsq)
    total = np.zeros_like(rsq)
    powers = laguerre_all(order.M - 1, order.n / 2.0 - 1.0, rsq)
    for j in range(order.M):
        weight = (-1) ** j / (math.factorial(j) * 4 ** j)
        laplacian_power = (-1) ** j * math.factorial(j) * 4 ** j * powers[j] * gauss
        total = total + weight * laplacian_power
    return total / math.pi ** (order.n / 2.0)


def moment_defect(order: GeneratingOrder, alpha):
    """|int eta_2M(x) x^alpha dx - delta_{0,alpha}| by tensor Gauss-Legendre on [-12, 12]^n."""
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != order.n or any(a < 0 for a in alpha):
        raise ConfigError(f"multi-index {alpha} does not match dimension {order.n}", sys)
    if sum(alpha) >= 2 * order.M:
        raise ConfigError(
            f"moment conditions hold only for |alpha| < 2M = {2 * order.M}, got |alpha| = {sum(alpha)}",
            sys,
        )

    nodes, weights = leggauss(MOMENT_NODES)
    nodes = MOMENT_BOX * nodes
    weights = MOMENT_BOX * weights
    mesh = np.meshgrid(*([nodes] * order.n), indexing="ij")
    points = np.stack(mesh, axis=-1)
    w = np.ones_like(mesh[0])
    monomial = np.ones_like(mesh[0])
    for axis, grid in enumerate(np.meshgrid(*([weights] * order.n), indexing="ij")):
        w = w * grid
        monomial = monomial * mesh[axis] ** alpha[axis]

    integral = float(np.sum(w * monomial * eta_2m(order, points)))
    target = 1.0 if sum(alpha) == 0 else 0.0
    return abs(integral - target)


def quasi_interpolant(params: QuasiInterpParams, order: GeneratingOrder, samples: GridSamples, x):
    """Truncated quasi-interpolant of the sampled function at the point x."""
    x = np.asarray(x, dtype=float)
    if x.shape != (order.n,):
        raise ConfigError(f"point {x.tolist()} does not match dimension {order.n}", sys)

    scale = params.h * math.sqrt(params.D)
    radius = params.r * scale
    lo = np.floor((x - radius) / params.h).astype(int)
    hi = np.ceil((x + radius) / params.h).astype(int)
    # lexicographic node order
    indices = np.array(list(product(*[range(a, b + 1) for a, b in zip(lo, hi)])), dtype=int)
    offsets = x - params.h * indices
    keep = np.sum(offsets * offsets, axis=-1) <= radius * radius
    indices, offsets = indices[keep], offsets[keep]

    values = samples.lookup(indices)
    terms = values * eta_2m(order, offsets / scale)
    return math.fsum(terms.tolist()) / params.D ** (order.n / 2.0)
