"""
Orthogonal polynomials and error functions used by the kernel formulas.

Hermite and generalized Laguerre polynomials are evaluated with their forward
three-term recurrences; all functions accept scalars or numpy arrays.
Degrees stay below 2*(MAX_ORDER-1) in this package, where the forward
recurrences are stable in double precision.
"""

import sys

import numpy as np
from scipy import special

from helmholtz_cubature.utils.exception import ConfigError


def _check_degree(k):
    if int(k) != k or k < 0:
        raise ConfigError(f"polynomial degree must be a non-negative integer, got {k}", sys)


def hermite_all(kmax, x):
    """Physicists' Hermite polynomials H_0..H_kmax at x, as a list."""
    _check_degree(kmax)
    x = np.asarray(x, dtype=float)
    values = [np.ones_like(x)]
    if kmax >= 1:
        values.append(2.0 * x)
    for k in range(1, kmax):
        values.append(2.0 * x * values[k] - 2.0 * k * values[k - 1])
    return values


def hermite(k, x):
    """H_k(x) via H_{k+1} = 2x H_k - 2k H_{k-1}."""
    return hermite_all(k, x)[k]


def laguerre_all(kmax, gamma, y):
    """Generalized Laguerre polynomials L_0^(gamma)..L_kmax^(gamma) at y."""
    _check_degree(kmax)
    if gamma <= -1:
        raise ConfigError(f"Laguerre parameter must exceed -1, got {gamma}", sys)
    y = np.asarray(y, dtype=float)
    values = [np.ones_like(y)]
    if kmax >= 1:
        values.append(1.0 + gamma - y)
    for k in range(1, kmax):
        values.append(((2 * k + 1 + gamma - y) * values[k] - (k + gamma) * values[k - 1]) / (k + 1))
    return values


def laguerre(k, gamma, y):
    """L_k^(gamma)(y) via (k+1) L_{k+1} = (2k+1+gamma-y) L_k - (k+gamma) L_{k-1}."""
    return laguerre_all(k, gamma, y)[k]


def erfc(x):
    """Complementary error function (Cephes, ~1e-15 relative; underflows to 0 past x ~ 26.5)."""
    return special.erfc(x)
