"""
Closed-form kernels of the one-dimensional integral representation of the
modified Helmholtz potential of a Gaussian-Laguerre basis function.

Responsibilities:
- the auxiliary function F(t, x, a) and the polynomials P_M, Q_M
- the closed form of phi_k and a quadrature oracle for it
- the t-integrands for a basis function cut by a half-space and in free space

All functions broadcast over numpy arrays. Points are given in units of
h*sqrt(D); the last coordinate is the one normal to the cutting plane.
"""

import math
import sys
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from helmholtz_cubature.basis.specfun import erfc, hermite, hermite_all, laguerre_all
from helmholtz_cubature.utils.exception import ConfigError, NumericalError

# exp() arguments below this are treated as exact zeros
LOG_UNDERFLOW = -700.0

ORACLE_HALF_WIDTH = 12.0


@dataclass(frozen=True)
class ScaledPoint:
    """Point(s) in units of h*sqrt(D); coords has shape (..., n)."""

    coords: np.ndarray

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=float)
        if coords.ndim == 0:
            coords = coords.reshape(1)
        if not np.all(np.isfinite(coords)):
            raise ConfigError("scaled point has non-finite components", sys)
        object.__setattr__(self, "coords", coords)

    @property
    def n(self) -> int:
        return self.coords.shape[-1]

    @property
    def normsq(self):
        return np.sum(self.coords * self.coords, axis=-1)

    @property
    def xprime_normsq(self):
        tangential = self.coords[..., :-1]
        return np.sum(tangential * tangential, axis=-1)

    @property
    def x_n(self):
        return self.coords[..., -1]


def _as_scaled(xs) -> ScaledPoint:
    return xs if isinstance(xs, ScaledPoint) else ScaledPoint(xs)


def _positive(t, name="t"):
    t = np.asarray(t, dtype=float)
    if not np.all(t > 0):
        raise ConfigError(f"{name} must be positive, got min {np.min(t)}", sys)
    return t


def _non_negative(t, name="t"):
    t = np.asarray(t, dtype=float)
    if not np.all(t >= 0):
        raise ConfigError(f"{name} must be non-negative, got min {np.min(t)}", sys)
    return t


def _exp_or_zero(arg):
    """exp(arg) with arguments below LOG_UNDERFLOW mapped to 0."""
    arg = np.asarray(arg, dtype=float)
    return np.where(arg < LOG_UNDERFLOW, 0.0, np.exp(np.maximum(arg, LOG_UNDERFLOW)))


def big_f(t, x, a):
    """F(t, x, a) = sqrt((1+t)/t) * (a - x/(1+t))."""
    t = _positive(t)
    return np.sqrt((1.0 + t) / t) * (a - np.asarray(x, dtype=float) / (1.0 + t))


def p_poly(M, n, x_normsq, t):
    """P_M(|x|^2, t) = sum_{k<M} (1+t)^(-k-n/2) L_k^(n/2-1)(|x|^2/(1+t))."""
    t = _non_negative(t)
    s = 1.0 + t
    lag = laguerre_all(M - 1, n / 2.0 - 1.0, np.asarray(x_normsq, dtype=float) / s)
    total = np.zeros(np.broadcast(t, lag[0]).shape)
    for k in range(M):
        total = total + s ** (-k - n / 2.0) * lag[k]
    return total


def _tangential_laguerre(M, n, xprime_normsq, s):
    if n == 1:
        # no tangential directions: only the l = 0 term survives
        base = np.ones_like(np.asarray(xprime_normsq / s, dtype=float))
        return [base] + [np.zeros_like(base)] * (M - 1)
    return laguerre_all(M - 1, (n - 3) / 2.0, xprime_normsq / s)


def _boundary_poly(m, x, t, p):
    """
    Polynomial q_m with phi_m = (erfc term) + exp(-x^2/(1+t) - F^2) q_m.

    q_m solves q' - 2((1+t)p - x)/t q = H_2m(x/sqrt(1+t))/(1+t)^m - H_2m(p);
    its coefficients in z = (1+t)p - x follow from a downward recurrence and
    stay bounded as t -> 0.
    """
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    p = np.asarray(p, dtype=float)
    shape = np.broadcast(x, t, p).shape
    if m == 0:
        return np.zeros(shape)

    s = 1.0 + t
    z = s * p - x
    top = 2 * m
    h_v = hermite_all(top, x / s)
    coeffs = [0.0] * (top + 2)
    for i in range(top, 0, -1):
        # z^i coefficient of -H_2m((z + x)/s)
        r_i = -math.comb(top, i) * h_v[top - i] * (2.0 / s) ** i
        coeffs[i - 1] = 0.5 * t * (s * (i + 1) * coeffs[i + 1] - r_i)

    value = np.zeros(shape)
    for c in reversed(coeffs[:top]):
        value = value * z + c
    return value


def _weighted_q(M, n, xprime_normsq, x_n, t, a, log_weight):
    """
    exp(log_weight) * Q_M, assembled from the boundary polynomials of
    phi_1 .. phi_(M-1); the common t^(-1/2) factor goes into the exponent.
    """
    t = _positive(t)
    xprime_normsq = np.asarray(xprime_normsq, dtype=float)
    x_n = np.asarray(x_n, dtype=float)
    a = np.asarray(a, dtype=float)
    shape = np.broadcast(t, xprime_normsq, x_n, a, log_weight).shape
    if M == 1:
        return np.zeros(shape)

    s = 1.0 + t
    lag = _tangential_laguerre(M, n, xprime_normsq, s)
    boundary = [None] + [_boundary_poly(m, x_n, t, a) for m in range(1, M)]

    total = np.zeros(shape)
    for k in range(1, M):
        for l in range(k):
            coeff = (-1) ** (k - l) / (math.factorial(k - l) * 4 ** (k - l))
            total = total + coeff * lag[l] * boundary[k - l] / s ** l
    weight = _exp_or_zero(log_weight - 0.5 * np.log(t))
    return 2.0 * weight * total / s ** ((n - 1) / 2.0)


def q_poly(M, n, xprime_normsq, x_n, t, a):
    """Q_M(|x'|^2, x_n, t, a); identically zero for M = 1."""
    return _weighted_q(M, n, xprime_normsq, x_n, t, a, 0.0)


def phi_k_closed(k, x, t, p):
    """
    Closed form of phi_k(x, t, p) = int_p^inf exp(-(x-y)^2/t) (d/dy)^(2k) exp(-y^2) dy.
    """
    if int(k) != k or k < 0:
        raise ConfigError(f"phi_k needs a non-negative integer k, got {k}", sys)
    t = _positive(t)
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    s = 1.0 + t
    F = big_f(t, x, p)
    gauss_exp = -x * x / s
    h_x = hermite_all(2 * k, x / np.sqrt(s))

    value = _exp_or_zero(gauss_exp) * erfc(F) * h_x[2 * k] * np.sqrt(math.pi * t) / (2.0 * s ** (k + 0.5))
    return value + _exp_or_zero(gauss_exp - F * F) * _boundary_poly(k, x, t, p)


def phi_k_oracle(k, x, t, p):
    """phi_k by adaptive quadrature; used to validate phi_k_closed."""
    if int(k) != k or k < 0:
        raise ConfigError(f"phi_k needs a non-negative integer k, got {k}", sys)
    if not t > 0:
        raise ConfigError(f"t must be positive, got {t}", sys)
    x, t, p = float(x), float(t), float(p)

    # d^(2k)/dy^(2k) exp(-y^2) = H_2k(y) exp(-y^2); the product peaks at x/(1+t)
    def integrand(y):
        return float(hermite(2 * k, y)) * math.exp(-((x - y) ** 2) / t - y * y)

    centre = x / (1.0 + t)
    upper = centre + ORACLE_HALF_WIDTH
    lower = max(p, centre - ORACLE_HALF_WIDTH)
    if lower >= upper:
        return 0.0

    value, abserr, info, *message = integrate.quad(
        integrand, lower, upper, epsabs=1e-13, epsrel=1e-13, limit=400, full_output=1
    )
    if message and abserr > 1e-11:
        raise NumericalError(
            f"phi_k oracle did not converge for k={k}, x={x}, t={t}, p={p}: {message[0]}", sys
        )
    return value


def freespace_integrand(M, n, xs, t, lam2h2D):
    """exp(-lam2h2D t/4) exp(-|xs|^2/(1+t)) P_M(|xs|^2, t)."""
    xs = _as_scaled(xs)
    t = _non_negative(t)
    rsq = xs.normsq
    return np.exp(-0.25 * lam2h2D * t - rsq / (1.0 + t)) * p_poly(M, n, rsq, t)


def halfspace_integrand(M, n, xs, t, a, lam2h2D):
    """
    t-integrand of a basis function restricted to the half-space {y_n > a}:

        exp(-lam2h2D t/4) exp(-|xs|^2/(1+t)) (erfc(F) P_M + exp(-F^2)/sqrt(pi) Q_M)

    with F = F(t, xs_n, a).
    """
    xs = _as_scaled(xs)
    t = _positive(t)
    a = np.asarray(a, dtype=float)
    rsq = xs.normsq
    F = big_f(t, xs.x_n, a)
    log_gauss = -0.25 * lam2h2D * t - rsq / (1.0 + t)

    value = _exp_or_zero(log_gauss) * erfc(F) * p_poly(M, n, rsq, t)
    if M > 1:
        tangential = _weighted_q(M, n, xs.xprime_normsq, xs.x_n, t, a, log_gauss - F * F)
        value = value + tangential / math.sqrt(math.pi)
    return value
