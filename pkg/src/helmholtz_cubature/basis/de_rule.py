"""
Double-exponential substitution and the trapezoid rule on the real line.

t = Phi(u) with
    Phi(u)  = exp(alpha*beta*(u - e^-u) + alpha*exp(beta*(u - e^-u)))
    Phi'(u) = Phi(u) * alpha*beta*(1 + e^-u)(1 + exp(beta*(u - e^-u)))
maps R onto (0, inf); integrands on (0, inf) that decay at least
exponentially become doubly exponentially decaying in u, so the plain
trapezoid rule with step tau converges very fast.
"""

import math
import sys
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from helmholtz_cubature.utils.exception import ConfigError, NumericalError
from helmholtz_cubature.utils.logger import logger

# largest log(Phi) that still fits a double
LOG_OVERFLOW = 709.0
# exp(-x) underflows to 0 beyond this
UNDERFLOW_ARG = 745.0

LOWER_ENDPOINT_MAX = 1e-10
UPPER_ENDPOINT_MIN = 1e8

PRESETS = {
    "coarse": dict(alpha=4.0, beta=2.0, tau=0.01, s_min=-80, s_max=100),
    "fine": dict(alpha=4.0, beta=2.0, tau=0.006, s_min=-160, s_max=200),
}


def log_phi(u, alpha, beta):
    """log Phi(u); finite wherever exp(beta*(u - e^-u)) is."""
    u = np.asarray(u, dtype=float)
    sigma = beta * (u - np.exp(-u))
    return alpha * sigma + alpha * np.exp(sigma)


def de_transform(u, alpha, beta):
    """(Phi(u), Phi'(u)); an overflowing Phi is reported as saturation."""
    u = np.asarray(u, dtype=float)
    log_value = log_phi(u, alpha, beta)
    if np.any(log_value > LOG_OVERFLOW):
        raise NumericalError(
            f"DE transform saturates at u={float(np.max(u)):.6g} (log Phi={float(np.max(log_value)):.6g}); "
            "shrink the quadrature range",
            sys,
        )
    phi = np.exp(log_value)
    sigma = beta * (u - np.exp(-u))
    dphi = phi * alpha * beta * (1.0 + np.exp(-u)) * (1.0 + np.exp(sigma))
    return phi, dphi


@dataclass(frozen=True)
class QuadratureRule:
    """
    Trapezoid rule with step tau over the indices s_min..s_max of the
    DE-transformed integral. trimmed_from records the original s_max when
    the upper end was cut back by trimmed().
    """

    alpha: float = 4.0
    beta: float = 2.0
    tau: float = 0.01
    s_min: int = -80
    s_max: int = 100
    trimmed_from: Optional[int] = None

    def __post_init__(self):
        for name in ("alpha", "beta", "tau"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ConfigError(f"quadrature {name} must be positive, got {value}", sys)
        if int(self.s_min) != self.s_min or int(self.s_max) != self.s_max:
            raise ConfigError(f"quadrature indices must be integers, got [{self.s_min}, {self.s_max}]", sys)
        if not self.s_min < 0 < self.s_max:
            raise ConfigError(f"quadrature range must satisfy s_min < 0 < s_max, got [{self.s_min}, {self.s_max}]", sys)

        low = float(log_phi(self.s_min * self.tau, self.alpha, self.beta))
        if low > math.log(LOWER_ENDPOINT_MAX):
            raise ConfigError(
                f"quadrature lower end Phi({self.s_min}*{self.tau})={math.exp(low):.3e} exceeds {LOWER_ENDPOINT_MAX:g}",
                sys,
            )
        if self.trimmed_from is None:
            high = float(log_phi(self.s_max * self.tau, self.alpha, self.beta))
            if high < math.log(UPPER_ENDPOINT_MIN):
                raise ConfigError(
                    f"quadrature upper end Phi({self.s_max}*{self.tau})={math.exp(high):.3e} is below {UPPER_ENDPOINT_MIN:g}",
                    sys,
                )

    @classmethod
    def preset(cls, name: str) -> "QuadratureRule":
        if name not in PRESETS:
            raise ConfigError(f"unknown quadrature preset '{name}', expected one of {sorted(PRESETS)}", sys)
        return cls(**PRESETS[name])

    @property
    def size(self) -> int:
        return self.s_max - self.s_min + 1

    def refined(self) -> "QuadratureRule":
        """Half the step over the same u-interval."""
        return replace(self, tau=self.tau / 2.0, s_min=2 * self.s_min, s_max=2 * self.s_max, trimmed_from=None)

    def trimmed(self, decay: float) -> "QuadratureRule":
        """
        Drop the upper indices where exp(-decay * Phi(s*tau)) has already
        underflowed; decay is the rate of the integrand's exponential factor.
        """
        if decay <= 0:
            return self
        s = np.arange(1, self.s_max + 1)
        with np.errstate(over="ignore"):
            log_t = np.minimum(log_phi(s * self.tau, self.alpha, self.beta), LOG_OVERFLOW)
        dead = np.nonzero(decay * np.exp(log_t) > UNDERFLOW_ARG)[0]
        if dead.size == 0:
            return self
        s_max = int(s[dead[0]])
        if s_max >= self.s_max:
            return self
        logger.debug(f"quadrature range trimmed from s_max={self.s_max} to {s_max} for decay {decay:.3e}")
        return replace(self, s_max=s_max, trimmed_from=self.s_max)

    def nodes(self):
        """Abscissae t_s = Phi(s*tau) and weights tau*Phi'(s*tau), ascending in s."""
        u = np.arange(self.s_min, self.s_max + 1) * self.tau
        phi, dphi = de_transform(u, self.alpha, self.beta)
        return phi, self.tau * dphi


def trapezoid_de(integrand, rule: QuadratureRule):
    """
    tau * sum_s integrand(Phi(s tau)) Phi'(s tau), accumulated in ascending s.

    integrand takes a scalar t and may return a scalar or an array (vectorized
    over other arguments); the result has the same shape.
    """
    abscissae, weights = rule.nodes()
    total = None
    for s, t, w in zip(range(rule.s_min, rule.s_max + 1), abscissae, weights):
        value = np.asarray(integrand(float(t)), dtype=float)
        if not np.all(np.isfinite(value)):
            raise NumericalError(f"non-finite integrand at s={s}, t={t:.6e}", sys)
        total = w * value if total is None else total + w * value
    return float(total) if total.ndim == 0 else total
