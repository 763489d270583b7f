"""
Test densities f = (-Lap + lambda^2) u with known potentials.

Responsibilities:
- Density container (global extension, optional exact potential and gradient)
- the two ellipse-based densities whose potential u vanishes with its gradient on the boundary
- the oscillatory density without an exact potential
- linear combinations of densities
"""

import math
import sys
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from helmholtz_cubature.pipeline.geometry import EllipseDomain
from helmholtz_cubature.utils.exception import ConfigError

OSCILL_FREQ = 30.0 * math.pi


@dataclass(frozen=True)
class Density:
    """
    value(x) evaluates the global extension of the density at points of shape
    (..., 2). exact_potential(x) is u inside the domain and 0 outside;
    exact_gradient(x) returns grad u with the same convention.
    """

    name: str
    value: Callable
    exact_potential: Optional[Callable] = None
    exact_gradient: Optional[Callable] = None

    @property
    def has_exact(self) -> bool:
        return self.exact_potential is not None

    def require_exact(self):
        if not self.has_exact:
            raise ConfigError(f"density '{self.name}' has no exact potential", sys)
        return self.exact_potential

    @classmethod
    def combine(cls, weights: Sequence[float], densities: Sequence["Density"]) -> "Density":
        """sum_i w_i * density_i; the exact potential is kept only if every term has one."""
        if len(weights) != len(densities) or not densities:
            raise ConfigError("combine needs one weight per density", sys)
        weights = [float(w) for w in weights]
        terms = list(zip(weights, densities))

        def value(x):
            return sum(w * d.value(x) for w, d in terms)

        exact = grad = None
        if all(d.has_exact for d in densities):
            def exact(x):
                return sum(w * d.exact_potential(x) for w, d in terms)

        if all(d.exact_gradient is not None for d in densities):
            def grad(x):
                return sum(w * d.exact_gradient(x) for w, d in terms)

        name = " + ".join(f"{w:g}*{d.name}" for w, d in terms)
        return cls(name=name, value=value, exact_potential=exact, exact_gradient=grad)


def _level_parts(dom: EllipseDomain, x):
    """q = 1 - x1^2/a^2 - x2^2/b^2, grad q and Lap q."""
    x = np.asarray(x, dtype=float)
    q = dom.level(x)
    grad_q = np.stack([-2.0 * x[..., 0] / dom.a ** 2, -2.0 * x[..., 1] / dom.b ** 2], axis=-1)
    lap_q = -2.0 / dom.a ** 2 - 2.0 / dom.b ** 2
    return x, q, grad_q, lap_q


def _inside_only(dom, func):
    def restricted(x):
        x = np.asarray(x, dtype=float)
        return np.where(dom.contains(x), func(x), 0.0)

    return restricted


def _inside_only_vector(dom, func):
    def restricted(x):
        x = np.asarray(x, dtype=float)
        return np.where(dom.contains(x)[..., None], func(x), 0.0)

    return restricted


def density_f(dom: EllipseDomain, lambda2: float) -> Density:
    """u = sin(q^2) with the ellipse level function q."""

    def u(x):
        q = dom.level(x)
        return np.sin(q * q)

    def lap_u(x):
        x, q, grad_q, lap_q = _level_parts(dom, x)
        d1 = 2.0 * q * np.cos(q * q)
        d2 = 2.0 * np.cos(q * q) - 4.0 * q * q * np.sin(q * q)
        return d2 * np.sum(grad_q * grad_q, axis=-1) + d1 * lap_q

    def grad_u(x):
        x, q, grad_q, _ = _level_parts(dom, x)
        return (2.0 * q * np.cos(q * q))[..., None] * grad_q

    def value(x):
        return -lap_u(x) + lambda2 * u(x)

    return Density(
        name="f",
        value=value,
        exact_potential=_inside_only(dom, u),
        exact_gradient=_inside_only_vector(dom, grad_u),
    )


def density_g(dom: EllipseDomain, lambda2: float) -> Density:
    """u = q^2 (1 + |x|^2)."""

    def u(x):
        x = np.asarray(x, dtype=float)
        q = dom.level(x)
        return q * q * (1.0 + np.sum(x * x, axis=-1))

    def lap_u(x):
        x, q, grad_q, lap_q = _level_parts(dom, x)
        w = 1.0 + np.sum(x * x, axis=-1)
        grad_sq = np.sum(grad_q * grad_q, axis=-1)
        return (2.0 * grad_sq + 2.0 * q * lap_q) * w + 8.0 * q * np.sum(grad_q * x, axis=-1) + 4.0 * q * q

    def grad_u(x):
        x, q, grad_q, _ = _level_parts(dom, x)
        w = 1.0 + np.sum(x * x, axis=-1)
        return (2.0 * q * w)[..., None] * grad_q + (2.0 * q * q)[..., None] * x

    def value(x):
        return -lap_u(x) + lambda2 * u(x)

    return Density(
        name="g",
        value=value,
        exact_potential=_inside_only(dom, u),
        exact_gradient=_inside_only_vector(dom, grad_u),
    )


def density_oscill(lambda2: float) -> Density:
    """f = (1800 pi^2 + lambda^2) cos(30 pi x1) cos(30 pi x2); no exact potential."""
    amplitude = 2.0 * OSCILL_FREQ ** 2 + lambda2

    def value(x):
        x = np.asarray(x, dtype=float)
        return amplitude * np.cos(OSCILL_FREQ * x[..., 0]) * np.cos(OSCILL_FREQ * x[..., 1])

    return Density(name="oscill", value=value)


DENSITIES = {
    "f": lambda dom, lambda2: density_f(dom, lambda2),
    "g": lambda dom, lambda2: density_g(dom, lambda2),
    "oscill": lambda dom, lambda2: density_oscill(lambda2),
}


def make_density(name: str, dom: EllipseDomain, lambda2: float) -> Density:
    if name not in DENSITIES:
        raise ConfigError(f"unknown density '{name}', expected one of {sorted(DENSITIES)}", sys)
    return DENSITIES[name](dom, lambda2)
