"""
Planar domains, boundary projection and grid-node classification.

Responsibilities:
- Domain interface (containment, nearest boundary point, inner normal)
- closest-point projection onto an ellipse
- local frames (signed distance rho, rotation omega) of nodes near the boundary
- split of the grid into interior nodes and boundary-strip nodes

Sign convention: rho < 0 inside the domain, rho > 0 outside, and the
tangential half-plane seen from a node is {xi_n > rho} in local coordinates.
"""

import math
import sys
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from helmholtz_cubature.params import RunParams
from helmholtz_cubature.utils.exception import ConfigError, NumericalError
from helmholtz_cubature.utils.logger import logger

PROJECTION_TOL = 1e-14
PROJECTION_MAX_ITER = 60
CLASSIFY_CHUNK = 1 << 20

ELLIPSE_PRESETS = {
    "circle": (1.5, 1.5),
    "ellipse": (1.5, 1.0),
    "thin": (1.5, 0.5),
}


class Domain(ABC):
    """Bounded planar domain with a smooth boundary."""

    @abstractmethod
    def contains(self, x):
        """Boolean mask; boundary points count as inside."""

    @abstractmethod
    def nearest_boundary_point(self, x):
        """Closest boundary point(s) to x of shape (..., 2)."""

    @abstractmethod
    def inner_normal(self, p):
        """Unit normal at boundary point(s) p pointing into the domain."""

    @abstractmethod
    def bounding_box(self):
        """(lower, upper) corners of an axis-aligned box containing the domain."""

    def signed_distance(self, x):
        """Distance to the boundary, negative inside."""
        x = np.asarray(x, dtype=float)
        p = self.nearest_boundary_point(x)
        d = np.linalg.norm(x - p, axis=-1)
        return np.where(self.contains(x), -d, d)


@dataclass(frozen=True)
class EllipseDomain(Domain):
    """Ellipse x1^2/a^2 + x2^2/b^2 < 1 with b <= a."""

    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b) and self.a > 0 and self.b > 0):
            raise ConfigError(f"ellipse semi-axes must be positive, got a={self.a}, b={self.b}", sys)
        if self.b > self.a:
            raise ConfigError(f"ellipse needs b <= a, got a={self.a}, b={self.b}", sys)

    @classmethod
    def preset(cls, name: str) -> "EllipseDomain":
        if name not in ELLIPSE_PRESETS:
            raise ConfigError(f"unknown domain '{name}', expected one of {sorted(ELLIPSE_PRESETS)}", sys)
        return cls(*ELLIPSE_PRESETS[name])

    @property
    def is_circle(self) -> bool:
        return self.a == self.b

    def level(self, x):
        """1 - x1^2/a^2 - x2^2/b^2; positive inside."""
        x = np.asarray(x, dtype=float)
        return 1.0 - (x[..., 0] / self.a) ** 2 - (x[..., 1] / self.b) ** 2

    def contains(self, x):
        return self.level(x) >= 0.0

    def nearest_boundary_point(self, x):
        return project_to_ellipse(self, x)

    def inner_normal(self, p):
        p = np.asarray(p, dtype=float)
        grad = np.stack([p[..., 0] / self.a ** 2, p[..., 1] / self.b ** 2], axis=-1)
        return -grad / np.linalg.norm(grad, axis=-1, keepdims=True)

    def bounding_box(self):
        return np.array([-self.a, -self.b]), np.array([self.a, self.b])

    def signed_distance(self, x):
        if self.is_circle:
            x = np.asarray(x, dtype=float)
            return np.hypot(x[..., 0], x[..., 1]) - self.a
        return super().signed_distance(x)


def _project_first_quadrant(a, b, x0, y0):
    """Closest ellipse point for x0, y0 >= 0 (arrays), a > b."""
    px = np.empty_like(x0)
    py = np.empty_like(y0)

    # on the major axis inside the evolute the nearest point leaves the axis
    axis_case = (y0 == 0.0) & (x0 < (a * a - b * b) / a)
    if np.any(axis_case):
        ax = a * a * x0[axis_case] / (a * a - b * b)
        px[axis_case] = ax
        py[axis_case] = b * np.sqrt(np.maximum(0.0, 1.0 - (ax / a) ** 2))

    gen = ~axis_case
    if not np.any(gen):
        return px, py
    u, v = a * x0[gen], b * y0[gen]
    lo = -b * b + v
    hi = -b * b + np.sqrt(u * u + v * v)

    def g_and_slope(t):
        with np.errstate(divide="ignore", invalid="ignore"):
            ra = u / (t + a * a)
            rb = np.where(v > 0.0, v / (t + b * b), 0.0)
            value = ra * ra + rb * rb - 1.0
            slope = -2.0 * ra * ra / (t + a * a) - 2.0 * np.where(v > 0.0, rb * rb / (t + b * b), 0.0)
        return value, slope

    t = hi.copy()
    converged = np.zeros(t.shape, dtype=bool)
    for _ in range(PROJECTION_MAX_ITER):
        value, slope = g_and_slope(t)
        # g is decreasing: shrink the bracket around the root
        lo = np.where(value > 0.0, t, lo)
        hi = np.where(value < 0.0, t, hi)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = t - value / slope
        bad = ~np.isfinite(step) | (step <= lo) | (step >= hi)
        t_next = np.where(bad, 0.5 * (lo + hi), step)
        tol = PROJECTION_TOL * np.maximum(1.0, np.abs(t))
        converged = (np.abs(t_next - t) <= tol) | (hi - lo <= tol) | (value == 0.0)
        t = t_next
        if np.all(converged):
            break
    if not np.all(converged):
        raise NumericalError(
            f"ellipse projection did not converge for {int((~converged).sum())} points "
            f"in {PROJECTION_MAX_ITER} iterations",
            sys,
        )

    with np.errstate(divide="ignore", invalid="ignore"):
        px[gen] = a * u / (t + a * a)
        py[gen] = np.where(v > 0.0, b * v / (t + b * b), 0.0)
    return px, py


def project_to_ellipse(dom: EllipseDomain, x):
    """Closest point on the ellipse boundary to x (shape (2,) or (N, 2))."""
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    pts = np.atleast_2d(x)
    x0, y0 = np.abs(pts[:, 0]), np.abs(pts[:, 1])

    if dom.is_circle:
        radius = np.hypot(x0, y0)
        if np.any(radius == 0.0):
            raise ConfigError("the circle centre has no unique nearest boundary point", sys)
        px, py = dom.a * x0 / radius, dom.a * y0 / radius
    else:
        px, py = _project_first_quadrant(dom.a, dom.b, x0, y0)

    sx = np.where(pts[:, 0] < 0.0, -1.0, 1.0)
    sy = np.where(pts[:, 1] < 0.0, -1.0, 1.0)
    p = np.stack([sx * px, sy * py], axis=-1)
    return p[0] if single else p


@dataclass(frozen=True)
class LocalFrame:
    """
    rho: signed distance of the node to the boundary (negative inside).
    omega: rotation whose columns are the tangent and the inner normal, so
    that local coordinates xi = omega^T (y - node) see the tangential
    half-plane as {xi_2 > rho}.
    """

    rho: float
    omega: np.ndarray

    @property
    def normal(self):
        return self.omega[:, -1]


def _circle_centre(dom: Domain, nodes):
    if isinstance(dom, EllipseDomain) and dom.is_circle:
        return np.all(nodes == 0.0, axis=-1)
    return np.zeros(len(nodes), dtype=bool)


def _frames(dom: Domain, nodes):
    nodes = np.asarray(nodes, dtype=float)
    centre = _circle_centre(dom, nodes)
    p = np.empty_like(nodes)
    if np.any(~centre):
        p[~centre] = dom.nearest_boundary_point(nodes[~centre])
    if np.any(centre):
        # the whole circle is nearest to its centre; take the point on the positive x1-axis
        p[centre] = (dom.a, 0.0)
    normal = dom.inner_normal(p)
    tangent = np.stack([normal[..., 1], -normal[..., 0]], axis=-1)
    omega = np.stack([tangent, normal], axis=-1)
    d = np.linalg.norm(nodes - p, axis=-1)
    rho = np.where(dom.contains(nodes), -d, d)
    return rho, omega


def local_frame(dom: Domain, node) -> LocalFrame:
    """Signed distance and rotation of the tangential half-plane at a node."""
    node = np.asarray(node, dtype=float)
    rho, omega = _frames(dom, node.reshape(1, 2))
    return LocalFrame(rho=float(rho[0]), omega=omega[0])


@dataclass
class NodeSet:
    """
    Interior indices (inside, distance >= strip width) and strip indices
    (distance < strip width, either side) with their frames, both sorted
    lexicographically.
    """

    interior: np.ndarray
    strip: np.ndarray
    strip_rho: np.ndarray
    strip_omega: np.ndarray
    excluded: int = 0

    def frame(self, i: int) -> LocalFrame:
        return LocalFrame(rho=float(self.strip_rho[i]), omega=self.strip_omega[i])

    def strip_pairs(self):
        for i in range(len(self.strip)):
            yield tuple(int(v) for v in self.strip[i]), self.frame(i)

    @property
    def counts(self):
        return {"interior": len(self.interior), "strip": len(self.strip), "excluded": self.excluded}


def classify_nodes(dom: Domain, params: RunParams) -> NodeSet:
    """Assign every node of the inflated bounding box to the interior, the strip or neither."""
    width = params.support
    lower, upper = dom.bounding_box()
    lo = np.floor((lower - width) / params.h).astype(int)
    hi = np.ceil((upper + width) / params.h).astype(int)
    axes = [np.arange(lo[i], hi[i] + 1) for i in range(2)]
    # row-major flattening of an "ij" mesh is lexicographic order
    indices = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 2)

    interior, strip = [], []
    for start in range(0, len(indices), CLASSIFY_CHUNK):
        block = indices[start:start + CLASSIFY_CHUNK]
        rho = dom.signed_distance(params.h * block)
        inside = rho <= 0.0
        interior.append(block[inside & (-rho >= width)])
        strip.append(block[np.abs(rho) < width])

    interior = np.concatenate(interior)
    strip = np.concatenate(strip)
    if len(strip):
        strip_rho, strip_omega = _frames(dom, params.h * strip)
    else:
        strip_rho, strip_omega = np.empty(0), np.empty((0, 2, 2))

    nodes = NodeSet(
        interior=interior,
        strip=strip,
        strip_rho=strip_rho,
        strip_omega=strip_omega,
        excluded=len(indices) - len(interior) - len(strip),
    )
    logger.info(f"Classified {len(indices)} nodes at h={params.h:.6g}: {nodes.counts}")
    return nodes
