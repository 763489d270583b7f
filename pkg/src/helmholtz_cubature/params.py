"""
Run parameters shared by the basis functions, the coefficient integrals
and the cubature assembly.
"""

import math
import sys
from dataclasses import dataclass

from helmholtz_cubature.utils.exception import ConfigError

MAX_ORDER = 8


@dataclass(frozen=True)
class RunParams:
    """
    Grid step h, shape parameter D, order M (approximation order 2M),
    support radius r in units of h*sqrt(D), squared Helmholtz parameter
    lambda2 and space dimension n.
    """

    h: float
    D: float = 3.0
    M: int = 3
    r: float = 6.0
    lambda2: float = 2.0
    n: int = 2

    def __post_init__(self):
        if not (math.isfinite(self.h) and self.h > 0):
            raise ConfigError(f"grid step h must be positive, got {self.h}", sys)
        if not (math.isfinite(self.D) and self.D >= 1):
            raise ConfigError(f"shape parameter D must be >= 1, got {self.D}", sys)
        if int(self.M) != self.M or not 1 <= self.M <= MAX_ORDER:
            raise ConfigError(f"order M must be an integer in [1, {MAX_ORDER}], got {self.M}", sys)
        if not (math.isfinite(self.r) and self.r >= 1):
            raise ConfigError(f"support radius r must be >= 1, got {self.r}", sys)
        if not (math.isfinite(self.lambda2) and self.lambda2 > 0):
            raise ConfigError(
                f"lambda2 must be positive (the n=2 coefficient integral diverges at 0), got {self.lambda2}",
                sys,
            )
        if int(self.n) != self.n or self.n < 1:
            raise ConfigError(f"dimension n must be a positive integer, got {self.n}", sys)

    @property
    def scale(self) -> float:
        """Length unit h*sqrt(D) of the scaled basis functions."""
        return self.h * math.sqrt(self.D)

    @property
    def support(self) -> float:
        """Width r*h*sqrt(D) of the boundary strip."""
        return self.r * self.scale

    @property
    def lam2h2D(self) -> float:
        """Scaled Helmholtz parameter lambda^2 h^2 D entering the t-integrals."""
        return self.lambda2 * self.h * self.h * self.D

    @property
    def prefactor(self) -> float:
        """h^2 D^(1-n/2) / pi^(n/2), shared by the interior and strip sums."""
        return self.h * self.h * self.D ** (1.0 - self.n / 2.0) / math.pi ** (self.n / 2.0)

    def with_step(self, h: float) -> "RunParams":
        return RunParams(h=h, D=self.D, M=self.M, r=self.r, lambda2=self.lambda2, n=self.n)
