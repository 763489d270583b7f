"""
Run configuration for the command line.

Responsibilities:
- hold every user-facing setting of a run
- merge defaults, environment, a key=value config file and command-line flags
- parse step sizes written as 0.0078125, 2^-7 or 1/128
- validate into RunParams, QuadratureRule and EllipseDomain
"""

import os
import re
import sys
from dataclasses import dataclass, field, fields
from fractions import Fraction
from typing import List, Optional

import pandas as pd
from dotenv import dotenv_values, load_dotenv

from helmholtz_cubature.basis.de_rule import PRESETS, QuadratureRule
from helmholtz_cubature.params import RunParams
from helmholtz_cubature.pipeline.geometry import ELLIPSE_PRESETS, EllipseDomain
from helmholtz_cubature.utils.exception import ConfigError

load_dotenv()

_POWER = re.compile(r"^\s*(\d+(?:\.\d*)?)\s*\^\s*([+-]?\d+)\s*$")


def parse_step(text) -> float:
    """0.0078125, 2^-7 and 1/128 all give the same double."""
    if isinstance(text, (int, float)):
        return float(text)
    text = str(text).strip()
    match = _POWER.match(text)
    try:
        if match:
            return float(Fraction(match.group(1)) ** int(match.group(2)))
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"cannot parse step size '{text}'", sys)


def parse_points(text) -> List[tuple]:
    """Points from a CSV file (columns x1, x2) or inline as 'x1,x2;x1,x2'."""
    if text is None:
        return []
    if isinstance(text, (list, tuple)):
        return [tuple(float(v) for v in p) for p in text]
    text = str(text).strip()
    if not text:
        return []
    if os.path.isfile(text):
        df = pd.read_csv(text, comment="#")
        if not {"x1", "x2"} <= set(df.columns):
            raise ConfigError(f"point file {text} needs columns x1 and x2", sys)
        return [(float(a), float(b)) for a, b in zip(df["x1"], df["x2"])]
    points = []
    for chunk in text.split(";"):
        parts = [p for p in re.split(r"[,\s]+", chunk.strip()) if p]
        if len(parts) != 2:
            raise ConfigError(f"cannot parse point '{chunk}', expected 'x1,x2'", sys)
        try:
            points.append((float(parts[0]), float(parts[1])))
        except ValueError:
            raise ConfigError(f"cannot parse point '{chunk}'", sys)
    return points


def _parse_list(text, convert):
    if isinstance(text, (list, tuple)):
        return [convert(v) for v in text]
    return [convert(v) for v in str(text).split(",") if v.strip()]


def _parse_bool(text) -> bool:
    if isinstance(text, bool):
        return text
    value = str(text).strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off", ""):
        return False
    raise ConfigError(f"cannot parse boolean '{text}'", sys)


def _parse_pair(text):
    """'k1,k2:m1,m2' -> ((k1, k2), (m1, m2))."""
    if isinstance(text, tuple):
        return text
    try:
        k, m = str(text).split(":")
        return tuple(int(v) for v in k.split(",")), tuple(int(v) for v in m.split(","))
    except ValueError:
        raise ConfigError(f"cannot parse node pair '{text}', expected 'k1,k2:m1,m2'", sys)


@dataclass
class RunConfig:
    """Every setting of a run; defaults reproduce the circle, lambda^2 = 2 setting."""

    domain: Optional[str] = "circle"
    a: Optional[float] = None
    b: Optional[float] = None
    density: str = "f"
    lambda2: float = 2.0
    h: List[float] = field(default_factory=lambda: [2.0 ** -7])
    D: float = 3.0
    M: int = 3
    r: float = 6.0
    rule: str = "coarse"
    alpha: Optional[float] = None
    beta: Optional[float] = None
    tau: Optional[float] = None
    smin: Optional[int] = None
    smax: Optional[int] = None
    points: List[tuple] = field(default_factory=list)
    out: Optional[str] = None
    threads: int = 1
    exact: bool = False
    reference: str = "exact"
    ksq: List[int] = field(default_factory=list)
    pair: List[tuple] = field(default_factory=list)

    _CONVERTERS = {
        "domain": str,
        "a": float,
        "b": float,
        "density": str,
        "lambda2": float,
        "h": lambda v: _parse_list(v, parse_step),
        "D": float,
        "M": int,
        "r": float,
        "rule": str,
        "alpha": float,
        "beta": float,
        "tau": float,
        "smin": int,
        "smax": int,
        "points": parse_points,
        "out": str,
        "threads": int,
        "exact": _parse_bool,
        "reference": str,
        "ksq": lambda v: _parse_list(v, int),
        "pair": lambda v: [_parse_pair(p) for p in (v if isinstance(v, list) else str(v).split(";")) if p],
    }

    def update(self, values: dict, source: str):
        """Apply values (strings or typed); unknown keys are rejected."""
        known = {f.name for f in fields(self)}
        for key, raw in values.items():
            if raw is None:
                continue
            if key not in known:
                raise ConfigError(f"unknown configuration key '{key}' in {source}", sys)
            try:
                setattr(self, key, self._CONVERTERS[key](raw))
            except ConfigError:
                raise
            except (TypeError, ValueError) as e:
                raise ConfigError(f"invalid value {raw!r} for '{key}' in {source}: {e}", sys)
        return self

    @classmethod
    def resolve(cls, flags: dict, config_path: Optional[str] = None) -> "RunConfig":
        """Defaults < environment < config file < flags."""
        config = cls()
        threads = os.getenv("HELMCUB_THREADS")
        if threads:
            config.update({"threads": threads}, "environment")
        if config_path:
            if not os.path.isfile(config_path):
                raise ConfigError(f"config file {config_path} not found", sys)
            config.update(dict(dotenv_values(config_path)), config_path)
        # explicit semi-axes override a preset domain and vice versa
        if flags.get("a") is not None or flags.get("b") is not None:
            config.domain = None
        elif flags.get("domain") is not None:
            config.a = config.b = None
        return config.update(flags, "command line")

    def to_domain(self) -> EllipseDomain:
        if self.a is not None or self.b is not None:
            if self.a is None or self.b is None:
                raise ConfigError("both semi-axes a and b are needed", sys)
            return EllipseDomain(self.a, self.b)
        if self.domain not in ELLIPSE_PRESETS:
            raise ConfigError(f"unknown domain '{self.domain}', expected one of {sorted(ELLIPSE_PRESETS)}", sys)
        return EllipseDomain.preset(self.domain)

    def to_params(self, h: Optional[float] = None) -> RunParams:
        if h is None:
            if not self.h:
                raise ConfigError("no grid step given", sys)
            h = self.h[0]
        return RunParams(h=h, D=self.D, M=self.M, r=self.r, lambda2=self.lambda2, n=2)

    def to_rule(self) -> QuadratureRule:
        if self.rule not in PRESETS:
            raise ConfigError(f"unknown quadrature rule '{self.rule}', expected one of {sorted(PRESETS)}", sys)
        base = dict(PRESETS[self.rule])
        overrides = {"alpha": self.alpha, "beta": self.beta, "tau": self.tau, "s_min": self.smin, "s_max": self.smax}
        base.update({k: v for k, v in overrides.items() if v is not None})
        return QuadratureRule(**base)

    def validate(self):
        """Build every derived object once so errors surface before any computation."""
        self.to_domain()
        for h in self.h:
            self.to_params(h)
        self.to_rule()
        if self.threads < 1:
            raise ConfigError(f"thread count must be >= 1, got {self.threads}", sys)
        return self

    def describe(self) -> dict:
        """Effective settings echoed into output headers."""
        domain = self.to_domain()
        rule = self.to_rule()
        return {
            "domain": f"ellipse a={domain.a:g} b={domain.b:g}",
            "density": self.density,
            "lambda2": repr(self.lambda2),
            "h": ",".join(repr(h) for h in self.h),
            "D": repr(self.D),
            "M": str(self.M),
            "r": repr(self.r),
            "quadrature": f"alpha={rule.alpha:g} beta={rule.beta:g} tau={rule.tau:g} s=[{rule.s_min},{rule.s_max}]",
            "threads": str(self.threads),
        }
