import os
import tempfile

# keep test logs out of the working tree; must run before the package is imported
os.environ.setdefault("HELMCUB_LOG_DIR", tempfile.mkdtemp(prefix="helmcub-logs-"))

import pytest

from helmholtz_cubature.basis.de_rule import QuadratureRule
from helmholtz_cubature.params import RunParams
from helmholtz_cubature.pipeline.geometry import EllipseDomain


@pytest.fixture
def circle():
    return EllipseDomain.preset("circle")


@pytest.fixture
def ellipse():
    return EllipseDomain.preset("ellipse")


@pytest.fixture
def thin():
    return EllipseDomain.preset("thin")


@pytest.fixture
def coarse_rule():
    return QuadratureRule.preset("coarse")


@pytest.fixture
def fine_rule():
    return QuadratureRule.preset("fine")


@pytest.fixture
def small_params():
    """Coarse grid that keeps full cubature runs to a second or two."""
    return RunParams(h=0.125, D=2.0, M=2, r=3.0, lambda2=1.0)
