import math
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from indefsaddle import BoxDomain, NewtonConfig, ProblemSpec


@pytest.fixture(scope="session")
def interval() -> BoxDomain:
    return BoxDomain((math.pi,))


@pytest.fixture(scope="session")
def cubic_spec(interval) -> ProblemSpec:
    """The reference symmetric problem: 1-D, p = q = 3, n = 32."""
    return ProblemSpec.create(interval, n=32, r=1.0, p=3.0, q=3.0)


@pytest.fixture(scope="session")
def perturbed_spec(cubic_spec) -> ProblemSpec:
    """The reference problem with forcing 0.05 phi_1 in both equations."""
    return cubic_spec.with_forcing(h=[0.05], k=[0.05])


@pytest.fixture(scope="session")
def newton_config() -> NewtonConfig:
    return NewtonConfig()
