import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from chainflux.model import ModelSpec, classify

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

GOLDEN = json.loads((Path(__file__).parent / "fixtures" / "golden.json").read_text())


def grid(n: int) -> np.ndarray:
    return -math.pi + 2 * math.pi * np.arange(n) / n


def xy(gamma, h, beta_L=1.0, beta_R=2.0, **kw) -> ModelSpec:
    return ModelSpec(nu=1, c0=[0], c1=[0], c2=[gamma], c3_0=h, c3=[Fraction(1, 2)],
                     beta_L=beta_L, beta_R=beta_R, **kw)


def random_model(rng, nu=None, beta_L=1.0, beta_R=2.0, zero_prob=0.3, **kw) -> ModelSpec:
    """Random coefficients on a 0.05 grid so that exact degeneracies stay reachable."""
    nu = nu or int(rng.integers(1, 4))

    def arr():
        v = np.round(rng.uniform(-1, 1, nu) * 20) / 20
        v[rng.random(nu) < zero_prob] = 0
        return [Fraction(int(round(x * 20)), 20) for x in v]

    while True:
        c3_0 = Fraction(int(round(rng.uniform(-1, 1) * 20)), 20)
        try:
            return ModelSpec(nu=nu, c0=arr(), c1=arr(), c2=arr(), c3_0=c3_0, c3=arr(),
                             beta_L=beta_L, beta_R=beta_R, **kw)
        except ValueError:
            continue


def random_admissible(rng, **kw) -> ModelSpec:
    while True:
        m = random_model(rng, **kw)
        if classify(m).flux_admissible:
            return m


@st.composite
def models(draw, max_nu=3, admissible=False):
    seed = draw(st.integers(0, 2**32 - 1))
    nu = draw(st.integers(1, max_nu))
    rng = np.random.default_rng(seed)
    return random_admissible(rng, nu=nu) if admissible else random_model(rng, nu=nu)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
