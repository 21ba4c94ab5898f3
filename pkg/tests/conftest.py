import random

import pytest

from grafhen.presets import toy_s9_generators
from grafhen.protocol import SchemeConfig, keygen, keygen_from_generators


@pytest.fixture(scope="session")
def toy():
    """The eight-generator S9 key with its complete rule set."""
    cfg = SchemeConfig(n=9, d=8, seed=0, db_size=64)
    return keygen_from_generators(cfg, toy_s9_generators())


@pytest.fixture(scope="session")
def small_plain():
    return keygen(SchemeConfig(n=7, d=4, seed=1, db_size=32))


@pytest.fixture(scope="session")
def small_sd():
    cfg = SchemeConfig(mode="sd", n=7, d=3, seed=6, filter="admissible", k=4,
                       stop="pseudo_bounded", check_floor=5000, check_every=5000,
                       db_size=32)
    return keygen(cfg)


@pytest.fixture
def rng():
    return random.Random(12345)
