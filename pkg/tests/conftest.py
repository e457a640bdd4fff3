import numpy as np
import pytest

from homelearn import kernels
from homelearn.clusters import NetworkConfig
from homelearn.decay import DecayConfig
from homelearn.memory import MemoryConfig, MemoryStore


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    kernels.warmup()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def no_decay():
    return DecayConfig(alpha=0.0)


@pytest.fixture
def ltm_decay():
    return DecayConfig(alpha=0.2)


@pytest.fixture
def stm_decay():
    return DecayConfig(alpha=15.0)


def make_store(dim=64, tau_obj=0.0003, tau_ctx=0.13, ltm_alpha=0.2, stm_alpha=15.0, gamma=3.0,
               match_radius=4.5):
    return MemoryStore(
        dim=dim,
        config=MemoryConfig(
            gamma=gamma,
            ltm_decay=DecayConfig(alpha=ltm_alpha),
            stm_decay=DecayConfig(alpha=stm_alpha),
            stm_match_radius=match_radius,
        ),
        object_config=NetworkConfig(tau=tau_obj),
        context_config=NetworkConfig(tau=tau_ctx),
    )
